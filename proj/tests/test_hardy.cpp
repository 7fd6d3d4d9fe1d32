#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hle/closed_forms.hpp"
#include "hle/errors.hpp"
#include "hle/hardy.hpp"
#include "hle/lane_emden.hpp"
#include "hle/spectral.hpp"

using namespace hle;

namespace {

DomainPtr disk(double h) { return build_domain(ShapeSpec::ball(2, {0, 0, 0}, 1.0), h); }

} // namespace

TEST_CASE("hardy_weight: delta = 1 has no gradient term") {
    DomainPtr dom = disk(1.0 / 32);
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-10);
    HardyWeight w = hardy_weight(d, 1.0, -1);
    for (int i = 0; i < w.grad_term.size(); ++i) CHECK(w.grad_term[i] == 0.0);
    for (int i = 0; i < w.density_term.size(); ++i) {
        double expected = std::pow(std::max(d.field[i], w.floor_used), -1.0);
        CHECK(w.density_term[i] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("hardy_weight: delta = 2 reproduces the quarter/half weights") {
    DomainPtr dom = disk(1.0 / 32);
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-10);
    double floor = dom->h * dom->h;
    HardyWeight w = hardy_weight(d, 2.0, floor);
    ScalarField g = gradient_norm_squared_field(d.field, floor);
    for (int i = 0; i < g.size(); ++i) {
        CHECK(w.grad_term[i] == doctest::Approx(0.25 * g[i]).epsilon(1e-13));
        double expected = 0.5 / std::max(d.field[i], floor);
        CHECK(w.density_term[i] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("hardy_weight: delta below one flips the gradient sign") {
    DomainPtr dom = disk(1.0 / 32);
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-10);
    HardyWeight w = hardy_weight(d, 0.5, -1);
    bool some_negative = false;
    for (int i = 0; i < w.grad_term.size(); ++i) {
        CHECK(w.grad_term[i] <= 0.0);
        some_negative = some_negative || w.grad_term[i] < 0;
        CHECK(w.density_term[i] > 0.0);
    }
    CHECK(some_negative);
}

TEST_CASE("check_hardy: zero test function passes trivially") {
    DomainPtr dom = disk(1.0 / 32);
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-10);
    auto rows = check_hardy(d, 2.0, {{"zero", ScalarField(dom, 0.0)}});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].lhs == 0.0);
    CHECK(rows[0].rhs == 0.0);
    CHECK(rows[0].pass);
}

TEST_CASE("check_hardy: eigenfunction carries a positive margin") {
    DomainPtr dom = disk(std::pow(2.0, -6));
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-10);
    SpectralResult eig = principal_eigenvalue(dom, 1e-9);
    ScalarField phi = eig.eigenfunction;
    zero_near_boundary(phi, 2);
    auto rows = check_hardy(d, 2.0, {{"eigenfunction", phi}});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].pass);
    CHECK(rows[0].margin > 0.0);
}

TEST_CASE("check_hardy: full delta sweep over the random corpus") {
    DomainPtr dom = build_domain(ShapeSpec::rectangle(2, {0, 0, 0}, {1, 1, 0}), 1.0 / 32);
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-10);
    SpectralResult eig = principal_eigenvalue(dom, 1e-9);
    auto corpus = make_test_corpus(dom, eig.eigenfunction, d.field, 42, 20);
    for (double delta : {0.5, 1.0, 2.0, 4.0}) {
        auto rows = check_hardy(d, delta, corpus);
        for (const auto& row : rows) CHECK(row.pass);
    }
}

TEST_CASE("limit_potential: disk matches the closed form away from the boundary") {
    DomainPtr dom = disk(std::pow(2.0, -7));
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-11);
    Potential V = limit_potential(d);
    ClosedForm reference = ClosedForm::ball_limit_potential(2, 1.0);
    double worst = 0;
    for (int i = 0; i < V.field.size(); ++i) {
        Point p = dom->position(i);
        if (p[0] * p[0] + p[1] * p[1] > 0.64) continue;
        double ref = reference(p);
        // near the center the reference vanishes; measure against a floor
        worst = std::max(worst, std::abs(V.field[i] - ref) / std::max(std::abs(ref), 0.05));
    }
    CHECK(worst <= 0.02);
}

TEST_CASE("limit_potential: slab window and the constant field") {
    DomainPtr dom = build_domain(ShapeSpec::slab(2, 1.0, 4.0), std::pow(2.0, -6));
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-11);
    Potential V = limit_potential(d);
    ClosedForm reference = ClosedForm::slab_limit_potential(2, 1.0);
    double worst = 0;
    for (int i = 0; i < V.field.size(); ++i) {
        Point p = dom->position(i);
        if (std::abs(p[0]) > 0.8 || std::abs(p[1]) > 1.0) continue;
        double ref = reference(p);
        double denom = std::max(std::abs(ref), 0.05);
        worst = std::max(worst, std::abs(V.field[i] - ref) / denom);
    }
    CHECK(worst <= 0.05);

    LaneEmdenDensity fake = d;
    fake.field = constant_field(dom, 0.7);
    Potential flat = limit_potential(fake);
    for (int i = 0; i < flat.field.size(); ++i) CHECK(flat.field[i] == 0.0);
}

TEST_CASE("check_admissible: limit potential and its scalings") {
    DomainPtr dom = disk(1.0 / 32);
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-10);
    Potential V = limit_potential(d);
    CHECK(check_admissible(V, d).fraction == 1.0);

    ScalarField half = V.field;
    for (double& v : half.values) v *= 0.5;
    CHECK(check_admissible(Potential(half, "half"), d).fraction == 1.0);

    ScalarField twice = V.field;
    for (double& v : twice.values) v *= 2.0;
    AdmissibilityReport rep = check_admissible(Potential(twice, "double"), d);
    CHECK(rep.fraction < 1.0);
    CHECK(rep.worst_node >= 0);
    CHECK(rep.worst_violation > 0.0);
}

TEST_CASE("theorem_bound: model geometries") {
    DomainPtr dom = disk(std::pow(2.0, -6));
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-10);
    CHECK(std::abs(theorem_bound(d) - 2.0) <= 0.01 * 2.0);

    DomainPtr interval = build_domain(ShapeSpec::interval(-1, 1), std::pow(2.0, -7));
    LaneEmdenDensity di = solve_lane_emden(interval, 1.0, 1e-12);
    CHECK(theorem_bound(di) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("half-integer gamma values are exact") {
    CHECK(half_integer_gamma(1) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
    CHECK(half_integer_gamma(2) == 1.0);
    CHECK(half_integer_gamma(3) ==
          doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-15));
    CHECK(half_integer_gamma(4) == 1.0);
    CHECK(half_integer_gamma(6) == 2.0);
    CHECK(half_integer_gamma(8) == 6.0);
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(unit_ball_volume(3) ==
          doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-15));
}

TEST_CASE("talenti_constant: closed evaluations") {
    double t3 = std::numbers::pi * 3.0 *
                std::pow(std::sqrt(std::numbers::pi) / 4.0, 2.0 / 3.0);
    CHECK(std::abs(talenti_constant(3) - t3) <= 1e-12);
    CHECK(std::abs(talenti_constant(4) - 8.0 * std::numbers::pi / std::sqrt(6.0)) <= 1e-12);
    CHECK_THROWS_AS(talenti_constant(2), InvalidDimensionError);
}

TEST_CASE("moser_constant: dimensional cases") {
    for (double q : {1.0, 1.25, 1.5, 1.75})
        CHECK(std::abs(moser_constant(1, q) - 8.0 * std::sqrt(5.0)) <= 1e-12);

    double t3 = talenti_constant(3);
    double expected3 = std::sqrt(unit_ball_volume(3)) * std::pow(12.0, 3.0 / 8.0) *
                       std::pow(640.0 * t3, 0.75);
    CHECK(std::abs(moser_constant(3, 1.0) - expected3) <= 1e-9 * expected3);

    CHECK_THROWS_AS(moser_constant(4, 1.0), InvalidDimensionError);
    CHECK_THROWS_AS(moser_constant(2, 1.0, 1.5), MissingGammaError);
    CHECK_THROWS_AS(moser_constant(2, 2.5), InvalidExponentError);
}

TEST_CASE("moser_constant: 2d value uses the computed disk constant") {
    // at gamma = 4 both exponents in the formula collapse to one
    double C = moser_constant(2, 1.0);
    DomainPtr fine = disk(std::pow(2.0, -7));
    double lam4 = lambda_2gamma(fine, 4.0, 1e-8);
    double expected = std::sqrt(std::numbers::pi) * 8.0 * (640.0 / lam4);
    CHECK(std::abs(C - expected) <= 1e-6 * expected);
}

TEST_CASE("corollary_bound: ordering and edge cases") {
    CHECK(corollary_bound(0.0, 2, 1.0) == 0.0);
    DomainPtr dom = disk(1.0 / 32);
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-10);
    double lambda1 = principal_eigenvalue(dom, 1e-9).eigenvalue;
    double weak = corollary_bound(lambda1, 2, 1.0);
    CHECK(weak > 0.0);
    CHECK(weak < 2.0);
    CHECK(weak <= theorem_bound(d));
    CHECK(perturbation_margin(lambda1, 2, 1.0) == weak);
}

TEST_CASE("perturbation_margin: shifting by most of the margin keeps positivity") {
    DomainPtr dom = disk(1.0 / 32);
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-10);
    Potential V = limit_potential(d);
    double lambda1 = principal_eigenvalue(dom, 1e-9).eigenvalue;
    double margin = perturbation_margin(lambda1, 2, 1.0);

    ScalarField shifted = V.field;
    for (double& v : shifted.values) v -= 0.9 * margin;
    double lam = schrodinger_ground_state(dom, Potential(shifted, "shifted"), 1e-9).eigenvalue;
    CHECK(lam > 0.0);

    double lam0 = schrodinger_ground_state(dom, V, 1e-9).eigenvalue;
    ScalarField unshifted = V.field;
    double lam0b =
        schrodinger_ground_state(dom, Potential(unshifted, "same"), 1e-9).eigenvalue;
    CHECK(lam0 == doctest::Approx(lam0b).epsilon(1e-10));
}

TEST_CASE("check_linfty_estimate: interior balls") {
    DomainPtr dom = disk(1.0 / 32);
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-10);
    LinftyReport r2 = check_linfty_estimate(d, {0, 0, 0}, 0.5, 2.0);
    LinftyReport r4 = check_linfty_estimate(d, {0, 0, 0}, 0.5, 4.0);
    CHECK(r2.pass);
    CHECK(r4.pass);
    CHECK(r4.rhs >= r2.rhs);  // power-mean monotonicity
    CHECK_THROWS_AS(check_linfty_estimate(d, {0.8, 0, 0}, 0.5, 2.0), BallNotContainedError);

    DomainPtr slab = build_domain(ShapeSpec::slab(2, 1.0, 4.0), 1.0 / 32);
    LaneEmdenDensity ds = solve_lane_emden(slab, 1.5, 1e-9);
    CHECK(check_linfty_estimate(ds, {0, 0, 0}, 0.5, 2.0).pass);
}

TEST_CASE("check_dorin: both sides hold on the model domains") {
    struct Case {
        ShapeSpec shape;
        double h;
    };
    std::vector<Case> cases{{ShapeSpec::ball(2, {0, 0, 0}, 1.0), 1.0 / 32},
                            {ShapeSpec::rectangle(2, {0, 0, 0}, {1, 1, 0}), 1.0 / 32},
                            {ShapeSpec::interval(-1, 1), 1.0 / 128}};
    for (const auto& c : cases) {
        DomainPtr dom = build_domain(c.shape, c.h);
        double lambda1 = principal_eigenvalue(dom, 1e-9).eigenvalue;
        for (double q : {1.0, 1.5}) {
            LaneEmdenDensity d = solve_lane_emden(dom, q, 1e-9);
            DorinReport rep = check_dorin(d, lambda1, dom->dim);
            CHECK(rep.lower_pass);
            CHECK(rep.upper_pass);
            CHECK(rep.upper_ratio >= 1.0);
        }
    }
    // hand-checked numbers on the disk
    DomainPtr dom = disk(std::pow(2.0, -6));
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-10);
    double lambda1 = principal_eigenvalue(dom, 1e-9).eigenvalue;
    DorinReport rep = check_dorin(d, lambda1, 2);
    CHECK(rep.lower_lhs == doctest::Approx(1.0 / lambda1).epsilon(1e-12));
    CHECK(rep.lower_lhs <= rep.sup_density);
}

TEST_CASE("check_bilat: identity at gamma = q and the general bounds") {
    DomainPtr dom = disk(std::pow(2.0, -6));
    LaneEmdenDensity d1 = solve_lane_emden(dom, 1.0, 1e-10);
    double lam1 = lambda_2gamma(dom, 1.0, 1e-9);
    BilatReport same = check_bilat(d1, 1.0, lam1);
    CHECK(same.lower_pass);
    CHECK(same.upper_pass);
    CHECK(std::abs(same.middle - 1.0) <= 0.02);
    CHECK(same.upper_bound == doctest::Approx(1.0));

    double lam15 = lambda_2gamma(dom, 1.5, 1e-9);
    BilatReport mixed = check_bilat(d1, 1.5, lam15);
    CHECK(mixed.lower_pass);
    CHECK(mixed.upper_pass);

    DomainPtr interval = build_domain(ShapeSpec::interval(-1, 1), std::pow(2.0, -7));
    LaneEmdenDensity d125 = solve_lane_emden(interval, 1.25, 1e-10);
    double lam_i = lambda_2gamma(interval, 1.5, 1e-9);
    BilatReport r = check_bilat(d125, 1.5, lam_i);
    CHECK(r.lower_pass);
    CHECK(r.upper_pass);

    CHECK_THROWS_AS(check_bilat(d125, 1.1, lam_i), InvalidExponentError);
    CHECK_THROWS_AS(check_bilat(d125, 2.0, lam_i), InvalidExponentError);
}

TEST_CASE("ground_state_representation_check") {
    DomainPtr dom = disk(std::pow(2.0, -7));
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-11);

    RepresentationReport identity = ground_state_representation_check(d, 1.0);
    CHECK(identity.relative_residual <= 100 * d.residual + 1e-9);

    RepresentationReport sqrt_rep = ground_state_representation_check(d, 2.0);
    CHECK(sqrt_rep.pass);
    CHECK(sqrt_rep.nodes_checked > 0);

    DomainPtr interval = build_domain(ShapeSpec::interval(-1, 1), std::pow(2.0, -8));
    LaneEmdenDensity di = solve_lane_emden(interval, 1.0, 1e-12);
    RepresentationReport rep1d = ground_state_representation_check(di, 2.0);
    CHECK(rep1d.relative_residual <= 0.03);
}

TEST_CASE("make_test_corpus: support, count, determinism") {
    DomainPtr dom = disk(1.0 / 32);
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-9);
    SpectralResult eig = principal_eigenvalue(dom, 1e-9);
    auto corpus = make_test_corpus(dom, eig.eigenfunction, d.field, 99, 20);
    CHECK(corpus.size() == 25);  // eigenfunction, density, 3 bumps, 20 random
    for (const auto& [id, f] : corpus)
        for (int i = 0; i < f.size(); ++i)
            if (dom->boundary_layer[i] < 2) CHECK(f[i] == 0.0);

    auto corpus2 = make_test_corpus(dom, eig.eigenfunction, d.field, 99, 20);
    for (std::size_t k = 0; k < corpus.size(); ++k)
        for (int i = 0; i < corpus[k].second.size(); ++i)
            CHECK(corpus[k].second[i] == corpus2[k].second[i]);

    auto corpus3 = make_test_corpus(dom, eig.eigenfunction, d.field, 100, 20);
    bool differs = false;
    for (int i = 0; i < corpus[5].second.size(); ++i)
        differs = differs || corpus[5].second[i] != corpus3[5].second[i];
    CHECK(differs);
}

TEST_CASE("certify: passing, failing, and incomplete runs") {
    DomainPtr dom = disk(1.0 / 16);
    // the same tolerance certify uses internally, so the limit potential is
    // definitionally admissible for the re-solved density
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-8);
    Potential V = limit_potential(d);

    CertifyOptions opts;
    opts.seed = 7;
    BoundCertificate pass = certify(dom, 1.0, V, opts);
    CHECK(pass.verdict == Verdict::Pass);
    CHECK(pass.lambda1_V >= pass.theorem_bound_value - pass.slack);
    CHECK(pass.corollary_bound_value <= pass.theorem_bound_value);
    CHECK(pass.admissible_fraction == 1.0);
    CHECK(pass.hardy_checks.size() == 4 * 25);

    ScalarField triple = V.field;
    for (double& v : triple.values) v *= 3.0;
    BoundCertificate fail = certify(dom, 1.0, Potential(triple, "3x limit"), opts);
    CHECK(fail.verdict == Verdict::Fail);
    CHECK(fail.verdict_reason == "ADMISSIBILITY");
    CHECK(fail.admissible_fraction < 1.0);

    BoundCertificate incomplete = certify(dom, 2.5, V, opts);
    CHECK(incomplete.verdict == Verdict::Incomplete);
    CHECK(!incomplete.verdict_reason.empty());
}

TEST_CASE("certify: truncated slab with its limit potential") {
    DomainPtr dom = build_domain(ShapeSpec::slab(2, 1.0, 8.0), std::pow(2.0, -5));
    LaneEmdenDensity d = solve_lane_emden(dom, 1.0, 1e-8);
    BoundCertificate cert = certify(dom, 1.0, limit_potential(d), {});
    CHECK(cert.verdict == Verdict::Pass);
    CHECK(std::abs(cert.theorem_bound_value - 1.0) <= 0.02);
    CHECK(cert.lambda1_V >= cert.theorem_bound_value - cert.slack);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <thread>
#include <vector>

#include "hle/errors.hpp"
#include "hle/grid.hpp"
#include "hle/rng.hpp"

using namespace hle;

namespace {

DomainPtr interval_domain(double h) { return build_domain(ShapeSpec::interval(-1, 1), h); }

} // namespace

TEST_CASE("build_domain: interval nodes land on the lattice") {
    DomainPtr dom = interval_domain(0.25);
    REQUIRE(dom->node_count() == 7);
    std::set<double> xs;
    for (int i = 0; i < dom->node_count(); ++i) xs.insert(dom->position(i)[0]);
    std::set<double> expected{-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75};
    CHECK(xs.size() == expected.size());
    for (double x : expected) CHECK(xs.count(x) == 1);
}

TEST_CASE("build_domain: too coarse spacing is rejected") {
    CHECK_THROWS_AS(build_domain(ShapeSpec::ball(2, {0, 0, 0}, 1.0), 2.0),
                    SpacingTooCoarseError);
    CHECK_THROWS_AS(build_domain(ShapeSpec::ball(2, {0, 0, 0}, 1.0), 0.5),
                    SpacingTooCoarseError);
    CHECK_NOTHROW(build_domain(ShapeSpec::ball(2, {0, 0, 0}, 1.0), 0.25));
}

TEST_CASE("build_domain: interior nodes lie strictly inside and neighbors are consistent") {
    DomainPtr dom = build_domain(ShapeSpec::ball(2, {0.1, -0.2, 0}, 0.9), 1.0 / 16);
    REQUIRE(dom->node_count() > 0);
    for (int i = 0; i < dom->node_count(); ++i) {
        CHECK(dom->shape.inside_distance(dom->position(i)) > 0);
        for (int k = 0; k < 2 * dom->dim; ++k) {
            std::int32_t j = dom->neighbors[i * 2 * dom->dim + k];
            if (j >= 0) {
                // neighbor relation is mutual
                bool found = false;
                for (int kk = 0; kk < 2 * dom->dim; ++kk)
                    found = found || dom->neighbors[j * 2 * dom->dim + kk] == i;
                CHECK(found);
            }
        }
    }
}

TEST_CASE("apply_laplacian: zero field maps to zero") {
    DomainPtr dom = interval_domain(0.25);
    ScalarField u(dom, 0.0);
    ScalarField y = apply_laplacian(u);
    for (int i = 0; i < y.size(); ++i) CHECK(y[i] == 0.0);
}

TEST_CASE("apply_laplacian: exact on the interval parabola") {
    // second differences of (1-x^2)/2 are exact, and the zero extension
    // coincides with the true boundary values at +-1
    DomainPtr dom = interval_domain(0.25);
    ScalarField u = sample_function(dom, [](const Point& p) {
        return (1 - p[0] * p[0]) / 2;
    });
    ScalarField y = apply_laplacian(u);
    for (int i = 0; i < y.size(); ++i) CHECK(y[i] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("apply_laplacian: exact on a quadratic away from the boundary") {
    DomainPtr dom = build_domain(ShapeSpec::rectangle(2, {0, 0, 0}, {1, 1, 0}), 1.0 / 16);
    ScalarField u = sample_function(dom, [](const Point& p) { return p[0] * p[0]; });
    ScalarField y = apply_laplacian(u);
    int checked = 0;
    for (int i = 0; i < y.size(); ++i) {
        if (dom->boundary_layer[i] < 2) continue;
        CHECK(y[i] == doctest::Approx(-2.0).epsilon(1e-12));
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("solve_poisson: interval torsion is exact at the center") {
    DomainPtr dom = interval_domain(std::pow(2.0, -7));
    ScalarField u = solve_poisson(constant_field(dom, 1.0), 1e-13);
    std::int32_t c = dom->node_near({0, 0, 0});
    REQUIRE(c >= 0);
    CHECK(std::abs(u[c] - 0.5) <= 1e-10);
}

TEST_CASE("solve_poisson: zero data gives the zero solution") {
    DomainPtr dom = interval_domain(0.25);
    ScalarField u = solve_poisson(constant_field(dom, 0.0), 1e-12);
    for (int i = 0; i < u.size(); ++i) CHECK(u[i] == 0.0);
}

TEST_CASE("solve_poisson: disk torsion center value") {
    DomainPtr dom = build_domain(ShapeSpec::ball(2, {0, 0, 0}, 1.0), std::pow(2.0, -7));
    ScalarField u = solve_poisson(constant_field(dom, 1.0), 1e-12);
    std::int32_t c = dom->node_near({0, 0, 0});
    CHECK(std::abs(u[c] - 0.25) <= 1e-3);
}

TEST_CASE("l2_inner: nodal quadrature weights") {
    DomainPtr dom = build_domain(ShapeSpec::ball(2, {0, 0, 0}, 1.0), 0.25);
    ScalarField u(dom, 0.0), v(dom, 0.0);
    u[0] = 1.0;
    v[0] = 1.0;
    CHECK(l2_inner(u, v) == doctest::Approx(0.0625).epsilon(1e-15));  // h^2 = 0.25^2

    // disjoint indicator supports are orthogonal
    ScalarField a(dom, 0.0), b(dom, 0.0);
    a[1] = 3.0;
    b[2] = 5.0;
    CHECK(l2_inner(a, b) == 0.0);

    DomainPtr interval = interval_domain(0.25);
    ScalarField ones = constant_field(interval, 1.0);
    CHECK(l2_inner(ones, ones) == doctest::Approx(1.75).epsilon(1e-15));
}

TEST_CASE("l2_inner: mismatched domains are rejected") {
    DomainPtr a = interval_domain(0.25);
    DomainPtr b = interval_domain(0.125);
    CHECK_THROWS_AS(l2_inner(ScalarField(a, 1.0), ScalarField(b, 1.0)), DomainMismatchError);
}

TEST_CASE("dirichlet_energy: hand-checked values") {
    DomainPtr dom = build_domain(ShapeSpec::interval(-2, 2), 0.5);
    ScalarField u(dom, 0.0);
    CHECK(dirichlet_energy(u) == 0.0);
    u[1] = 1.0;  // single interior node: energy (2/h^2) * h = 4
    CHECK(dirichlet_energy(u) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("dirichlet_energy: sine eigenfunction") {
    DomainPtr dom = interval_domain(std::pow(2.0, -7));
    ScalarField u = sample_function(dom, [](const Point& p) {
        return std::sin(std::numbers::pi * (p[0] + 1) / 2);
    });
    double lam = std::numbers::pi * std::numbers::pi / 4;
    CHECK(dirichlet_energy(u) ==
          doctest::Approx(lam * l2_inner(u, u)).epsilon(1e-3));
}

TEST_CASE("summation by parts holds to rounding") {
    Xorshift64Star rng(7);
    DomainPtr dom = build_domain(ShapeSpec::ball(2, {0, 0, 0}, 1.0), 1.0 / 16);
    ScalarField u(dom), v(dom);
    for (int i = 0; i < u.size(); ++i) {
        u[i] = rng.uniform(-1, 1);
        v[i] = rng.uniform(-1, 1);
    }
    double a = l2_inner(apply_laplacian(u), v);
    double b = l2_inner(u, apply_laplacian(v));
    CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), 1.0));
}

TEST_CASE("maximum principle: positive data gives a positive solution") {
    Xorshift64Star rng(11);
    std::vector<BallSpec> balls{{{0, 0, 0}, 0.8}, {{0.9, 0, 0}, 0.6}};
    DomainPtr dom = build_domain(ShapeSpec::union_of_balls(2, balls), 1.0 / 16);
    ScalarField f(dom);
    for (int i = 0; i < f.size(); ++i) f[i] = rng.uniform(0.01, 1.0);
    ScalarField u = solve_poisson(f, 1e-12);
    CHECK(min_value(u) > 0.0);
}

TEST_CASE("gradient_norm_squared_field: constants and linears") {
    DomainPtr dom = build_domain(ShapeSpec::interval(0.5, 2.5), 1.0 / 16);
    ScalarField c = constant_field(dom, 3.0);
    ScalarField gc = gradient_norm_squared_field(c, 1e-4);
    for (int i = 0; i < gc.size(); ++i) CHECK(gc[i] == 0.0);

    ScalarField x = sample_function(dom, [](const Point& p) { return p[0]; });
    ScalarField gx = gradient_norm_squared_field(x, 1e-4);
    for (int i = 0; i < gx.size(); ++i) {
        double xi = dom->position(i)[0];
        CHECK(gx[i] == doctest::Approx(1.0 / (xi * xi)).epsilon(1e-12));
    }
}

TEST_CASE("gradient_norm_squared_field: floor clamps small denominators") {
    DomainPtr dom = interval_domain(0.25);
    ScalarField x = sample_function(dom, [](const Point& p) { return p[0]; });
    double floor = 0.1;
    ScalarField g = gradient_norm_squared_field(x, floor);
    for (int i = 0; i < g.size(); ++i) {
        CHECK(std::isfinite(g[i]));
        double denom = std::max(dom->position(i)[0], floor);
        CHECK(g[i] == doctest::Approx(1.0 / (denom * denom)).epsilon(1e-12));
    }
}

TEST_CASE("disk torsion refines at second order at the center") {
    double err[4];
    for (int k = 4; k <= 7; ++k) {
        DomainPtr dom = build_domain(ShapeSpec::ball(2, {0, 0, 0}, 1.0), std::pow(2.0, -k));
        ScalarField u = solve_poisson(constant_field(dom, 1.0), 1e-12);
        err[k - 4] = std::abs(u[dom->node_near({0, 0, 0})] - 0.25);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 0; k < 4; ++k) {
        double x = std::log(std::pow(2.0, -(k + 4)));
        double y = std::log(std::max(err[k], 1e-16));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double order = (4 * sxy - sx * sy) / (4 * sxx - sx * sx);
    CHECK(order >= 1.8);
}

TEST_CASE("concurrent solves on a shared domain match the serial results") {
    DomainPtr dom = build_domain(ShapeSpec::ball(2, {0, 0, 0}, 1.0), 1.0 / 32);
    ScalarField serial[4];
    for (int k = 0; k < 4; ++k) {
        ScalarField f = sample_function(dom, [k](const Point& p) {
            return 1.0 + 0.2 * k * std::cos(p[0] + k * p[1]);
        });
        serial[k] = solve_poisson(f, 1e-11);
    }
    ScalarField parallel[4];
    std::vector<std::thread> workers;
    for (int k = 0; k < 4; ++k)
        workers.emplace_back([&, k] {
            ScalarField f = sample_function(dom, [k](const Point& p) {
                return 1.0 + 0.2 * k * std::cos(p[0] + k * p[1]);
            });
            parallel[k] = solve_poisson(f, 1e-11);
        });
    for (auto& w : workers) w.join();
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < serial[k].size(); ++i)
            CHECK(parallel[k][i] == serial[k][i]);
}

TEST_CASE("zero_near_boundary leaves only deep nodes") {
    DomainPtr dom = build_domain(ShapeSpec::ball(2, {0, 0, 0}, 1.0), 1.0 / 16);
    ScalarField u = constant_field(dom, 1.0);
    zero_near_boundary(u, 2);
    for (int i = 0; i < u.size(); ++i) {
        if (dom->boundary_layer[i] < 2)
            CHECK(u[i] == 0.0);
        else
            CHECK(u[i] == 1.0);
    }
}

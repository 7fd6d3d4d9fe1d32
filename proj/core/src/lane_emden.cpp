#include "hle/lane_emden.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hle/errors.hpp"

namespace hle {

namespace {

void check_exponent(double q) {
    if (!(q >= 1.0 && q < 2.0))
        throw InvalidExponentError("Lane-Emden exponent must satisfy 1 <= q < 2, got " +
                                   std::to_string(q));
}

ScalarField rhs_power(const ScalarField& u, double q) {
    ScalarField f(u.domain);
    if (q == 1.0) {
        std::fill(f.values.begin(), f.values.end(), 1.0);
        return f;
    }
    for (int i = 0; i < u.size(); ++i) {
        double v = std::max(u[i], 0.0);
        f[i] = v > 0 ? std::pow(v, q - 1.0) : 0.0;
    }
    return f;
}

double pde_residual(const ScalarField& u, const ScalarField& f) {
    ScalarField Au = apply_laplacian(u);
    double num = 0, den = 0;
    for (int i = 0; i < u.size(); ++i) {
        double d = Au[i] - f[i];
        num += d * d;
        den += f[i] * f[i];
    }
    if (den == 0) return num == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

} // namespace

LaneEmdenDensity solve_lane_emden(DomainPtr dom, double q, double tol, int max_iter,
                                  const ScalarField* init) {
    check_exponent(q);
    if (!(tol > 0)) throw std::invalid_argument("solve_lane_emden requires tol > 0");

    LaneEmdenDensity out;
    out.q = q;

    if (q == 1.0) {
        ScalarField one = constant_field(dom, 1.0);
        out.field = solve_poisson(one, tol);
        out.residual = pde_residual(out.field, one);
        out.iterations = 1;
        out.energy = lane_emden_energy(out.field, q);
        return out;
    }

    ScalarField u;
    if (init && init->domain == dom) {
        u = *init;
    } else if (init) {
        throw DomainMismatchError("initial guess lives on a different domain");
    } else {
        u = solve_poisson(constant_field(dom, 1.0), tol);
    }

    const double inner_tol = std::min(tol * 0.05, 1e-10);
    double res_prev = std::numeric_limits<double>::infinity();
    double res = res_prev;
    for (int k = 1; k <= max_iter; ++k) {
        ScalarField f = rhs_power(u, q);
        // A zero iterate is a fixed point of the map for q > 1; reseed with
        // the torsion right-hand side so the iteration targets the positive
        // solution.
        if (max_value(f) <= 0) std::fill(f.values.begin(), f.values.end(), 1.0);
        ScalarField v = solve_poisson(f, inner_tol);
        ScalarField fv = rhs_power(v, q);
        res = pde_residual(v, fv);
        if (res > res_prev) {
            for (int i = 0; i < v.size(); ++i) v[i] = 0.5 * (u[i] + v[i]);
            fv = rhs_power(v, q);
            res = pde_residual(v, fv);
        }
        u = std::move(v);
        out.iterations = k;
        if (res <= tol) {
            out.field = std::move(u);
            out.residual = res;
            out.energy = lane_emden_energy(out.field, q);
            return out;
        }
        res_prev = res;
    }
    throw NoConvergenceError("Lane-Emden iteration stalled at residual " +
                                 std::to_string(res) + " after " +
                                 std::to_string(max_iter) + " steps",
                             res, max_iter);
}

double lane_emden_energy(const ScalarField& u, double q) {
    check_exponent(q);
    double mass = 0;
    for (double v : u.values)
        if (v > 0) mass += std::pow(v, q);
    mass *= std::pow(u.domain->h, u.domain->dim);
    return 0.5 * dirichlet_energy(u) - mass / q;
}

double lambda_2q_from_density(const LaneEmdenDensity& d) {
    const double q = d.q;
    double s = 0;
    for (double v : d.field.values)
        if (v > 0) s += std::pow(v, q);
    s *= std::pow(d.field.domain->h, d.field.domain->dim);
    return std::pow(s, -(2.0 - q) / q);
}

ScalarField scale_solution(const ScalarField& u, double t, double q) {
    check_exponent(q);
    if (!(t > 0)) throw std::invalid_argument("scale_solution requires t > 0");
    ScalarField v = u;
    const double factor = std::pow(t, 1.0 / (q - 2.0));
    for (double& x : v.values) x *= factor;
    return v;
}

ComparisonReport comparison_check(const LaneEmdenDensity& d1, const LaneEmdenDensity& d2) {
    const GridDomain& a = *d1.field.domain;
    const GridDomain& b = *d2.field.domain;
    if (d1.q != d2.q) throw GridMismatchError("comparison_check requires equal exponents");
    if (a.dim != b.dim || std::abs(a.h - b.h) > 1e-12 * a.h)
        throw GridMismatchError("comparison_check requires the same lattice");

    ComparisonReport rep;
    rep.tolerance = 10.0 * (d1.residual + d2.residual);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < d1.field.size(); ++i) {
        std::int32_t j = b.node_at(a.lattice_coords(i));
        if (j < 0)
            throw GridMismatchError("domain of d1 is not contained in domain of d2");
        worst = std::max(worst, d1.field[i] - d2.field[j]);
        ++rep.shared_nodes;
    }
    rep.max_violation = worst;
    rep.pass = worst <= rep.tolerance;
    return rep;
}

ExhaustionRun exhaust_density(const ShapeSpec& spec, double h, double q,
                              const std::vector<double>& radii, double tol) {
    if (spec.kind != ShapeSpec::Kind::Slab && spec.kind != ShapeSpec::Kind::Waveguide)
        throw GeometryMismatchError("exhaust_density applies to slab and waveguide shapes");
    if (radii.size() < 3) throw std::invalid_argument("exhaust_density needs >= 3 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw std::invalid_argument("exhaust_density radii must be strictly increasing");

    ExhaustionRun run;
    run.shape = spec;
    run.q = q;
    run.h = h;
    run.radii = radii;

    for (double R : radii) {
        DomainPtr dom = build_domain(spec.with_extent(R), h);
        run.densities.push_back(solve_lane_emden(dom, q, tol));
    }

    const GridDomain& probe = *run.densities.front().field.domain;
    run.monotone = true;
    for (std::size_t k = 0; k + 1 < run.densities.size(); ++k) {
        const auto& wa = run.densities[k].field;
        const auto& wb = run.densities[k + 1].field;
        const GridDomain& da = *wa.domain;
        const GridDomain& db = *wb.domain;
        double inc = 0, violation = 0;
        for (int i = 0; i < probe.node_count(); ++i) {
            auto key = probe.lattice_coords(i);
            std::int32_t ia = da.node_at(key);
            std::int32_t ib = db.node_at(key);
            if (ia < 0 || ib < 0) continue;
            double diff = wb[ib] - wa[ia];
            inc = std::max(inc, std::abs(diff));
            violation = std::max(violation, -diff);
        }
        run.increments.push_back(inc);
        run.max_monotonicity_violation = std::max(run.max_monotonicity_violation, violation);
        if (violation > 1e-8) run.monotone = false;
    }
    return run;
}

} // namespace hle

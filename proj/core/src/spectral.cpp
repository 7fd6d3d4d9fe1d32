#include "hle/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hle/cg.hpp"
#include "hle/errors.hpp"

namespace hle {

Potential::Potential(ScalarField f, std::string source)
    : field(std::move(f)), provenance(std::move(source)) {
    for (double v : field.values) {
        if (!std::isfinite(v)) throw std::invalid_argument("potential values must be finite");
        if (v > 0) throw std::invalid_argument("potential values must be <= 0");
    }
}

namespace {

struct ShiftedOperator {
    const GridDomain& dom;
    const std::vector<double>* potential;  // nullptr for the pure Laplacian
    double shift;

    void operator()(const double* x, double* y) const {
        laplacian_apply_raw(dom, x, y);
        const int M = dom.node_count();
        if (potential) {
            const double* V = potential->data();
            for (int i = 0; i < M; ++i) y[i] += (V[i] - shift) * x[i];
        } else if (shift != 0.0) {
            for (int i = 0; i < M; ++i) y[i] -= shift * x[i];
        }
    }

    std::vector<double> inverse_diagonal() const {
        const int M = dom.node_count();
        const double base = 2.0 * dom.dim / (dom.h * dom.h);
        std::vector<double> inv(M);
        for (int i = 0; i < M; ++i) {
            double d = base + (potential ? (*potential)[i] : 0.0) - shift;
            inv[i] = d > 0 ? 1.0 / d : 1.0;
        }
        return inv;
    }
};

double plain_norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// Inverse power iteration with a shift that trails the Rayleigh quotient.
/// sigma_floor must keep A - sigma positive definite initially; afterwards
/// the shift is raised by a residual-based margin and lowered again whenever
/// the inner CG detects indefiniteness.
SpectralResult smallest_eigenpair(DomainPtr dom, const std::vector<double>* potential,
                                  double sigma_floor, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("eigensolver requires tol > 0");
    const int M = dom->node_count();
    const int max_outer = 200;
    const int inner_cap = std::max(2000, 10 * M);

    std::vector<double> u(M, 1.0), z(M, 0.0), Au(M);
    double un = plain_norm(u);
    for (double& v : u) v /= un;

    double sigma = sigma_floor;
    double rho = 0, rho_prev = std::numeric_limits<double>::infinity();
    double resid = std::numeric_limits<double>::infinity();
    int streak = 0;
    SpectralResult out;

    for (int outer = 1; outer <= max_outer; ++outer) {
        ShiftedOperator op{*dom, potential, sigma};
        auto inv_diag = op.inverse_diagonal();
        std::fill(z.begin(), z.end(), 0.0);
        auto cg = conjugate_gradient(op, u, z, 1e-8, inner_cap, inv_diag);
        if (cg.indefinite) {
            // shift overtook the bottom eigenvalue; retreat and retry
            double step = std::isfinite(resid)
                              ? std::max(4.0 * resid, 1e-6 * std::max(1.0, std::abs(rho)))
                              : 1.0 + 0.01 * std::abs(sigma);
            sigma -= step;
            continue;
        }
        double zn = plain_norm(z);
        if (!(zn > 0)) throw NoConvergenceError("inverse iteration produced a zero vector", 0, outer);
        for (double& v : z) v /= zn;

        ShiftedOperator full{*dom, potential, 0.0};
        full(z.data(), Au.data());
        double num = 0;
        for (int i = 0; i < M; ++i) num += z[i] * Au[i];
        rho = num;
        double rn = 0;
        for (int i = 0; i < M; ++i) {
            double d = Au[i] - rho * z[i];
            rn += d * d;
        }
        resid = std::sqrt(rn);
        u = z;
        out.iterations = outer;

        const double resid_target = std::sqrt(tol) * std::max(1.0, std::abs(rho));
        if (std::abs(rho - rho_prev) <= tol * std::max(1.0, std::abs(rho)) &&
            resid <= resid_target) {
            if (++streak >= 2) break;
        } else {
            streak = 0;
        }
        rho_prev = rho;
        sigma = std::max(sigma, rho - std::max(3.0 * resid, 1e-12 * std::abs(rho)));
    }

    if (streak < 2)
        throw NoConvergenceError("inverse power iteration did not settle", resid,
                                 out.iterations);

    // sign convention: principal eigenfunction nonnegative
    double pos = 0, neg = 0;
    for (double v : u) (v >= 0 ? pos : neg) += std::abs(v);
    if (neg > pos)
        for (double& v : u) v = -v;

    out.eigenvalue = rho;
    out.eigenfunction = ScalarField(dom);
    out.eigenfunction.values = std::move(u);
    const double scale = 1.0 / l2_norm(out.eigenfunction);
    for (double& v : out.eigenfunction.values) v *= scale;
    // residual in the discrete L2 norm with the normalized eigenfunction
    out.residual = resid * scale * std::pow(dom->h, dom->dim * 0.5);
    return out;
}

} // namespace

SpectralResult principal_eigenvalue(DomainPtr dom, double tol) {
    return smallest_eigenpair(dom, nullptr, 0.0, tol);
}

SpectralResult schrodinger_ground_state(DomainPtr dom, const Potential& V, double tol) {
    if (V.field.domain != dom)
        throw DomainMismatchError("potential lives on a different domain");
    double vmin = min_value(V.field);
    return smallest_eigenpair(dom, &V.field.values, vmin - 1.0, tol);
}

double rayleigh_quotient(const ScalarField& u, const Potential* V) {
    double mass = l2_inner(u, u);
    if (mass == 0) throw ZeroFieldError("rayleigh_quotient of the zero field");
    double energy = dirichlet_energy(u);
    if (V) {
        if (V->field.domain != u.domain)
            throw DomainMismatchError("potential lives on a different domain");
        double pot = 0;
        for (int i = 0; i < u.size(); ++i) pot += V->field[i] * u[i] * u[i];
        energy += pot * std::pow(u.domain->h, u.domain->dim);
    }
    return energy / mass;
}

double lambda_2gamma(DomainPtr dom, double gamma, double tol) {
    if (!(gamma >= 1.0))
        throw InvalidExponentError("lambda_2gamma requires gamma >= 1");
    if (dom->dim == 3 && gamma >= 6.0)
        throw InvalidExponentError("lambda_2gamma in 3d requires gamma < 6");
    if (!(tol > 0)) throw std::invalid_argument("lambda_2gamma requires tol > 0");

    const int M = dom->node_count();
    const double hN = std::pow(dom->h, dom->dim);

    SpectralResult eig = principal_eigenvalue(dom, std::min(tol, 1e-8));
    std::vector<double> u = eig.eigenfunction.values;
    for (double& v : u) v = std::abs(v);

    auto gamma_norm = [&](const std::vector<double>& w) {
        double s = 0;
        for (double v : w) s += std::pow(std::abs(v), gamma);
        return std::pow(hN * s, 1.0 / gamma);
    };
    auto normalize = [&](std::vector<double>& w) {
        double n = gamma_norm(w);
        if (!(n > 0)) throw ZeroFieldError("lambda_2gamma iterate collapsed to zero");
        for (double& v : w) v /= n;
    };
    std::vector<double> Au(M);
    auto energy_of = [&](const std::vector<double>& w) {
        laplacian_apply_raw(*dom, w.data(), Au.data());
        double e = 0;
        for (int i = 0; i < M; ++i) e += w[i] * Au[i];
        return hN * e;
    };

    normalize(u);
    double ratio = energy_of(u);  // ||u||_gamma = 1, so the ratio is the energy

    // Descent on the scale-invariant ratio. The raw gradient stalls at a
    // 1 - O(h^2) contraction, so the step direction is preconditioned by the
    // inverse stencil; tau = 1 is then the nonlinear inverse-iteration map
    // and Armijo backtracking only guards the nonlinearity.
    ShiftedOperator op{*dom, nullptr, 0.0};
    std::vector<double> grad(M), dir(M), trial(M);
    int streak = 0;
    const int cap = 500;
    for (int it = 1; it <= cap; ++it) {
        laplacian_apply_raw(*dom, u.data(), Au.data());
        for (int i = 0; i < M; ++i) {
            double p = u[i] > 0 ? std::pow(u[i], gamma - 1.0) : 0.0;
            grad[i] = Au[i] - ratio * p;
        }
        std::fill(dir.begin(), dir.end(), 0.0);
        conjugate_gradient(op, grad, dir, 1e-10, 10 * M);
        double slope = 0;  // grad' A^{-1} grad >= 0
        for (int i = 0; i < M; ++i) slope += grad[i] * dir[i];
        if (slope <= 0) break;

        double tau = 1.0;
        double new_ratio = ratio;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (int i = 0; i < M; ++i) trial[i] = std::abs(u[i] - tau * dir[i]);
            double n = gamma_norm(trial);
            if (n > 0) {
                for (double& v : trial) v /= n;
                double e = energy_of(trial);
                if (e <= ratio - 1e-4 * tau * hN * slope) {
                    new_ratio = e;
                    u.swap(trial);
                    accepted = true;
                    break;
                }
            }
            tau *= 0.5;
        }

        double change = std::abs(new_ratio - ratio);
        ratio = new_ratio;
        if (!accepted || change <= tol * std::abs(ratio)) {
            if (++streak >= 10) return ratio;
        } else {
            streak = 0;
        }
    }
    if (streak >= 10) return ratio;
    throw NoConvergenceError("lambda_2gamma descent did not settle", ratio, cap);
}

} // namespace hle

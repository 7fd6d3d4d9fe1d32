#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace hle {

struct CgResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
    bool indefinite = false;  // encountered p'Ap <= 0 (operator not SPD)
};

/// Matrix-free (preconditioned) conjugate gradients for SPD operators.
/// apply(x, y) writes y = A x. Stops when ||b - A x||_2 <= tol ||b||_2.
/// inv_diag, when nonempty, enables Jacobi preconditioning.
template <class Op>
CgResult conjugate_gradient(Op&& apply, std::span<const double> b, std::vector<double>& x,
                            double tol, int max_iter,
                            std::span<const double> inv_diag = {}) {
    const std::size_t M = b.size();
    CgResult out;

    double bn2 = 0;
    for (double v : b) bn2 += v * v;
    if (bn2 == 0) {
        std::fill(x.begin(), x.end(), 0.0);
        out.converged = true;
        return out;
    }
    const double stop2 = tol * tol * bn2;

    std::vector<double> r(M), p(M), Ap(M), z;
    apply(x.data(), Ap.data());
    for (std::size_t i = 0; i < M; ++i) r[i] = b[i] - Ap[i];

    const bool precond = !inv_diag.empty();
    double rz = 0, rn2 = 0;
    if (precond) {
        z.resize(M);
        for (std::size_t i = 0; i < M; ++i) {
            z[i] = inv_diag[i] * r[i];
            p[i] = z[i];
            rz += r[i] * z[i];
            rn2 += r[i] * r[i];
        }
    } else {
        for (std::size_t i = 0; i < M; ++i) {
            p[i] = r[i];
            rn2 += r[i] * r[i];
        }
        rz = rn2;
    }

    while (rn2 > stop2 && out.iterations < max_iter) {
        apply(p.data(), Ap.data());
        double pAp = 0;
        for (std::size_t i = 0; i < M; ++i) pAp += p[i] * Ap[i];
        if (!(pAp > 0)) {
            out.indefinite = true;
            break;
        }
        const double alpha = rz / pAp;
        for (std::size_t i = 0; i < M; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        double rz_next = 0;
        rn2 = 0;
        if (precond) {
            for (std::size_t i = 0; i < M; ++i) {
                z[i] = inv_diag[i] * r[i];
                rz_next += r[i] * z[i];
                rn2 += r[i] * r[i];
            }
            const double beta = rz_next / rz;
            for (std::size_t i = 0; i < M; ++i) p[i] = z[i] + beta * p[i];
        } else {
            for (std::size_t i = 0; i < M; ++i) rn2 += r[i] * r[i];
            const double beta = rn2 / rz;
            for (std::size_t i = 0; i < M; ++i) p[i] = r[i] + beta * p[i];
            rz_next = rn2;
        }
        rz = rz_next;
        ++out.iterations;
    }

    out.relative_residual = std::sqrt(rn2 / bn2);
    out.converged = rn2 <= stop2;
    return out;
}

} // namespace hle

#pragma once

#include <string>

#include "hle/grid.hpp"

namespace hle {

/// Nonpositive potential sampled on a grid domain.
struct Potential {
    ScalarField field;
    std::string provenance;

    Potential(ScalarField f, std::string source);
};

/// Bottom eigenpair. eigenfunction has unit discrete L2 norm; residual is
/// ||A u - lambda u|| in that norm and stays below sqrt(tol) * max(1,|lambda|).
struct SpectralResult {
    double eigenvalue = 0.0;
    ScalarField eigenfunction;
    double residual = 0.0;
    int iterations = 0;
};

/// Smallest eigenvalue of -Delta_h by shifted inverse power iteration with
/// CG inner solves; stops when the Rayleigh quotient settles to relative
/// change <= tol.
SpectralResult principal_eigenvalue(DomainPtr dom, double tol = 1e-9);

/// Smallest eigenvalue of -Delta_h + diag(V). The shift starts at
/// min(V) - 1 (the operator minus shift is then positive definite) and is
/// raised adaptively toward the Rayleigh quotient as the iteration locks on.
SpectralResult schrodinger_ground_state(DomainPtr dom, const Potential& V,
                                        double tol = 1e-9);

/// (dirichlet_energy(u) + int V u^2) / int u^2. Throws ZeroFieldError.
double rayleigh_quotient(const ScalarField& u, const Potential* V = nullptr);

/// Optimal constant of the embedding into L^gamma: minimizes
/// dirichlet_energy(u)/||u||_gamma^2 by projected gradient descent with
/// Armijo backtracking from step 1.0, normalized and sign-projected each
/// step, initialized at the principal eigenfunction. Converged when the
/// ratio's relative change stays below tol for 10 consecutive iterations
/// (500-iteration cap).
double lambda_2gamma(DomainPtr dom, double gamma, double tol = 1e-8);

} // namespace hle

#pragma once

#include <vector>

#include "hle/grid.hpp"

namespace hle {

/// Solution of -Delta_h w = w^{q-1} with zero Dirichlet extension, together
/// with its solve diagnostics. field is strictly positive on interior nodes.
struct LaneEmdenDensity {
    double q = 1.0;
    ScalarField field;
    double residual = 0.0;    // ||A w - w_+^{q-1}|| / ||w_+^{q-1}||
    int iterations = 0;       // Picard steps (1 for q = 1)
    double energy = 0.0;      // value of the variational functional
};

/// Picard iteration u <- (-Delta_h)^{-1} max(u,0)^{q-1}, torsion-function
/// init, automatic half-step damping when the residual increases. q = 1 is a
/// single linear solve.
LaneEmdenDensity solve_lane_emden(DomainPtr dom, double q, double tol = 1e-8,
                                  int max_iter = 200, const ScalarField* init = nullptr);

/// (1/2) dirichlet_energy(u) - (1/q) h^N sum max(u,0)^q.
double lane_emden_energy(const ScalarField& u, double q);

/// (h^N sum w^q)^{-(2-q)/q}: the optimal Poincare constant recovered from
/// the density integral.
double lambda_2q_from_density(const LaneEmdenDensity& d);

/// t^{1/(q-2)} u: maps a solution of -Delta u = t u^{q-1} to a solution with
/// coefficient one.
ScalarField scale_solution(const ScalarField& u, double t, double q);

struct ComparisonReport {
    bool pass = false;
    double max_violation = 0.0;  // max over shared nodes of w1 - w2
    double tolerance = 0.0;
    int shared_nodes = 0;
};

/// Nested-domain comparison: d1's nodes must be a subset of d2's on the same
/// lattice; the smaller density must not exceed the larger one.
ComparisonReport comparison_check(const LaneEmdenDensity& d1, const LaneEmdenDensity& d2);

struct ExhaustionRun {
    ShapeSpec shape;
    double q = 1.0;
    double h = 0.0;
    std::vector<double> radii;
    std::vector<LaneEmdenDensity> densities;
    std::vector<double> increments;  // sup-norm increments on the probe window
    bool monotone = false;
    double max_monotonicity_violation = 0.0;
};

/// Solve on increasing truncations of a slab or waveguide; densities increase
/// nodewise on the probe window (the smallest truncation's node set).
ExhaustionRun exhaust_density(const ShapeSpec& spec, double h, double q,
                              const std::vector<double>& radii, double tol);

} // namespace hle

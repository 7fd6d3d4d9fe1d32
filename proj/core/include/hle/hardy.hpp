#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hle/lane_emden.hpp"
#include "hle/spectral.hpp"

namespace hle {

/// The two summands of the Hardy weight built from a density w:
/// (1/delta)(1-1/delta)|grad w / w|^2 and (1/delta) w^{q-2}.
struct HardyWeight {
    double delta = 0.0;
    ScalarField grad_term;
    ScalarField density_term;
    double floor_used = 0.0;
};

HardyWeight hardy_weight(const LaneEmdenDensity& d, double delta, double floor);

struct HardyCheckRow {
    double delta = 0.0;
    std::string test_id;
    double lhs = 0.0;     // weighted mass of phi^2
    double rhs = 0.0;     // dirichlet energy of phi
    double margin = 0.0;  // rhs - lhs
    bool pass = false;    // margin >= -5 h rhs
};

/// Evaluate the weighted quadratic-form inequality for each test function.
/// Test functions are expected to vanish within 2h of the mask boundary.
std::vector<HardyCheckRow> check_hardy(const LaneEmdenDensity& d, double delta,
                                       const std::vector<std::pair<std::string, ScalarField>>& tests,
                                       double floor = -1.0);

/// Most negative admissible potential: -(1/4)|grad w / w|^2 per node.
Potential limit_potential(const LaneEmdenDensity& d, double floor = -1.0);

struct AdmissibilityReport {
    double fraction = 0.0;  // nodes with 0 >= V >= -(1/4)|grad w/w|^2 - 1e-12
    int worst_node = -1;
    double worst_violation = 0.0;
};

AdmissibilityReport check_admissible(const Potential& V, const LaneEmdenDensity& d,
                                     double floor = -1.0);

/// (1/2) ||w||_inf^{q-2}: the ground-state lower bound certified by an
/// admissible potential.
double theorem_bound(const LaneEmdenDensity& d);

/// Gamma(k/2) evaluated exactly by the half-integer recursion.
double half_integer_gamma(int twice_x);

/// Volume of the unit ball in dimension N.
double unit_ball_volume(int N);

/// Sharp Sobolev constant, N >= 3.
double talenti_constant(int N);

/// Explicit constant of the local sup bound for density subsolutions.
/// N = 2 uses the numerically computed lambda_{2,gamma} of the unit disk
/// (cached, h = 2^-7); gamma defaults to 4 and must exceed 2.
double moser_constant(int N, double q, std::optional<double> gamma = std::nullopt);

/// Fully explicit ground-state lower bound in terms of lambda_1(Omega).
double corollary_bound(double lambda1, int N, double q);

/// Largest uniform downward shift of the potential that keeps the spectrum
/// positive; equals corollary_bound.
double perturbation_margin(double lambda1, int N, double q);

struct LinftyReport {
    double lhs = 0.0;  // sup of w over the half ball
    double rhs = 0.0;
    double ratio = 0.0;  // rhs / lhs
    bool pass = false;
};

/// Local sup estimate check on an interior ball (coefficient lambda = 1).
LinftyReport check_linfty_estimate(const LaneEmdenDensity& d, const Point& center,
                                   double R0, double alpha);

struct DorinReport {
    double sup_density = 0.0;
    double lower_lhs = 0.0;  // lambda1^{1/(q-2)}
    double upper_rhs = 0.0;
    bool lower_pass = false;
    bool upper_pass = false;
    double upper_ratio = 0.0;  // upper_rhs / sup_density
};

/// Two-sided sup-norm vs lambda_1 estimate with relative slack 5h per side.
DorinReport check_dorin(const LaneEmdenDensity& d, double lambda1, int N);

struct BilatReport {
    double middle = 0.0;       // lambda_{2,gamma} (int w^{(2-q)gamma/(2-gamma)})^{(2-gamma)/gamma}
    double upper_bound = 0.0;  // (2-gamma)/(gamma-2(q-1)) ((2-q)/(2-gamma))^2
    bool lower_pass = false;   // middle >= 1 within 2%
    bool upper_pass = false;   // middle <= upper_bound within 2%
};

BilatReport check_bilat(const LaneEmdenDensity& d, double gamma, double lambda_2gamma_val);

struct RepresentationReport {
    double relative_residual = 0.0;
    int nodes_checked = 0;
    bool pass = false;  // <= 0.05 on nodes >= 3h inside
};

/// W = w^{1/delta} satisfies -Delta W = W * hardy weight; checks the discrete
/// residual away from the boundary.
RepresentationReport ground_state_representation_check(const LaneEmdenDensity& d, double delta);

/// Test-function corpus: principal eigenfunction, the density, tensor bumps,
/// and seeded random smooth bump sums, all zeroed within 2h of the boundary.
std::vector<std::pair<std::string, ScalarField>> make_test_corpus(
    DomainPtr dom, const ScalarField& eigenfunction, const ScalarField& density,
    std::uint64_t seed, int n_random);

enum class Verdict { Pass, Fail, Incomplete };

std::string to_string(Verdict v);

struct CertifyOptions {
    std::vector<double> deltas{0.5, 1.0, 2.0, 4.0};
    double lane_emden_tol = 1e-8;
    double eigen_tol = 1e-9;
    double floor = -1.0;  // < 0: use h^2
    std::uint64_t seed = 1;
    int n_random_tests = 20;
};

/// Everything the certification run established, assembled in one record.
struct BoundCertificate {
    double q = 1.0;
    int dim = 0;
    ShapeSpec shape;
    double h = 0.0;
    double slack = 0.0;  // 5h

    double density_sup = 0.0;
    double density_residual = 0.0;
    int density_iterations = 0;

    double lambda1 = 0.0;
    double lambda1_V = 0.0;
    double theorem_bound_value = 0.0;
    double corollary_bound_value = 0.0;

    double admissible_fraction = 0.0;
    double worst_admissibility_violation = 0.0;

    std::vector<HardyCheckRow> hardy_checks;

    Verdict verdict = Verdict::Incomplete;
    std::string verdict_reason;
};

/// Full pipeline: density solve, eigensolves, admissibility, Hardy sweep,
/// bound assembly. Sub-errors leave a partial certificate marked INCOMPLETE.
BoundCertificate certify(DomainPtr dom, double q, const Potential& V,
                         const CertifyOptions& opts = {});

} // namespace hle

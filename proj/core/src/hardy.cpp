#include "hle/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "hle/errors.hpp"
#include "hle/rng.hpp"

namespace hle {

namespace {

double default_floor(const LaneEmdenDensity& d, double floor) {
    if (floor > 0) return floor;
    double h = d.field.domain->h;
    return h * h;
}

} // namespace

HardyWeight hardy_weight(const LaneEmdenDensity& d, double delta, double floor) {
    if (!(delta > 0)) throw std::invalid_argument("hardy_weight requires delta > 0");
    floor = default_floor(d, floor);
    HardyWeight w;
    w.delta = delta;
    w.floor_used = floor;
    w.grad_term = gradient_norm_squared_field(d.field, floor);
    const double coeff = (1.0 / delta) * (1.0 - 1.0 / delta);
    for (double& v : w.grad_term.values) v *= coeff;
    w.density_term = ScalarField(d.field.domain);
    for (int i = 0; i < w.density_term.size(); ++i) {
        double base = std::max(d.field[i], floor);
        w.density_term[i] = std::pow(base, d.q - 2.0) / delta;
    }
    return w;
}

std::vector<HardyCheckRow> check_hardy(const LaneEmdenDensity& d, double delta,
                                       const std::vector<std::pair<std::string, ScalarField>>& tests,
                                       double floor) {
    HardyWeight w = hardy_weight(d, delta, floor);
    const GridDomain& dom = *d.field.domain;
    const double hN = std::pow(dom.h, dom.dim);
    const double slack = 5.0 * dom.h;

    std::vector<HardyCheckRow> rows;
    rows.reserve(tests.size());
    for (const auto& [id, phi] : tests) {
        if (phi.domain != d.field.domain)
            throw DomainMismatchError("test function lives on a different domain");
        HardyCheckRow row;
        row.delta = delta;
        row.test_id = id;
        double lhs = 0;
        for (int i = 0; i < phi.size(); ++i)
            lhs += (w.grad_term[i] + w.density_term[i]) * phi[i] * phi[i];
        row.lhs = lhs * hN;
        row.rhs = dirichlet_energy(phi);
        row.margin = row.rhs - row.lhs;
        row.pass = row.margin >= -slack * row.rhs;
        rows.push_back(std::move(row));
    }
    return rows;
}

Potential limit_potential(const LaneEmdenDensity& d, double floor) {
    floor = default_floor(d, floor);
    ScalarField g = gradient_norm_squared_field(d.field, floor);
    for (double& v : g.values) v *= -0.25;
    return Potential(std::move(g), "limit(q=" + std::to_string(d.q) + ")");
}

AdmissibilityReport check_admissible(const Potential& V, const LaneEmdenDensity& d,
                                     double floor) {
    if (V.field.domain != d.field.domain)
        throw DomainMismatchError("potential and density live on different domains");
    floor = default_floor(d, floor);
    ScalarField g = gradient_norm_squared_field(d.field, floor);
    AdmissibilityReport rep;
    int ok = 0;
    for (int i = 0; i < V.field.size(); ++i) {
        double lower = -0.25 * g[i] - 1e-12;
        double violation = std::max(lower - V.field[i], V.field[i] > 0 ? V.field[i] : 0.0);
        if (violation <= 0) {
            ++ok;
        } else if (violation > rep.worst_violation) {
            rep.worst_violation = violation;
            rep.worst_node = i;
        }
    }
    rep.fraction = V.field.size() ? static_cast<double>(ok) / V.field.size() : 1.0;
    return rep;
}

double theorem_bound(const LaneEmdenDensity& d) {
    double sup = max_value(d.field);
    if (!(sup > 0)) throw ZeroFieldError("density has no positive values");
    return 0.5 * std::pow(sup, d.q - 2.0);
}

double half_integer_gamma(int twice_x) {
    if (twice_x <= 0) throw std::invalid_argument("gamma argument must be positive");
    if (twice_x % 2 == 0) {
        double g = 1.0;
        for (int k = 2; k < twice_x / 2 + 1; ++k) g *= (k - 1);
        return g;  // (n-1)!
    }
    double g = std::sqrt(std::numbers::pi);
    for (int k = 1; k < twice_x; k += 2) {
        if (k + 2 > twice_x) break;
        g *= k / 2.0;
    }
    return g;
}

double unit_ball_volume(int N) {
    if (N < 1) throw InvalidDimensionError("unit_ball_volume requires N >= 1");
    return std::pow(std::numbers::pi, N / 2.0) / half_integer_gamma(N + 2);
}

double talenti_constant(int N) {
    if (N < 3) throw InvalidDimensionError("talenti_constant requires N >= 3");
    double ratio = half_integer_gamma(N) / half_integer_gamma(2 * N);
    return std::numbers::pi * N * (N - 2) * std::pow(ratio, 2.0 / N);
}

namespace {

double lambda_2gamma_unit_disk(double gamma) {
    static std::mutex mutex;
    static std::map<double, double> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(gamma);
    if (it != cache.end()) return it->second;
    DomainPtr disk = build_domain(ShapeSpec::ball(2, {0, 0, 0}, 1.0), std::pow(2.0, -7));
    double value = lambda_2gamma(disk, gamma, 1e-8);
    cache.emplace(gamma, value);
    return value;
}

} // namespace

double moser_constant(int N, double q, std::optional<double> gamma) {
    if (!(q >= 1.0 && q < 2.0))
        throw InvalidExponentError("moser_constant requires 1 <= q < 2");
    switch (N) {
        case 1:
            return 8.0 * std::sqrt(5.0);
        case 2: {
            double g = gamma.value_or(4.0);
            if (!(g > 2.0))
                throw MissingGammaError("moser_constant in 2d needs gamma > 2");
            double lam = lambda_2gamma_unit_disk(g);
            return std::sqrt(std::numbers::pi) *
                   std::pow(2.0 * g, g / ((g - 2.0) * (g - 2.0))) *
                   std::pow(640.0 / lam, g / (2.0 * (g - 2.0)));
        }
        case 3: {
            double tn = talenti_constant(3);
            return std::sqrt(unit_ball_volume(3)) *
                   std::pow(4.0 * 3 / (3 - 2), 3.0 * (3 - 2) / 8.0) *
                   std::pow(640.0 * tn, 3.0 / 4.0);
        }
        default:
            throw InvalidDimensionError("moser_constant supports N in {1,2,3}");
    }
}

double corollary_bound(double lambda1, int N, double q) {
    if (lambda1 < 0) throw std::invalid_argument("corollary_bound requires lambda1 >= 0");
    double C = moser_constant(N, q);
    double denom = std::pow(2.0, N) * C * C * (std::pow(2.0 * C, 2.0 - q) + 4.0);
    return 0.5 * lambda1 / denom;
}

double perturbation_margin(double lambda1, int N, double q) {
    return corollary_bound(lambda1, N, q);
}

LinftyReport check_linfty_estimate(const LaneEmdenDensity& d, const Point& center,
                                   double R0, double alpha) {
    if (!(alpha >= 2.0)) throw InvalidExponentError("check_linfty_estimate requires alpha >= 2");
    const GridDomain& dom = *d.field.domain;
    const int N = dom.dim;
    const double q = d.q;

    // every lattice node of the ball must be an interior node
    double mean_sum = 0;
    int ball_nodes = 0;
    double lhs = 0;
    std::array<std::int64_t, 3> klo{}, khi{};
    for (int dd = 0; dd < N; ++dd) {
        klo[dd] = static_cast<std::int64_t>(std::floor((center[dd] - R0) / dom.h));
        khi[dd] = static_cast<std::int64_t>(std::ceil((center[dd] + R0) / dom.h));
    }
    std::array<std::int64_t, 3> k = klo;
    while (true) {
        Point p{};
        double r2 = 0;
        for (int dd = 0; dd < N; ++dd) {
            p[dd] = k[dd] * dom.h;
            r2 += (p[dd] - center[dd]) * (p[dd] - center[dd]);
        }
        if (r2 <= R0 * R0) {
            std::int32_t node = dom.node_at({k[0], N > 1 ? k[1] : 0, N > 2 ? k[2] : 0});
            if (node < 0)
                throw BallNotContainedError("ball of radius " + std::to_string(R0) +
                                            " is not contained in the domain grid");
            mean_sum += std::pow(d.field[node], alpha);
            ++ball_nodes;
            if (r2 <= R0 * R0 / 4.0) lhs = std::max(lhs, d.field[node]);
        }
        int dd = N - 1;
        for (; dd >= 0; --dd) {
            if (++k[dd] <= khi[dd]) break;
            k[dd] = klo[dd];
        }
        if (dd < 0) break;
    }

    double mean = ball_nodes ? mean_sum / ball_nodes : 0.0;
    double C = moser_constant(N, q);
    LinftyReport rep;
    rep.lhs = lhs;
    rep.rhs = C * (std::pow(mean, 1.0 / alpha) +
                   std::pow(0.25, 1.0 / (2.0 - q)) * std::pow(R0, 2.0 / (2.0 - q)));
    rep.ratio = rep.lhs > 0 ? rep.rhs / rep.lhs : std::numeric_limits<double>::infinity();
    rep.pass = rep.lhs <= rep.rhs;
    return rep;
}

DorinReport check_dorin(const LaneEmdenDensity& d, double lambda1, int N) {
    const double q = d.q;
    const double h = d.field.domain->h;
    const double slack = 5.0 * h;
    DorinReport rep;
    rep.sup_density = max_value(d.field);
    rep.lower_lhs = std::pow(lambda1, 1.0 / (q - 2.0));
    rep.lower_pass = rep.lower_lhs <= rep.sup_density * (1.0 + slack);
    double C = moser_constant(N, q);
    double K = std::pow(std::pow(2.0, N) * C * C * (std::pow(2.0 * C, 2.0 - q) + 4.0),
                        1.0 / (2.0 - q));
    rep.upper_rhs = K * std::pow(lambda1, 1.0 / (q - 2.0));
    rep.upper_pass = rep.sup_density <= rep.upper_rhs * (1.0 + slack);
    rep.upper_ratio = rep.upper_rhs / rep.sup_density;
    return rep;
}

BilatReport check_bilat(const LaneEmdenDensity& d, double gamma, double lambda_2gamma_val) {
    const double q = d.q;
    if (!(gamma >= q && gamma < 2.0))
        throw InvalidExponentError("check_bilat requires q <= gamma < 2");
    const GridDomain& dom = *d.field.domain;
    const double p = (2.0 - q) * gamma / (2.0 - gamma);
    double integral = 0;
    for (double v : d.field.values)
        if (v > 0) integral += std::pow(v, p);
    integral *= std::pow(dom.h, dom.dim);

    BilatReport rep;
    rep.middle = lambda_2gamma_val * std::pow(integral, (2.0 - gamma) / gamma);
    rep.upper_bound = (2.0 - gamma) / (gamma - 2.0 * (q - 1.0)) *
                      std::pow((2.0 - q) / (2.0 - gamma), 2.0);
    rep.lower_pass = rep.middle >= 1.0 - 0.02;
    rep.upper_pass = rep.middle <= rep.upper_bound * 1.02;
    return rep;
}

RepresentationReport ground_state_representation_check(const LaneEmdenDensity& d,
                                                       double delta) {
    if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
    const GridDomain& dom = *d.field.domain;
    const double q = d.q;
    const double floor = dom.h * dom.h;

    ScalarField W(d.field.domain);
    for (int i = 0; i < W.size(); ++i) W[i] = std::pow(std::max(d.field[i], 0.0), 1.0 / delta);
    ScalarField AW = apply_laplacian(W);
    ScalarField g = gradient_norm_squared_field(d.field, floor);

    double num = 0, den = 0;
    RepresentationReport rep;
    const double coeff = (1.0 / delta) * (1.0 - 1.0 / delta);
    for (int i = 0; i < W.size(); ++i) {
        if (dom.boundary_layer[i] < 3) continue;
        double weight = std::pow(std::max(d.field[i], floor), q - 2.0) / delta + coeff * g[i];
        double rhs = W[i] * weight;
        double diff = AW[i] - rhs;
        num += diff * diff;
        den += rhs * rhs;
        ++rep.nodes_checked;
    }
    rep.relative_residual = den > 0 ? std::sqrt(num / den) : 0.0;
    rep.pass = rep.relative_residual <= 0.05;
    return rep;
}

namespace {

// compactly supported cosine-squared bump centered at c with radii r
double tensor_bump(const Point& p, const Point& c, const Point& r, int dim) {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) {
        double t = (p[d] - c[d]) / r[d];
        if (std::abs(t) >= 1.0) return 0.0;
        double b = std::cos(0.5 * std::numbers::pi * t);
        v *= b * b;
    }
    return v;
}

} // namespace

std::vector<std::pair<std::string, ScalarField>> make_test_corpus(
    DomainPtr dom, const ScalarField& eigenfunction, const ScalarField& density,
    std::uint64_t seed, int n_random) {
    std::vector<std::pair<std::string, ScalarField>> corpus;

    auto add = [&](std::string id, ScalarField f) {
        zero_near_boundary(f, 2);
        corpus.emplace_back(std::move(id), std::move(f));
    };

    add("eigenfunction", eigenfunction);
    add("density", density);

    Point lo, hi;
    dom->shape.bounding_box(lo, hi);
    Point mid{}, half{};
    for (int d = 0; d < dom->dim; ++d) {
        mid[d] = 0.5 * (lo[d] + hi[d]);
        half[d] = 0.5 * (hi[d] - lo[d]);
    }

    Point wide = half, offc = mid, narrow = half;
    for (int d = 0; d < dom->dim; ++d) {
        wide[d] *= 0.8;
        offc[d] += 0.3 * half[d];
        narrow[d] *= 0.35;
    }
    add("bump_wide", sample_function(dom, [&](const Point& p) {
            return tensor_bump(p, mid, wide, dom->dim);
        }));
    add("bump_offcenter", sample_function(dom, [&](const Point& p) {
            Point r = half;
            for (int d = 0; d < dom->dim; ++d) r[d] *= 0.45;
            return tensor_bump(p, offc, r, dom->dim);
        }));
    add("bump_narrow", sample_function(dom, [&](const Point& p) {
            return tensor_bump(p, mid, narrow, dom->dim);
        }));

    Xorshift64Star rng(seed);
    for (int k = 0; k < n_random; ++k) {
        // smooth random field: superposition of five random bumps
        std::array<Point, 5> centers, radii;
        std::array<double, 5> amps;
        for (int b = 0; b < 5; ++b) {
            for (int d = 0; d < dom->dim; ++d) {
                centers[b][d] = mid[d] + half[d] * rng.uniform(-0.7, 0.7);
                radii[b][d] = half[d] * rng.uniform(0.2, 0.6);
            }
            amps[b] = rng.uniform(-1.0, 1.0);
        }
        char id[32];
        std::snprintf(id, sizeof id, "random_%02d", k + 1);
        add(id, sample_function(dom, [&](const Point& p) {
                double v = 0;
                for (int b = 0; b < 5; ++b)
                    v += amps[b] * tensor_bump(p, centers[b], radii[b], dom->dim);
                return v;
            }));
    }
    return corpus;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Incomplete: return "INCOMPLETE";
    }
    return "?";
}

BoundCertificate certify(DomainPtr dom, double q, const Potential& V,
                         const CertifyOptions& opts) {
    BoundCertificate cert;
    cert.q = q;
    cert.dim = dom->dim;
    cert.shape = dom->shape;
    cert.h = dom->h;
    cert.slack = 5.0 * dom->h;

    if (V.field.domain != dom)
        throw DomainMismatchError("potential lives on a different domain");

    try {
        LaneEmdenDensity d = solve_lane_emden(dom, q, opts.lane_emden_tol);
        cert.density_sup = max_value(d.field);
        cert.density_residual = d.residual;
        cert.density_iterations = d.iterations;
        cert.theorem_bound_value = theorem_bound(d);

        SpectralResult eig = principal_eigenvalue(dom, opts.eigen_tol);
        cert.lambda1 = eig.eigenvalue;
        cert.corollary_bound_value = corollary_bound(cert.lambda1, cert.dim, q);

        AdmissibilityReport adm = check_admissible(V, d, opts.floor);
        cert.admissible_fraction = adm.fraction;
        cert.worst_admissibility_violation = adm.worst_violation;

        auto corpus = make_test_corpus(dom, eig.eigenfunction, d.field, opts.seed,
                                       opts.n_random_tests);
        for (double delta : opts.deltas) {
            auto rows = check_hardy(d, delta, corpus, opts.floor);
            cert.hardy_checks.insert(cert.hardy_checks.end(), rows.begin(), rows.end());
        }

        SpectralResult ground = schrodinger_ground_state(dom, V, opts.eigen_tol);
        cert.lambda1_V = ground.eigenvalue;

        bool hardy_ok = std::all_of(cert.hardy_checks.begin(), cert.hardy_checks.end(),
                                    [](const HardyCheckRow& r) { return r.pass; });
        bool admissible = cert.admissible_fraction >= 1.0;
        bool bound_ok = cert.lambda1_V >= cert.theorem_bound_value - cert.slack;
        bool ordered = cert.corollary_bound_value <= cert.theorem_bound_value;

        if (!admissible) {
            cert.verdict = Verdict::Fail;
            cert.verdict_reason = "ADMISSIBILITY";
        } else if (!hardy_ok) {
            cert.verdict = Verdict::Fail;
            cert.verdict_reason = "HARDY";
        } else if (!bound_ok) {
            cert.verdict = Verdict::Fail;
            cert.verdict_reason = "GROUND_STATE_BOUND";
        } else if (!ordered) {
            cert.verdict = Verdict::Fail;
            cert.verdict_reason = "ORDERING";
        } else {
            cert.verdict = Verdict::Pass;
            cert.verdict_reason = "";
        }
    } catch (const Error& e) {
        cert.verdict = Verdict::Incomplete;
        cert.verdict_reason = e.what();
    }
    return cert;
}

} // namespace hle

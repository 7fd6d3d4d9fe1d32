#include "hle/closed_forms.hpp"

#include <cmath>
#include <stdexcept>

#include "hle/errors.hpp"

namespace hle {

namespace {

double norm2_prefix(const Point& p, int count) {
    double s = 0;
    for (int d = 0; d < count; ++d) s += p[d] * p[d];
    return s;
}

double norm2_tail(const Point& p, int from, int dim) {
    double s = 0;
    for (int d = from; d < dim; ++d) s += p[d] * p[d];
    return s;
}

} // namespace

double ClosedForm::operator()(const Point& p) const {
    switch (kind) {
        case Kind::BallTorsion: {
            double r2 = norm2_prefix(p, dim);
            double v = (radius * radius - r2) / (2.0 * dim);
            return v > 0 ? v : 0.0;
        }
        case Kind::SlabTorsion: {
            double v = (radius * radius - p[0] * p[0]) / 2.0;
            return v > 0 ? v : 0.0;
        }
        case Kind::EllipsoidTorsion: {
            double R2 = radius * radius;
            double q = 1.0 - p[0] * p[0] - norm2_tail(p, 1, dim) / R2;
            if (q <= 0) return 0.0;
            return R2 / (R2 + (dim - 1)) * q / 2.0;
        }
        case Kind::WaveguideDensity: {
            double r2 = norm2_prefix(p, dim - 1);
            double v = (radius * radius - r2) / (2.0 * (dim - 1));
            return v > 0 ? v : 0.0;
        }
        case Kind::BallLimitPotential: {
            double r2 = norm2_prefix(p, dim);
            double den = radius * radius - r2;
            return den > 0 ? -r2 / (den * den) : 0.0;
        }
        case Kind::SlabLimitPotential: {
            double den = radius * radius - p[0] * p[0];
            return den > 0 ? -p[0] * p[0] / (den * den) : 0.0;
        }
        case Kind::WaveguideLimitPotential: {
            double r2 = norm2_prefix(p, dim - 1);
            double den = radius * radius - r2;
            return den > 0 ? -r2 / (den * den) : 0.0;
        }
    }
    return 0.0;
}

std::string ClosedForm::name() const {
    switch (kind) {
        case Kind::BallTorsion: return "ball_torsion";
        case Kind::SlabTorsion: return "slab_torsion";
        case Kind::EllipsoidTorsion: return "ellipsoid_torsion";
        case Kind::WaveguideDensity: return "waveguide_density";
        case Kind::BallLimitPotential: return "ball_limit_potential";
        case Kind::SlabLimitPotential: return "slab_limit_potential";
        case Kind::WaveguideLimitPotential: return "waveguide_limit_potential";
    }
    return "?";
}

static ClosedForm make(ClosedForm::Kind k, int n, double R, int min_dim) {
    if (n < min_dim || n > 3)
        throw InvalidDimensionError("closed form dimension out of range");
    if (!(R > 0)) throw std::invalid_argument("closed form requires a positive parameter");
    return ClosedForm{k, n, R};
}

ClosedForm ClosedForm::ball_torsion(int n, double R) { return make(Kind::BallTorsion, n, R, 1); }
ClosedForm ClosedForm::slab_torsion(int n, double a) { return make(Kind::SlabTorsion, n, a, 1); }
ClosedForm ClosedForm::ellipsoid_torsion(int n, double R) {
    return make(Kind::EllipsoidTorsion, n, R, 2);
}
ClosedForm ClosedForm::waveguide_density(int n, double R) {
    return make(Kind::WaveguideDensity, n, R, 2);
}
ClosedForm ClosedForm::ball_limit_potential(int n, double R) {
    return make(Kind::BallLimitPotential, n, R, 1);
}
ClosedForm ClosedForm::slab_limit_potential(int n, double a) {
    return make(Kind::SlabLimitPotential, n, a, 1);
}
ClosedForm ClosedForm::waveguide_limit_potential(int n, double R) {
    return make(Kind::WaveguideLimitPotential, n, R, 2);
}

ClosedForm ClosedForm::by_name(const std::string& name, int n, double R) {
    if (name == "ball_torsion") return ball_torsion(n, R);
    if (name == "slab_torsion") return slab_torsion(n, R);
    if (name == "ellipsoid_torsion") return ellipsoid_torsion(n, R);
    if (name == "waveguide_density") return waveguide_density(n, R);
    if (name == "ball_limit_potential") return ball_limit_potential(n, R);
    if (name == "slab_limit_potential") return slab_limit_potential(n, R);
    if (name == "waveguide_limit_potential") return waveguide_limit_potential(n, R);
    throw GeometryMismatchError("unknown closed form: " + name);
}

ScalarField sample(const ClosedForm& cf, DomainPtr dom) {
    if (cf.dim != dom->dim)
        throw GeometryMismatchError("closed form dimension " + std::to_string(cf.dim) +
                                    " does not match domain dimension " +
                                    std::to_string(dom->dim));
    ScalarField f(dom);
    for (int i = 0; i < f.size(); ++i) f[i] = cf(dom->position(i));
    return f;
}

bool Window::contains(const Point& p, double h) const {
    switch (kind) {
        case Kind::All:
            return true;
        case Kind::Ball: {
            double s = 0;
            for (int d = 0; d < 3; ++d) s += (p[d] - center[d]) * (p[d] - center[d]);
            return s <= radius * radius;
        }
        case Kind::Box:
            for (int d = 0; d < 3; ++d)
                if (p[d] < lo[d] || p[d] > hi[d]) return false;
            return true;
        case Kind::Slice:
            return std::abs(p[axis] - center[axis]) < h / 2;
    }
    return false;
}

ErrorReport compare(const ScalarField& numeric, const ClosedForm& cf, const Window& window) {
    const GridDomain& dom = *numeric.domain;
    if (cf.dim != dom.dim)
        throw GeometryMismatchError("closed form dimension does not match field domain");
    ErrorReport rep;
    double sup_ref = 0, err2 = 0, ref2 = 0;
    for (int i = 0; i < numeric.size(); ++i) {
        Point p = dom.position(i);
        if (!window.contains(p, dom.h)) continue;
        double ref = cf(p);
        double err = numeric[i] - ref;
        rep.max_abs = std::max(rep.max_abs, std::abs(err));
        sup_ref = std::max(sup_ref, std::abs(ref));
        err2 += err * err;
        ref2 += ref * ref;
        ++rep.nodes;
    }
    rep.max_rel = sup_ref > 0 ? rep.max_abs / sup_ref : rep.max_abs;
    rep.l2_rel = ref2 > 0 ? std::sqrt(err2 / ref2) : std::sqrt(err2);
    return rep;
}

} // namespace hle

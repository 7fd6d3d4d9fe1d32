#pragma once

#include <string>

#include "hle/grid.hpp"

namespace hle {

/// Analytic reference solutions for the model geometries: torsion functions
/// and the matching limit potentials. Evaluators return 0 outside the
/// geometry's support (potentials are clamped by the positive part of the
/// defining denominator).
struct ClosedForm {
    enum class Kind {
        BallTorsion,
        SlabTorsion,
        EllipsoidTorsion,
        WaveguideDensity,
        BallLimitPotential,
        SlabLimitPotential,
        WaveguideLimitPotential,
    };

    Kind kind;
    int dim;
    double radius;  // ball radius, slab half-width, or ellipsoid transverse semi-axis

    double operator()(const Point& p) const;

    std::string name() const;

    static ClosedForm ball_torsion(int n, double R = 1.0);
    static ClosedForm slab_torsion(int n, double half_width = 1.0);
    static ClosedForm ellipsoid_torsion(int n, double R);
    static ClosedForm waveguide_density(int n, double R = 1.0);
    static ClosedForm ball_limit_potential(int n, double R = 1.0);
    static ClosedForm slab_limit_potential(int n, double half_width = 1.0);
    static ClosedForm waveguide_limit_potential(int n, double R = 1.0);

    /// Parse by name ("ball_torsion", "slab_limit_potential", ...).
    static ClosedForm by_name(const std::string& name, int n, double R = 1.0);
};

/// Nodewise evaluation on a grid. Throws GeometryMismatchError when the
/// form's dimension differs from the domain's.
ScalarField sample(const ClosedForm& cf, DomainPtr dom);

/// Restriction window for error measurements.
struct Window {
    enum class Kind { All, Ball, Box, Slice };
    Kind kind = Kind::All;
    Point center{};
    double radius = 0.0;  // Ball window
    Point lo{}, hi{};     // Box window
    int axis = 0;         // Slice window: nodes with |p[axis] - center[axis]| < h/2
    bool contains(const Point& p, double h) const;

    static Window all() { return {}; }
    static Window ball(const Point& c, double r) {
        Window w;
        w.kind = Kind::Ball;
        w.center = c;
        w.radius = r;
        return w;
    }
    static Window box(const Point& lo, const Point& hi) {
        Window w;
        w.kind = Kind::Box;
        w.lo = lo;
        w.hi = hi;
        return w;
    }
    static Window slice(int axis, double value) {
        Window w;
        w.kind = Kind::Slice;
        w.axis = axis;
        w.center[axis] = value;
        return w;
    }
};

struct ErrorReport {
    double max_abs = 0.0;
    double max_rel = 0.0;  // relative to the window sup of the reference
    double l2_rel = 0.0;
    int nodes = 0;
};

ErrorReport compare(const ScalarField& numeric, const ClosedForm& cf, const Window& window);

} // namespace hle

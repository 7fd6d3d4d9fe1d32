#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace hle {

using Point = std::array<double, 3>;

struct BallSpec {
    Point center{};
    double radius = 0.0;
};

/// Geometric description of an open set. Slab and waveguide variants describe
/// unbounded sets together with their truncation lengths; build_domain always
/// discretizes the truncated set.
struct ShapeSpec {
    enum class Kind { Interval, Rectangle, Ball, UnionOfBalls, Slab, Waveguide };

    Kind kind = Kind::Interval;
    int dim = 1;
    Point lo{};  // rectangle / interval bounds
    Point hi{};
    std::vector<BallSpec> balls;            // ball (one entry) or union of balls
    double half_width = 0.0;                // slab: bounded half-width along axis 0
    double extent = 0.0;                    // slab: transverse, waveguide: axial truncation
    std::shared_ptr<const ShapeSpec> cross_section;  // waveguide only, dimension dim-1

    static ShapeSpec interval(double a, double b);
    static ShapeSpec rectangle(int n, const Point& lo, const Point& hi);
    static ShapeSpec ball(int n, const Point& center, double radius);
    static ShapeSpec union_of_balls(int n, std::vector<BallSpec> balls);
    static ShapeSpec slab(int n, double half_width, double transverse_extent);
    static ShapeSpec waveguide(ShapeSpec cross_section, double axial_extent);

    /// Distance from p to the complement, positive inside, <= 0 outside.
    /// For a union of overlapping balls this is a conservative lower bound.
    double inside_distance(const Point& p) const;

    /// Axis-aligned bounding box of the (truncated) set.
    void bounding_box(Point& box_lo, Point& box_hi) const;

    /// Smallest diameter-like feature; grids must resolve it with >= 8 cells.
    double min_feature() const;

    /// Truncated copy with the given truncation length (slab and waveguide).
    ShapeSpec with_extent(double R) const;

    std::string describe() const;
};

} // namespace hle

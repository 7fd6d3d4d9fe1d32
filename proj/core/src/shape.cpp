#include "hle/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hle/errors.hpp"

namespace hle {

namespace {

double dist3(const Point& a, const Point& b, int dim) {
    double s = 0;
    for (int d = 0; d < dim; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return std::sqrt(s);
}

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace

ShapeSpec ShapeSpec::interval(double a, double b) {
    require(b > a, "interval requires b > a");
    ShapeSpec s;
    s.kind = Kind::Interval;
    s.dim = 1;
    s.lo = {a, 0, 0};
    s.hi = {b, 0, 0};
    return s;
}

ShapeSpec ShapeSpec::rectangle(int n, const Point& lo, const Point& hi) {
    require(n >= 1 && n <= 3, "rectangle dimension must be 1..3");
    for (int d = 0; d < n; ++d) require(hi[d] > lo[d], "rectangle requires hi > lo per axis");
    ShapeSpec s;
    s.kind = Kind::Rectangle;
    s.dim = n;
    s.lo = lo;
    s.hi = hi;
    return s;
}

ShapeSpec ShapeSpec::ball(int n, const Point& center, double radius) {
    require(n >= 1 && n <= 3, "ball dimension must be 1..3");
    require(radius > 0, "ball requires radius > 0");
    ShapeSpec s;
    s.kind = Kind::Ball;
    s.dim = n;
    s.balls = {BallSpec{center, radius}};
    return s;
}

ShapeSpec ShapeSpec::union_of_balls(int n, std::vector<BallSpec> balls) {
    require(n >= 1 && n <= 3, "union_of_balls dimension must be 1..3");
    require(!balls.empty(), "union_of_balls requires at least one ball");
    for (const auto& b : balls) require(b.radius > 0, "union_of_balls requires radius > 0");
    ShapeSpec s;
    s.kind = Kind::UnionOfBalls;
    s.dim = n;
    s.balls = std::move(balls);
    return s;
}

ShapeSpec ShapeSpec::slab(int n, double half_width, double transverse_extent) {
    require(n >= 2 && n <= 3, "slab dimension must be 2 or 3");
    require(half_width > 0, "slab requires half_width > 0");
    require(transverse_extent > 0, "slab requires transverse_extent > 0");
    ShapeSpec s;
    s.kind = Kind::Slab;
    s.dim = n;
    s.half_width = half_width;
    s.extent = transverse_extent;
    return s;
}

ShapeSpec ShapeSpec::waveguide(ShapeSpec cross_section, double axial_extent) {
    require(axial_extent > 0, "waveguide requires axial_extent > 0");
    require(cross_section.dim >= 1 && cross_section.dim <= 2,
            "waveguide cross-section must have dimension 1 or 2");
    ShapeSpec s;
    s.kind = Kind::Waveguide;
    s.dim = cross_section.dim + 1;
    s.extent = axial_extent;
    s.cross_section = std::make_shared<const ShapeSpec>(std::move(cross_section));
    return s;
}

double ShapeSpec::inside_distance(const Point& p) const {
    switch (kind) {
        case Kind::Interval:
            return std::min(p[0] - lo[0], hi[0] - p[0]);
        case Kind::Rectangle: {
            double m = std::numeric_limits<double>::infinity();
            for (int d = 0; d < dim; ++d) m = std::min({m, p[d] - lo[d], hi[d] - p[d]});
            return m;
        }
        case Kind::Ball:
            return balls[0].radius - dist3(p, balls[0].center, dim);
        case Kind::UnionOfBalls: {
            double m = -std::numeric_limits<double>::infinity();
            for (const auto& b : balls) m = std::max(m, b.radius - dist3(p, b.center, dim));
            return m;
        }
        case Kind::Slab: {
            double m = half_width - std::abs(p[0]);
            for (int d = 1; d < dim; ++d) m = std::min(m, extent - std::abs(p[d]));
            return m;
        }
        case Kind::Waveguide: {
            Point q{};
            for (int d = 0; d + 1 < dim; ++d) q[d] = p[d];
            return std::min(cross_section->inside_distance(q), extent - std::abs(p[dim - 1]));
        }
    }
    return -1;
}

void ShapeSpec::bounding_box(Point& box_lo, Point& box_hi) const {
    box_lo = {0, 0, 0};
    box_hi = {0, 0, 0};
    switch (kind) {
        case Kind::Interval:
        case Kind::Rectangle:
            box_lo = lo;
            box_hi = hi;
            break;
        case Kind::Ball:
        case Kind::UnionOfBalls:
            for (int d = 0; d < dim; ++d) {
                double a = std::numeric_limits<double>::infinity(), b = -a;
                for (const auto& ball : balls) {
                    a = std::min(a, ball.center[d] - ball.radius);
                    b = std::max(b, ball.center[d] + ball.radius);
                }
                box_lo[d] = a;
                box_hi[d] = b;
            }
            break;
        case Kind::Slab:
            box_lo[0] = -half_width;
            box_hi[0] = half_width;
            for (int d = 1; d < dim; ++d) {
                box_lo[d] = -extent;
                box_hi[d] = extent;
            }
            break;
        case Kind::Waveguide: {
            Point clo, chi;
            cross_section->bounding_box(clo, chi);
            for (int d = 0; d + 1 < dim; ++d) {
                box_lo[d] = clo[d];
                box_hi[d] = chi[d];
            }
            box_lo[dim - 1] = -extent;
            box_hi[dim - 1] = extent;
            break;
        }
    }
}

double ShapeSpec::min_feature() const {
    switch (kind) {
        case Kind::Interval:
            return hi[0] - lo[0];
        case Kind::Rectangle: {
            double m = std::numeric_limits<double>::infinity();
            for (int d = 0; d < dim; ++d) m = std::min(m, hi[d] - lo[d]);
            return m;
        }
        case Kind::Ball:
            return 2 * balls[0].radius;
        case Kind::UnionOfBalls: {
            double m = std::numeric_limits<double>::infinity();
            for (const auto& b : balls) m = std::min(m, 2 * b.radius);
            return m;
        }
        case Kind::Slab:
            return std::min(2 * half_width, 2 * extent);
        case Kind::Waveguide:
            return std::min(cross_section->min_feature(), 2 * extent);
    }
    return 0;
}

ShapeSpec ShapeSpec::with_extent(double R) const {
    require(R > 0, "truncation length must be positive");
    ShapeSpec s = *this;
    switch (kind) {
        case Kind::Slab:
        case Kind::Waveguide:
            s.extent = R;
            return s;
        default:
            throw GeometryMismatchError("with_extent applies to slab and waveguide shapes only");
    }
}

std::string ShapeSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Interval:
            os << "interval(" << lo[0] << "," << hi[0] << ")";
            break;
        case Kind::Rectangle:
            os << "rectangle(";
            for (int d = 0; d < dim; ++d) os << (d ? ";" : "") << lo[d] << "," << hi[d];
            os << ")";
            break;
        case Kind::Ball:
            os << "ball(";
            for (int d = 0; d < dim; ++d) os << (d ? "," : "") << balls[0].center[d];
            os << ";" << balls[0].radius << ")";
            break;
        case Kind::UnionOfBalls:
            os << "union(";
            for (std::size_t i = 0; i < balls.size(); ++i) {
                if (i) os << "|";
                os << "ball(";
                for (int d = 0; d < dim; ++d) os << (d ? "," : "") << balls[i].center[d];
                os << ";" << balls[i].radius << ")";
            }
            os << ")";
            break;
        case Kind::Slab:
            os << "slab(" << half_width << ";" << extent << ";" << dim << ")";
            break;
        case Kind::Waveguide:
            os << "waveguide(" << cross_section->describe() << ";" << extent << ")";
            break;
    }
    return os.str();
}

} // namespace hle

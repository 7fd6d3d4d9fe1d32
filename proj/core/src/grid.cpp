#include "hle/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "hle/cg.hpp"
#include "hle/errors.hpp"

namespace hle {

std::int32_t GridDomain::node_near(const Point& p) const {
    std::array<std::int64_t, 3> k{};
    for (int d = 0; d < dim; ++d) k[d] = std::llround(p[d] / h);
    return node_at(k);
}

DomainPtr build_domain(const ShapeSpec& spec, double h) {
    if (!(h > 0)) throw std::invalid_argument("build_domain requires h > 0");
    double feature = spec.min_feature();
    if (feature / h < 8.0 - 1e-12) {
        throw SpacingTooCoarseError("grid spacing too coarse: " +
                                    std::to_string(feature / h) +
                                    " cells across the smallest feature, need >= 8");
    }

    auto dom = std::make_shared<GridDomain>();
    dom->shape = spec;
    dom->dim = spec.dim;
    dom->h = h;

    Point lo, hi;
    spec.bounding_box(lo, hi);
    for (int d = 0; d < 3; ++d) {
        if (d < spec.dim) {
            dom->base[d] = static_cast<std::int64_t>(std::floor(lo[d] / h)) - 1;
            std::int64_t top = static_cast<std::int64_t>(std::ceil(hi[d] / h)) + 1;
            dom->extents[d] = static_cast<int>(top - dom->base[d]) + 1;
        } else {
            dom->base[d] = 0;
            dom->extents[d] = 1;
        }
    }

    const std::size_t box =
        static_cast<std::size_t>(dom->extents[0]) * dom->extents[1] * dom->extents[2];
    dom->node_of_cell.assign(box, -1);

    const double inset = kMaskInset * h;
    std::int32_t next = 0;
    std::size_t cell = 0;
    for (int ix = 0; ix < dom->extents[0]; ++ix)
        for (int iy = 0; iy < dom->extents[1]; ++iy)
            for (int iz = 0; iz < dom->extents[2]; ++iz, ++cell) {
                Point p{(dom->base[0] + ix) * h, (dom->base[1] + iy) * h,
                        (dom->base[2] + iz) * h};
                for (int d = spec.dim; d < 3; ++d) p[d] = 0;
                if (spec.inside_distance(p) >= inset) dom->node_of_cell[cell] = next++;
            }

    if (next == 0) throw EmptyDomainError("no interior node for " + spec.describe());

    dom->cell_of_node.resize(next);
    for (std::size_t c = 0; c < box; ++c)
        if (dom->node_of_cell[c] >= 0) dom->cell_of_node[dom->node_of_cell[c]] = c;

    const int n = spec.dim;
    const std::int64_t stride[3] = {static_cast<std::int64_t>(dom->extents[1]) * dom->extents[2],
                                    dom->extents[2], 1};
    dom->neighbors.assign(static_cast<std::size_t>(next) * 2 * n, -1);
    for (std::int32_t i = 0; i < next; ++i) {
        auto c = dom->cell_coords(dom->cell_of_node[i]);
        for (int d = 0; d < n; ++d) {
            if (c[d] > 0)
                dom->neighbors[i * 2 * n + 2 * d] =
                    dom->node_of_cell[dom->cell_of_node[i] - stride[d]];
            if (c[d] + 1 < dom->extents[d])
                dom->neighbors[i * 2 * n + 2 * d + 1] =
                    dom->node_of_cell[dom->cell_of_node[i] + stride[d]];
        }
    }

    // breadth-first layers from the exterior
    dom->boundary_layer.assign(next, 0);
    std::deque<std::int32_t> queue;
    for (std::int32_t i = 0; i < next; ++i) {
        for (int k = 0; k < 2 * n; ++k)
            if (dom->neighbors[i * 2 * n + k] < 0) {
                dom->boundary_layer[i] = 1;
                queue.push_back(i);
                break;
            }
    }
    while (!queue.empty()) {
        std::int32_t i = queue.front();
        queue.pop_front();
        for (int k = 0; k < 2 * n; ++k) {
            std::int32_t j = dom->neighbors[i * 2 * n + k];
            if (j >= 0 && dom->boundary_layer[j] == 0) {
                dom->boundary_layer[j] = dom->boundary_layer[i] + 1;
                queue.push_back(j);
            }
        }
    }

    return dom;
}

ScalarField constant_field(DomainPtr dom, double value) {
    ScalarField f(std::move(dom), value);
    return f;
}

ScalarField sample_function(DomainPtr dom, const std::function<double(const Point&)>& fn) {
    ScalarField f(dom);
    for (int i = 0; i < f.size(); ++i) f[i] = fn(dom->position(i));
    return f;
}

void laplacian_apply_raw(const GridDomain& dom, const double* u, double* y) {
    const int M = dom.node_count();
    const int twoN = 2 * dom.dim;
    const double ih2 = 1.0 / (dom.h * dom.h);
    const std::int32_t* nbr = dom.neighbors.data();
    for (int i = 0; i < M; ++i) {
        double s = twoN * u[i];
        const std::int32_t* row = nbr + static_cast<std::size_t>(i) * twoN;
        for (int k = 0; k < twoN; ++k) {
            std::int32_t j = row[k];
            if (j >= 0) s -= u[j];
        }
        y[i] = s * ih2;
    }
}

ScalarField apply_laplacian(const ScalarField& u) {
    if (!u.domain) throw DomainMismatchError("field without domain");
    ScalarField y(u.domain);
    laplacian_apply_raw(*u.domain, u.values.data(), y.values.data());
    return y;
}

ScalarField solve_poisson(const ScalarField& f, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("solve_poisson requires tol > 0");
    const GridDomain& dom = *f.domain;
    ScalarField u(f.domain, 0.0);
    const int cap = 10 * dom.node_count();
    auto result = conjugate_gradient(
        [&dom](const double* x, double* y) { laplacian_apply_raw(dom, x, y); },
        f.values, u.values, tol, cap);
    if (!result.converged) {
        throw NoConvergenceError("poisson solve did not reach tolerance in " +
                                     std::to_string(cap) + " iterations",
                                 result.relative_residual, result.iterations);
    }
    return u;
}

static void check_same_domain(const ScalarField& u, const ScalarField& v) {
    if (!u.domain || u.domain != v.domain)
        throw DomainMismatchError("fields live on different domains");
}

double l2_inner(const ScalarField& u, const ScalarField& v) {
    check_same_domain(u, v);
    double s = 0;
    for (int i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s * std::pow(u.domain->h, u.domain->dim);
}

double l2_norm(const ScalarField& u) { return std::sqrt(l2_inner(u, u)); }

double lp_norm(const ScalarField& u, double p) {
    double s = 0;
    for (double v : u.values) s += std::pow(std::abs(v), p);
    s *= std::pow(u.domain->h, u.domain->dim);
    return std::pow(s, 1.0 / p);
}

double dirichlet_energy(const ScalarField& u) {
    ScalarField Au = apply_laplacian(u);
    double e = l2_inner(u, Au);
    return e < 0 ? 0 : e;  // negative only through rounding
}

ScalarField gradient_norm_squared_field(const ScalarField& u, double floor) {
    if (!(floor > 0)) throw std::invalid_argument("gradient floor must be positive");
    const GridDomain& dom = *u.domain;
    const int twoN = 2 * dom.dim;
    ScalarField g(u.domain);
    for (int i = 0; i < u.size(); ++i) {
        double grad2 = 0;
        for (int d = 0; d < dom.dim; ++d) {
            std::int32_t jm = dom.neighbors[i * twoN + 2 * d];
            std::int32_t jp = dom.neighbors[i * twoN + 2 * d + 1];
            double der = 0;
            if (jm >= 0 && jp >= 0)
                der = (u[jp] - u[jm]) / (2 * dom.h);
            else if (jp >= 0)
                der = (u[jp] - u[i]) / dom.h;
            else if (jm >= 0)
                der = (u[i] - u[jm]) / dom.h;
            grad2 += der * der;
        }
        double denom = std::max(u[i], floor);
        g[i] = grad2 / (denom * denom);
    }
    return g;
}

void zero_near_boundary(ScalarField& u, int min_layer) {
    const auto& layer = u.domain->boundary_layer;
    for (int i = 0; i < u.size(); ++i)
        if (layer[i] < min_layer) u[i] = 0.0;
}

double sup_norm(const ScalarField& u) {
    double m = 0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
}

double min_value(const ScalarField& u) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : u.values) m = std::min(m, v);
    return m;
}

double max_value(const ScalarField& u) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : u.values) m = std::max(m, v);
    return m;
}

} // namespace hle

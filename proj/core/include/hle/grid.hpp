#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "hle/shape.hpp"

namespace hle {

/// Uniform-grid discretization of an open set. Nodes live on the global
/// lattice h*Z^N; a node is interior when its inside-distance is at least
/// kMaskInset*h, which centers the effective staircase boundary on the true
/// one (calibrated constant, see README). Everything outside the mask is a
/// homogeneous Dirichlet value of zero.
struct GridDomain {
    ShapeSpec shape;
    int dim = 0;
    double h = 0.0;
    std::array<std::int64_t, 3> base{};   // lattice coords of box corner
    std::array<int, 3> extents{1, 1, 1};  // box size in nodes per axis

    std::vector<std::int32_t> node_of_cell;  // box cell -> node id, -1 exterior
    std::vector<std::int64_t> cell_of_node;  // node id -> box cell
    std::vector<std::int32_t> neighbors;     // node id * 2*dim, -1 exterior
    std::vector<std::int32_t> boundary_layer;  // grid steps to nearest exterior cell

    int node_count() const { return static_cast<int>(cell_of_node.size()); }

    std::array<int, 3> cell_coords(std::int64_t cell) const {
        std::array<int, 3> c{};
        c[2] = static_cast<int>(cell % extents[2]);
        cell /= extents[2];
        c[1] = static_cast<int>(cell % extents[1]);
        c[0] = static_cast<int>(cell / extents[1]);
        return c;
    }

    Point position(std::int32_t node) const {
        auto c = cell_coords(cell_of_node[node]);
        Point p{};
        for (int d = 0; d < dim; ++d) p[d] = (base[d] + c[d]) * h;
        return p;
    }

    /// Global lattice coordinates of a node (shared between all domains of
    /// the same spacing; the basis for nested-mask comparisons).
    std::array<std::int64_t, 3> lattice_coords(std::int32_t node) const {
        auto c = cell_coords(cell_of_node[node]);
        return {base[0] + c[0], base[1] + c[1], base[2] + c[2]};
    }

    /// Node id at the given global lattice coordinates, -1 if not interior.
    std::int32_t node_at(const std::array<std::int64_t, 3>& k) const {
        std::int64_t cell = 0;
        for (int d = 0; d < 3; ++d) {
            std::int64_t i = k[d] - base[d];
            if (i < 0 || i >= extents[d]) return -1;
            cell = cell * extents[d] + i;
        }
        return node_of_cell[static_cast<std::size_t>(cell)];
    }

    /// Node nearest to a point (exact lattice rounding), -1 if exterior.
    std::int32_t node_near(const Point& p) const;
};

using DomainPtr = std::shared_ptr<const GridDomain>;

/// Mask inset in units of h. Calibrated on the disk torsion problem so the
/// zero boundary is unbiased; aligned boundaries land exactly on lattice
/// points and are unaffected by the value.
inline constexpr double kMaskInset = 0.38;

/// Discretize a shape. Throws SpacingTooCoarseError when fewer than 8 grid
/// cells span the smallest feature and EmptyDomainError when no node passes
/// the interior test.
DomainPtr build_domain(const ShapeSpec& spec, double h);

/// One value per interior node; zero extension outside the mask.
struct ScalarField {
    DomainPtr domain;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(DomainPtr dom, double fill = 0.0)
        : domain(std::move(dom)), values(domain->node_count(), fill) {}

    int size() const { return static_cast<int>(values.size()); }
    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }
};

ScalarField constant_field(DomainPtr dom, double value);
ScalarField sample_function(DomainPtr dom, const std::function<double(const Point&)>& f);

/// (-Delta_h u)_i = (2N u_i - sum of interior neighbors)/h^2, exterior
/// neighbors contributing zero.
ScalarField apply_laplacian(const ScalarField& u);

/// Low-level stencil application used by the solvers; y and u of size M.
void laplacian_apply_raw(const GridDomain& dom, const double* u, double* y);

/// Conjugate-gradient solve of -Delta_h u = f to relative residual tol.
/// Throws NoConvergenceError after 10*M iterations.
ScalarField solve_poisson(const ScalarField& f, double tol);

/// Nodal quadrature h^N sum(u_i v_i). Throws DomainMismatchError.
double l2_inner(const ScalarField& u, const ScalarField& v);

double l2_norm(const ScalarField& u);

/// h^N sum over |u|^p, the Lp norm to the p-th power.
double lp_norm(const ScalarField& u, double p);

/// l2_inner(u, -Delta_h u); equals the summed squared differences over all
/// links including boundary links to the zero extension.
double dirichlet_energy(const ScalarField& u);

/// Per-node |grad_h u|^2 / max(u, floor)^2. Central differences where both
/// neighbors are interior, one-sided into the interior at the mask boundary.
ScalarField gradient_norm_squared_field(const ScalarField& u, double floor);

/// Zero all nodes whose boundary layer is below min_layer (layer 1 touches
/// the exterior).
void zero_near_boundary(ScalarField& u, int min_layer);

double sup_norm(const ScalarField& u);
double min_value(const ScalarField& u);
double max_value(const ScalarField& u);

} // namespace hle

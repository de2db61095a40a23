#pragma once

// Enumeration oracles used to cross-check the linear-programming routes.
// Nothing here calls the simplex solver.

#include "qsh/geometry.hpp"
#include "qsh/point.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace qsh::oracle {

/// Values k * step with |k * step| <= radius, ascending; always contains 0.
std::vector<double> axis_grid(double radius, double step);

/// Number of points of the product grid, saturating at SIZE_MAX.
std::size_t grid_size(std::size_t axis_points, std::size_t dim);

/// Calls f(point) for every point of axis^dim in lexicographic order.
template <class F>
void for_each_grid_point(std::size_t dim, std::span<const double> axis, F&& f) {
    if (dim == 0 || axis.empty()) return;
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> coords(dim, axis[0]);
    while (true) {
        f(Point(coords));
        std::size_t k = dim;
        while (k > 0) {
            --k;
            if (++idx[k] < axis.size()) {
                coords[k] = axis[idx[k]];
                break;
            }
            idx[k] = 0;
            coords[k] = axis[0];
            if (k == 0) return;
        }
    }
}

double minimax_objective(std::span<const geometry::MinimaxRow> rows, const Point& theta);

struct GridMinimum {
    double value = 0.0;
    Point theta;
};

/// Plain grid minimum of max_j(offset_j + slope_j . theta) over [-r, r]^dim.
GridMinimum grid_minimax(std::span<const geometry::MinimaxRow> rows, std::size_t dim,
                         double radius, double step);

/// Coarse-to-fine grid search: a grid of `points_per_axis` points over the
/// current window, then the window is halved around the best point until its
/// radius falls below `min_radius`. Reliable for one asset; with several
/// assets the search can stall on a ridge of the max.
GridMinimum refined_grid_minimax(std::span<const geometry::MinimaxRow> rows, std::size_t dim,
                                 double radius, std::size_t points_per_axis = 21,
                                 double min_radius = 1e-11);

/// Exact minimum of max_j(offset_j + slope_j . theta) over the box
/// [-r, r]^dim by enumerating vertices of the epigraph: every choice of dim+1
/// tight constraints among the rows and the box faces, solved by Gaussian
/// elimination and kept when feasible. Cost grows like C(rows + 2 dim, dim + 1).
GridMinimum box_vertex_minimax(std::span<const geometry::MinimaxRow> rows, std::size_t dim,
                               double radius);

}  // namespace qsh::oracle

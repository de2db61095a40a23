#include "qsh/grid_oracle.hpp"

#include "qsh/errors.hpp"

#include <cmath>
#include <limits>

namespace qsh::oracle {

std::vector<double> axis_grid(double radius, double step) {
    if (!(step > 0.0) || !(radius >= 0.0)) {
        throw Error(ErrorCode::ScaleExceeded, "grid needs positive step and nonnegative radius");
    }
    const auto k = static_cast<long>(std::floor(radius / step + 1e-9));
    std::vector<double> axis;
    axis.reserve(static_cast<std::size_t>(2 * k + 1));
    for (long i = -k; i <= k; ++i) axis.push_back(static_cast<double>(i) * step);
    return axis;
}

std::size_t grid_size(std::size_t axis_points, std::size_t dim) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < dim; ++k) {
        if (axis_points != 0 && total > std::numeric_limits<std::size_t>::max() / axis_points) {
            return std::numeric_limits<std::size_t>::max();
        }
        total *= axis_points;
    }
    return total;
}

double minimax_objective(std::span<const geometry::MinimaxRow> rows, const Point& theta) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& row : rows) best = std::max(best, row.offset + dot(row.slope, theta));
    return best;
}

GridMinimum grid_minimax(std::span<const geometry::MinimaxRow> rows, std::size_t dim,
                         double radius, double step) {
    const auto axis = axis_grid(radius, step);
    GridMinimum best{std::numeric_limits<double>::infinity(), Point::zero(dim)};
    for_each_grid_point(dim, axis, [&](const Point& theta) {
        const double v = minimax_objective(rows, theta);
        if (v < best.value) best = {v, theta};
    });
    return best;
}

GridMinimum refined_grid_minimax(std::span<const geometry::MinimaxRow> rows, std::size_t dim,
                                 double radius, std::size_t points_per_axis, double min_radius) {
    if (points_per_axis < 3) points_per_axis = 3;
    const std::size_t half = points_per_axis / 2;
    std::vector<double> center(dim, 0.0);
    GridMinimum best{minimax_objective(rows, Point::zero(dim)), Point::zero(dim)};
    double r = radius;
    std::vector<double> offsets(2 * half + 1);
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        offsets[i] = (static_cast<double>(i) - static_cast<double>(half)) / static_cast<double>(half);
    }
    for (int level = 0; level < 2000 && r >= min_radius; ++level) {
        bool on_edge = false;
        for_each_grid_point(dim, offsets, [&](const Point& unit) {
            std::vector<double> c(dim);
            for (std::size_t k = 0; k < dim; ++k) c[k] = center[k] + r * unit[k];
            Point theta(std::move(c));
            const double v = minimax_objective(rows, theta);
            if (v < best.value) {
                best = {v, theta};
                on_edge = linf_norm(unit) >= 1.0;
            }
        });
        for (std::size_t k = 0; k < dim; ++k) center[k] = best.theta[k];
        // Slide the window while the minimum sits on its boundary.
        if (!on_edge) r *= 0.5;
    }
    return best;
}


namespace {

// Solves the square system a x = b in place; false when singular.
bool solve_square(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        if (std::abs(a[piv][c]) < 1e-12) return false;
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            if (f == 0.0) continue;
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t c = 0; c < n; ++c) b[c] /= a[c][c];
    return true;
}

}  // namespace

GridMinimum box_vertex_minimax(std::span<const geometry::MinimaxRow> rows, std::size_t dim,
                               double radius) {
    if (rows.empty()) throw Error(ErrorCode::EmptyRows, "no rows to minimise over");
    // Constraint c < rows.size() is u = offset + slope . theta; the rest are
    // theta_k = +-radius. Unknowns are (u, theta).
    const std::size_t m = rows.size() + 2 * dim;
    const std::size_t n = dim + 1;
    GridMinimum best{std::numeric_limits<double>::infinity(), Point::zero(dim)};
    std::vector<std::size_t> pick(n);
    for (std::size_t i = 0; i < n; ++i) pick[i] = i;
    if (m < n) return best;
    while (true) {
        if (pick[0] < rows.size()) {
            std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
            std::vector<double> b(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t c = pick[i];
                if (c < rows.size()) {
                    a[i][0] = 1.0;
                    for (std::size_t k = 0; k < dim; ++k) a[i][k + 1] = -rows[c].slope[k];
                    b[i] = rows[c].offset;
                } else {
                    const std::size_t face = c - rows.size();
                    a[i][face / 2 + 1] = 1.0;
                    b[i] = face % 2 == 0 ? radius : -radius;
                }
            }
            if (solve_square(a, b)) {
                Point theta(std::vector<double>(b.begin() + 1, b.end()));
                bool inside = true;
                for (double x : theta.coords()) inside = inside && std::abs(x) <= radius * (1 + 1e-12);
                const double v = minimax_objective(rows, theta);
                if (inside && v <= b[0] + 1e-9 * (1.0 + std::abs(b[0])) && v < best.value) {
                    best = {v, std::move(theta)};
                }
            }
        }
        std::size_t i = n;
        while (i > 0 && pick[i - 1] == m - n + (i - 1)) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t k = i; k < n; ++k) pick[k] = pick[k - 1] + 1;
    }
    return best;
}

}  // namespace qsh::oracle

#pragma once

#include "qsh/point.hpp"
#include "qsh/simplex.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qsh::geometry {

/// One affine piece offset + slope.theta of a pointwise maximum.
struct MinimaxRow {
    double offset = 0.0;
    Point slope;
};

enum class LpStatus { Optimal, UnboundedBelow };

struct LPResult {
    LpStatus status = LpStatus::Optimal;
    /// -inf when unbounded below.
    double value = 0.0;
    std::optional<Point> minimizer;
    /// Input rows attaining the maximum at the minimizer.
    std::vector<std::size_t> active_rows;
    /// The optimal theta may not be unique (zero reduced cost off the basis).
    bool alternative_optima = false;
};

/// Minimizes max_j (offset_j + slope_j . theta) over theta in R^dim.
///
/// Solved in epigraph form (min u s.t. u >= offset_j + slope_j . theta).
/// Identical rows are merged before solving; `active_rows` refers to the
/// caller's indices.
LPResult solve_minimax(std::span<const MinimaxRow> rows, std::size_t dim,
                       const lp::Options& options = {});

struct MembershipResult {
    bool in_hull = false;
    bool in_relative_interior = false;
    /// Convex weights over the support points reproducing the query.
    std::optional<std::vector<double>> barycentric_weights;
    /// Direction theta with theta.(p - query) > 0 for every point p.
    std::optional<Point> separator;
    /// Largest achievable minimum weight t*; 0 when outside the hull.
    double min_weight = 0.0;
};

/// Convex-hull and relative-interior membership of `query` in conv(points).
///
/// A single max-min-weight program decides both: it is feasible iff the
/// query is in the hull, and for a finite point set the relative interior
/// is exactly the set of strictly positive combinations, so t* > tolerance
/// decides relative-interior membership. Outside the hull the separator is
/// the maximizer of min_i theta.(p_i - query) over the box |theta_k| <= 1.
MembershipResult hull_membership(const SupportSet& points, const Point& query,
                                 const lp::Options& options = {});

/// Direction h with h.(p - query) >= 0 for every point and > tolerance for
/// at least one, maximizing the sum over points within |h_k| <= 1.
/// Empty when no such direction exists, i.e. the query lies in the
/// relative interior of the hull.
std::optional<Point> proper_separator(const SupportSet& points, const Point& query,
                                      const lp::Options& options = {});

/// sigma_D(z) = max over x in D of (-x . z), the support function of -D.
double support_function(const SupportSet& points, const Point& z);

/// Dimension of the affine hull of the points.
std::size_t affine_dimension(const SupportSet& points, double tolerance = 1e-9);

struct EnvelopeSample {
    Point z;
    double g = 0.0;
};

/// Concave envelope of the samples evaluated at `query`:
/// max sum l_i g_i over convex weights with sum l_i z_i = query,
/// and -inf when the query is outside conv{z_i}. Samples sharing a location
/// keep the largest value.
double concave_envelope_eval(std::span<const EnvelopeSample> samples, const Point& query,
                             const lp::Options& options = {});

}  // namespace qsh::geometry

#include "qsh/geometry.hpp"

#include "qsh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qsh::geometry {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_points(const SupportSet& points, const Point& query) {
    if (points.empty()) {
        throw Error(ErrorCode::EmptyRows, "point set is empty");
    }
    if (points.dim() != query.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "query has dimension " + std::to_string(query.dim()) +
                        ", points have dimension " + std::to_string(points.dim()));
    }
}

Point box_separator(const SupportSet& points, const Point& query, const lp::Options& options) {
    const std::size_t d = query.dim();
    lp::LinearProgram prog;
    for (std::size_t k = 0; k <= d; ++k) prog.add_variable(lp::VarKind::Free);
    const std::size_t eps = d;
    for (const auto& p : points) {
        std::vector<double> row(d + 1);
        for (std::size_t k = 0; k < d; ++k) row[k] = p[k] - query[k];
        row[eps] = -1.0;
        prog.add_constraint(std::move(row), lp::Sense::GreaterEqual, 0.0);
    }
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> row(d + 1, 0.0);
        row[k] = 1.0;
        prog.add_constraint(row, lp::Sense::LessEqual, 1.0);
        prog.add_constraint(row, lp::Sense::GreaterEqual, -1.0);
    }
    std::vector<double> objective(d + 1, 0.0);
    objective[eps] = 1.0;
    auto sol = prog.maximize(objective, options);
    if (sol.status != lp::Status::Optimal) {
        throw Error(ErrorCode::InternalInvariant, "separation program did not reach an optimum");
    }
    return Point(std::vector<double>(sol.x.begin(), sol.x.begin() + static_cast<long>(d)));
}

}  // namespace

LPResult solve_minimax(std::span<const MinimaxRow> rows, std::size_t dim,
                       const lp::Options& options) {
    if (rows.empty()) throw Error(ErrorCode::EmptyRows, "minimax needs at least one row");
    for (const auto& row : rows) {
        if (row.slope.dim() != dim) {
            throw Error(ErrorCode::DimensionMismatch,
                        "row slope has dimension " + std::to_string(row.slope.dim()) +
                            ", expected " + std::to_string(dim));
        }
        if (!std::isfinite(row.offset)) {
            throw Error(ErrorCode::NonFiniteValue, "row offset is not finite");
        }
    }

    std::vector<const MinimaxRow*> unique;
    for (const auto& row : rows) {
        bool dup = std::any_of(unique.begin(), unique.end(), [&](const MinimaxRow* u) {
            return std::abs(u->offset - row.offset) <= kDedupTolerance &&
                   linf_distance(u->slope, row.slope) <= kDedupTolerance;
        });
        if (!dup) unique.push_back(&row);
    }

    // Variables: theta_0 .. theta_{dim-1}, u. All free.
    lp::LinearProgram prog;
    for (std::size_t k = 0; k <= dim; ++k) prog.add_variable(lp::VarKind::Free);
    for (const MinimaxRow* row : unique) {
        std::vector<double> coeffs(dim + 1);
        for (std::size_t k = 0; k < dim; ++k) coeffs[k] = -row->slope[k];
        coeffs[dim] = 1.0;
        prog.add_constraint(std::move(coeffs), lp::Sense::GreaterEqual, row->offset);
    }
    std::vector<double> objective(dim + 1, 0.0);
    objective[dim] = 1.0;
    const auto sol = prog.minimize(objective, options);

    LPResult result;
    if (sol.status == lp::Status::Unbounded) {
        result.status = LpStatus::UnboundedBelow;
        result.value = -kInf;
        return result;
    }
    if (sol.status != lp::Status::Optimal) {
        throw Error(ErrorCode::InternalInvariant, "epigraph program reported infeasible");
    }

    Point theta(std::vector<double>(sol.x.begin(), sol.x.begin() + static_cast<long>(dim)));
    std::vector<double> evals(rows.size());
    double value = -kInf;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        evals[j] = rows[j].offset + dot(rows[j].slope, theta);
        value = std::max(value, evals[j]);
    }
    const double active_tol = options.tolerance * (1.0 + std::abs(value));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (value - evals[j] <= active_tol) result.active_rows.push_back(j);
    }
    result.status = LpStatus::Optimal;
    result.value = value;
    result.minimizer = std::move(theta);
    result.alternative_optima = sol.alternative_optima;
    return result;
}

MembershipResult hull_membership(const SupportSet& points, const Point& query,
                                 const lp::Options& options) {
    require_points(points, query);
    const std::size_t n = points.size();
    const std::size_t d = query.dim();

    // Variables: lambda_0 .. lambda_{n-1}, t. All nonnegative.
    lp::LinearProgram prog;
    for (std::size_t i = 0; i <= n; ++i) prog.add_variable();
    const std::size_t t = n;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(n + 1, 0.0);
        row[i] = 1.0;
        row[t] = -1.0;
        prog.add_constraint(std::move(row), lp::Sense::GreaterEqual, 0.0);
    }
    prog.add_constraint(std::vector<double>(n, 1.0), lp::Sense::Equal, 1.0);
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = points[i][k];
        prog.add_constraint(std::move(row), lp::Sense::Equal, query[k]);
    }
    std::vector<double> objective(n + 1, 0.0);
    objective[t] = 1.0;
    const auto sol = prog.maximize(objective, options);

    MembershipResult result;
    if (sol.status == lp::Status::Infeasible) {
        result.separator = box_separator(points, query, options);
        return result;
    }
    if (sol.status != lp::Status::Optimal) {
        throw Error(ErrorCode::InternalInvariant, "membership program is unbounded");
    }
    result.in_hull = true;
    result.min_weight = sol.x[t];
    result.in_relative_interior = sol.x[t] > options.tolerance;
    std::vector<double> weights(sol.x.begin(), sol.x.begin() + static_cast<long>(n));
    double total = 0.0;
    for (double w : weights) total += w;
    for (double& w : weights) w /= total;
    result.barycentric_weights = std::move(weights);
    return result;
}

std::optional<Point> proper_separator(const SupportSet& points, const Point& query,
                                      const lp::Options& options) {
    require_points(points, query);
    const std::size_t d = query.dim();
    lp::LinearProgram prog;
    for (std::size_t k = 0; k < d; ++k) prog.add_variable(lp::VarKind::Free);
    std::vector<double> objective(d, 0.0);
    for (const auto& p : points) {
        std::vector<double> row(d);
        for (std::size_t k = 0; k < d; ++k) {
            row[k] = p[k] - query[k];
            objective[k] += row[k];
        }
        prog.add_constraint(std::move(row), lp::Sense::GreaterEqual, 0.0);
    }
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> row(d, 0.0);
        row[k] = 1.0;
        prog.add_constraint(row, lp::Sense::LessEqual, 1.0);
        prog.add_constraint(row, lp::Sense::GreaterEqual, -1.0);
    }
    const auto sol = prog.maximize(objective, options);
    if (sol.status != lp::Status::Optimal) {
        throw Error(ErrorCode::InternalInvariant, "proper separation program failed");
    }
    if (sol.objective <= options.tolerance) return std::nullopt;
    return Point(sol.x);
}

double support_function(const SupportSet& points, const Point& z) {
    require_points(points, z);
    double best = -kInf;
    for (const auto& x : points) best = std::max(best, -dot(x, z));
    return best;
}

std::size_t affine_dimension(const SupportSet& points, double tolerance) {
    if (points.size() <= 1) return 0;
    const std::size_t d = points.dim();
    std::vector<std::vector<double>> m;
    double scale = 1.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        std::vector<double> row(d);
        for (std::size_t k = 0; k < d; ++k) {
            row[k] = points[i][k] - points[0][k];
            scale = std::max(scale, std::abs(row[k]));
        }
        m.push_back(std::move(row));
    }
    const double eps = tolerance * scale;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < d && rank < m.size(); ++col) {
        std::size_t pivot = rank;
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        }
        if (std::abs(m[pivot][col]) <= eps) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            const double f = m[r][col] / m[rank][col];
            for (std::size_t k = col; k < d; ++k) m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

double concave_envelope_eval(std::span<const EnvelopeSample> samples, const Point& query,
                             const lp::Options& options) {
    if (samples.empty()) throw Error(ErrorCode::EmptyRows, "no envelope samples");
    std::vector<EnvelopeSample> merged;
    for (const auto& s : samples) {
        if (s.z.dim() != query.dim()) {
            throw Error(ErrorCode::DimensionMismatch, "sample and query dimensions differ");
        }
        if (!std::isfinite(s.g)) throw Error(ErrorCode::NonFiniteValue, "sample value not finite");
        auto it = std::find_if(merged.begin(), merged.end(), [&](const EnvelopeSample& m) {
            return linf_distance(m.z, s.z) <= kDedupTolerance;
        });
        if (it == merged.end()) {
            merged.push_back(s);
        } else {
            it->g = std::max(it->g, s.g);
        }
    }

    const std::size_t n = merged.size();
    const std::size_t d = query.dim();
    lp::LinearProgram prog;
    for (std::size_t i = 0; i < n; ++i) prog.add_variable();
    prog.add_constraint(std::vector<double>(n, 1.0), lp::Sense::Equal, 1.0);
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = merged[i].z[k];
        prog.add_constraint(std::move(row), lp::Sense::Equal, query[k]);
    }
    std::vector<double> objective(n);
    for (std::size_t i = 0; i < n; ++i) objective[i] = merged[i].g;
    const auto sol = prog.maximize(objective, options);
    if (sol.status == lp::Status::Infeasible) return -kInf;
    if (sol.status != lp::Status::Optimal) {
        throw Error(ErrorCode::InternalInvariant, "envelope program is unbounded");
    }
    return sol.objective;
}

}  // namespace qsh::geometry

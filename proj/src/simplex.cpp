#include "qsh/simplex.hpp"

#include "qsh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qsh::lp {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr std::size_t kMaxIterations = 200000;

// Dense simplex tableau over standard form: min c.x, A x = b, x >= 0, b >= 0.
// Columns [0, n) are structural, [n, n + m) artificial, the last is the rhs.
class Tableau {
public:
    Tableau(std::vector<std::vector<double>> a, std::vector<double> b, double tol)
        : m_(a.size()), n_(a.empty() ? 0 : a.front().size()), tol_(tol),
          cells_(m_, std::vector<double>(n_ + m_ + 1, 0.0)),
          cost_(n_ + m_ + 1, 0.0), basis_(m_) {
        for (std::size_t r = 0; r < m_; ++r) {
            std::copy(a[r].begin(), a[r].end(), cells_[r].begin());
            cells_[r][n_ + r] = 1.0;
            cells_[r][rhs()] = b[r];
            basis_[r] = n_ + r;
        }
    }

    // Phase one: drive the artificial sum to zero. Returns false if infeasible.
    bool phase_one() {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t j = 0; j < n_; ++j) cost_[j] -= cells_[r][j];
            cost_[rhs()] -= cells_[r][rhs()];
        }
        run(/*allow_artificial=*/true);
        if (-cost_[rhs()] > tol_) return false;
        evict_artificials();
        return true;
    }

    // Phase two on the structural costs. Returns false if unbounded below.
    bool phase_two(const std::vector<double>& c) {
        std::fill(cost_.begin(), cost_.end(), 0.0);
        std::copy(c.begin(), c.end(), cost_.begin());
        for (std::size_t r = 0; r < m_; ++r) {
            double cb = basis_[r] < n_ ? c[basis_[r]] : 0.0;
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= rhs(); ++j) cost_[j] -= cb * cells_[r][j];
        }
        return run(/*allow_artificial=*/false);
    }

    [[nodiscard]] double objective() const { return -cost_[rhs()]; }

    [[nodiscard]] std::vector<double> primal() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_) x[basis_[r]] = std::max(0.0, cells_[r][rhs()]);
        }
        return x;
    }

    [[nodiscard]] bool is_basic(std::size_t j) const {
        return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
    }

    [[nodiscard]] double reduced_cost(std::size_t j) const { return cost_[j]; }

private:
    [[nodiscard]] std::size_t rhs() const { return n_ + m_; }

    // Bland's rule: lowest-index improving column, ratio ties broken by the
    // lowest basic index.
    bool run(bool allow_artificial) {
        const std::size_t limit = allow_artificial ? n_ + m_ : n_;
        for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
            std::size_t enter = kNone;
            for (std::size_t j = 0; j < limit; ++j) {
                if (cost_[j] < -tol_ && !is_basic(j)) {
                    enter = j;
                    break;
                }
            }
            if (enter == kNone) return true;

            std::size_t leave = kNone;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < m_; ++r) {
                double a = cells_[r][enter];
                if (a <= tol_) continue;
                double ratio = cells_[r][rhs()] / a;
                if (leave == kNone || ratio < best - tol_) {
                    best = ratio;
                    leave = r;
                } else if (ratio <= best + tol_ && basis_[r] < basis_[leave]) {
                    leave = r;
                }
            }
            if (leave == kNone) return false;
            pivot(leave, enter);
        }
        throw Error(ErrorCode::InternalInvariant, "simplex iteration limit reached");
    }

    void pivot(std::size_t row, std::size_t col) {
        auto& pr = cells_[row];
        const double p = pr[col];
        for (double& v : pr) v /= p;
        pr[col] = 1.0;
        for (std::size_t r = 0; r < m_; ++r) {
            if (r == row) continue;
            const double f = cells_[r][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= rhs(); ++j) cells_[r][j] -= f * pr[j];
            cells_[r][col] = 0.0;
        }
        const double f = cost_[col];
        if (f != 0.0) {
            for (std::size_t j = 0; j <= rhs(); ++j) cost_[j] -= f * pr[j];
            cost_[col] = 0.0;
        }
        basis_[row] = col;
    }

    // Pivot zero-level artificials out of the basis. Rows with no usable
    // structural entry are redundant and keep their artificial at zero.
    void evict_artificials() {
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs(cells_[r][j]) > tol_ && !is_basic(j)) {
                    pivot(r, j);
                    break;
                }
            }
        }
    }

    std::size_t m_;
    std::size_t n_;
    double tol_;
    std::vector<std::vector<double>> cells_;
    std::vector<double> cost_;
    std::vector<std::size_t> basis_;
};

}  // namespace

std::size_t LinearProgram::add_variable(VarKind kind) {
    kinds_.push_back(kind);
    return kinds_.size() - 1;
}

void LinearProgram::add_constraint(std::vector<double> coeffs, Sense sense, double rhs) {
    if (coeffs.size() > kinds_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "constraint row longer than variable count");
    }
    rows_.push_back(Row{std::move(coeffs), sense, rhs});
}

Solution LinearProgram::maximize(const std::vector<double>& objective,
                                 const Options& options) const {
    std::vector<double> neg(objective.size());
    std::transform(objective.begin(), objective.end(), neg.begin(), [](double v) { return -v; });
    Solution s = minimize(neg, options);
    s.objective = -s.objective;
    return s;
}

Solution LinearProgram::minimize(const std::vector<double>& objective,
                                 const Options& options) const {
    if (objective.size() > kinds_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "objective longer than variable count");
    }

    // Column layout: each declared variable maps to a "plus" column and, if
    // free, a "minus" column; then one slack per inequality row.
    std::vector<std::size_t> plus(kinds_.size());
    std::vector<std::size_t> minus(kinds_.size(), kNone);
    std::size_t ncols = 0;
    for (std::size_t v = 0; v < kinds_.size(); ++v) {
        plus[v] = ncols++;
        if (kinds_[v] == VarKind::Free) minus[v] = ncols++;
    }
    const std::size_t structural = ncols;
    for (const auto& row : rows_) {
        if (row.sense != Sense::Equal) ++ncols;
    }

    const std::size_t m = rows_.size();
    std::vector<std::vector<double>> a(m, std::vector<double>(ncols, 0.0));
    std::vector<double> b(m, 0.0);
    std::size_t slack = structural;
    for (std::size_t r = 0; r < m; ++r) {
        const auto& row = rows_[r];
        for (std::size_t v = 0; v < row.coeffs.size(); ++v) {
            a[r][plus[v]] = row.coeffs[v];
            if (minus[v] != kNone) a[r][minus[v]] = -row.coeffs[v];
        }
        if (row.sense == Sense::LessEqual) a[r][slack++] = 1.0;
        if (row.sense == Sense::GreaterEqual) a[r][slack++] = -1.0;
        b[r] = row.rhs;
        if (b[r] < 0.0) {
            for (double& x : a[r]) x = -x;
            b[r] = -b[r];
        }
    }

    std::vector<double> c(ncols, 0.0);
    for (std::size_t v = 0; v < objective.size(); ++v) {
        c[plus[v]] = objective[v];
        if (minus[v] != kNone) c[minus[v]] = -objective[v];
    }

    Solution out;
    if (m == 0) {
        // Only sign constraints: optimal at zero unless some cost can decrease.
        for (std::size_t j = 0; j < ncols; ++j) {
            if (c[j] < -options.tolerance) {
                out.status = Status::Unbounded;
                out.objective = -std::numeric_limits<double>::infinity();
                return out;
            }
        }
        out.status = Status::Optimal;
        out.objective = 0.0;
        out.x.assign(kinds_.size(), 0.0);
        out.alternative_optima = std::any_of(c.begin(), c.end(), [&](double v) {
            return std::abs(v) <= options.tolerance;
        });
        return out;
    }

    Tableau t(std::move(a), std::move(b), options.tolerance);
    if (!t.phase_one()) {
        out.status = Status::Infeasible;
        out.objective = std::numeric_limits<double>::infinity();
        return out;
    }
    if (!t.phase_two(c)) {
        out.status = Status::Unbounded;
        out.objective = -std::numeric_limits<double>::infinity();
        return out;
    }

    out.status = Status::Optimal;
    out.objective = t.objective();
    const auto x = t.primal();
    out.x.resize(kinds_.size());
    for (std::size_t v = 0; v < kinds_.size(); ++v) {
        out.x[v] = x[plus[v]] - (minus[v] != kNone ? x[minus[v]] : 0.0);
    }

    std::vector<std::size_t> mirror(ncols, kNone);
    for (std::size_t v = 0; v < kinds_.size(); ++v) {
        if (minus[v] == kNone) continue;
        mirror[plus[v]] = minus[v];
        mirror[minus[v]] = plus[v];
    }
    for (std::size_t j = 0; j < ncols && !out.alternative_optima; ++j) {
        if (t.is_basic(j)) continue;
        if (mirror[j] != kNone && t.is_basic(mirror[j])) continue;
        if (std::abs(t.reduced_cost(j)) <= options.tolerance) out.alternative_optima = true;
    }
    return out;
}

}  // namespace qsh::lp

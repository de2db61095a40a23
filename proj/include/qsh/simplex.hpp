#pragma once

#include <cstddef>
#include <vector>

namespace qsh::lp {

inline constexpr double kDefaultTolerance = 1e-9;

struct Options {
    /// Feasibility and optimality tolerance of the simplex method.
    double tolerance = kDefaultTolerance;
};

enum class Status { Optimal, Infeasible, Unbounded };

enum class Sense { LessEqual, GreaterEqual, Equal };

enum class VarKind { Free, NonNegative };

struct Solution {
    Status status = Status::Infeasible;
    /// +inf when infeasible, -inf when unbounded below.
    double objective = 0.0;
    /// One value per declared variable; empty unless Optimal.
    std::vector<double> x;
    /// A nonbasic column with zero reduced cost exists at the optimum.
    bool alternative_optima = false;
};

/// Small dense linear program solved by a two-phase primal simplex with
/// Bland's anti-cycling rule.
///
/// Variables are either free or nonnegative; free variables are split into
/// a difference of two nonnegative columns internally. Constraints are
/// dense rows over the variables declared so far (shorter rows are padded
/// with zeros). Unboundedness is detected from an improving ray in phase
/// two, so an unbounded program reports an exact -inf.
class LinearProgram {
public:
    std::size_t add_variable(VarKind kind = VarKind::NonNegative);
    void add_constraint(std::vector<double> coeffs, Sense sense, double rhs);

    [[nodiscard]] std::size_t variable_count() const noexcept { return kinds_.size(); }
    [[nodiscard]] std::size_t constraint_count() const noexcept { return rows_.size(); }

    [[nodiscard]] Solution minimize(const std::vector<double>& objective,
                                    const Options& options = {}) const;
    [[nodiscard]] Solution maximize(const std::vector<double>& objective,
                                    const Options& options = {}) const;

private:
    struct Row {
        std::vector<double> coeffs;
        Sense sense;
        double rhs;
    };
    std::vector<VarKind> kinds_;
    std::vector<Row> rows_;
};

}  // namespace qsh::lp

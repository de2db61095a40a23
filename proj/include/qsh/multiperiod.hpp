#pragma once

#include "qsh/arbitrage.hpp"
#include "qsh/measures.hpp"
#include "qsh/point.hpp"
#include "qsh/pricing.hpp"

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace qsh {

struct TreeNode {
    int id = 0;
    int depth = 0;
    /// Discounted asset prices S_t at this node.
    Point price;
    std::vector<int> children;
    /// Priors over the children, in child order; absent at leaves.
    std::optional<PriorFamily> child_priors;

    [[nodiscard]] bool is_leaf() const noexcept { return children.empty(); }
};

/// Rooted scenario tree with all leaves at depth `horizon`. Each internal
/// node carries its own one-step prior family; families at distinct nodes
/// combine freely.
struct ScenarioTree {
    std::map<int, TreeNode> nodes;
    int horizon = 0;

    void add(TreeNode node);
    [[nodiscard]] const TreeNode& node(int id) const;
    /// The unique node that is nobody's child. Requires a valid tree.
    [[nodiscard]] int root() const;
    [[nodiscard]] std::size_t dim() const;
};

/// Throws CycleDetected, RaggedDepth, PriorArityMismatch, NegativePrice or
/// InvalidTree (dangling ids, several roots, inconsistent depth fields).
void validate_tree(const ScenarioTree& tree);

/// Nodes whose every edge from the root is charged by some parent prior.
std::set<int> reachable_nodes(const ScenarioTree& tree);

/// The one-step market at an internal node: y = S_t, atoms = children.
OnePeriodMarket one_step_market(const ScenarioTree& tree, int node);

struct TreeOptions {
    lp::Options lp;
    /// Run the per-node checks and same-depth pricing steps concurrently.
    bool parallel = false;
};

struct NodeVerdict {
    int node = 0;
    /// AipOnly when only NA fails, IP when AIP fails.
    MarketClass verdict = MarketClass::IP;
};

struct GlobalReport {
    bool global_aip = true;
    bool global_na = true;
    /// Reachable internal nodes where NA fails, ordered by (depth, id).
    std::vector<NodeVerdict> failing_nodes;
    /// Per reachable internal node one-step reports, keyed by id.
    std::map<int, ArbitrageReport> node_reports;
};

/// Global AIP holds iff one-step AIP holds at every reachable internal node.
/// The report also carries the one-step NA verdicts.
GlobalReport global_aip(const ScenarioTree& tree, const TreeOptions& options = {});

struct GlobalNaReport {
    bool holds = true;
    std::vector<int> failing_nodes;
};

GlobalNaReport global_na(const ScenarioTree& tree, const TreeOptions& options = {});

struct NodeHedge {
    bool reachable = false;
    /// Superhedging value; empty at unreachable nodes (unconstrained).
    std::optional<double> value;
    /// One-step hedge held from this node; empty at leaves and unreachable nodes.
    std::optional<Point> theta;
    bool hedge_non_unique = false;
};

/// Backward superhedging recursion: each reachable internal node prices the
/// per-child claim given by its children's values. Throws GlobalIPDetected
/// carrying the first failing node (by depth, then id) when global AIP fails,
/// and MissingPayoff when a reachable leaf has no terminal value.
std::map<int, NodeHedge> backward_superhedge(const ScenarioTree& tree,
                                             const std::map<int, double>& terminal_payoff,
                                             const TreeOptions& options = {});

struct GridIpSearch {
    bool found = false;
    /// Node from which the grid strategy earns epsilon quasi-surely.
    std::optional<int> node;
    /// Best guaranteed terminal gain from `node` over the grid strategies.
    double guaranteed_gain = 0.0;
};

/// Exhaustive grid search for a global instantaneous profit.
///
/// For every reachable node, strategies are one grid vector per internal
/// node of its subtree; an IP is found when the worst terminal gain over the
/// reachable paths is at least the smallest positive grid value. Max-min of
/// the gain decomposes over subtrees, so the search is exact on the grid.
/// Throws ScaleExceeded beyond depth 4, branching 4 or 10^6 grid vectors.
GridIpSearch brute_force_global_ip(const ScenarioTree& tree, double grid_radius, double grid_step);

}  // namespace qsh

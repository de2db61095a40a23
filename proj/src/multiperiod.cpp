#include "qsh/multiperiod.hpp"

#include "qsh/errors.hpp"
#include "qsh/grid_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <queue>

namespace qsh {

namespace {

constexpr int kOracleMaxDepth = 4;
constexpr std::size_t kOracleMaxBranching = 4;
constexpr std::size_t kOracleMaxGrid = 1'000'000;

// Reachable internal nodes ordered by (depth, id).
std::vector<int> reachable_internal(const ScenarioTree& tree, const std::set<int>& reachable) {
    std::vector<int> out;
    for (int id : reachable) {
        if (!tree.node(id).is_leaf()) out.push_back(id);
    }
    std::stable_sort(out.begin(), out.end(), [&](int a, int b) {
        return tree.node(a).depth < tree.node(b).depth;
    });
    return out;
}

// Runs fn(i) for i in [0, n), optionally on separate threads. Each call
// writes only its own slot.
template <class Fn>
void run_indexed(std::size_t n, bool parallel, Fn&& fn) {
    if (!parallel || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::future<void>> tasks;
    tasks.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        tasks.push_back(std::async(std::launch::async, [&fn, i] { fn(i); }));
    }
    for (auto& t : tasks) t.get();
}

}  // namespace

void ScenarioTree::add(TreeNode node) {
    const int id = node.id;
    if (!nodes.emplace(id, std::move(node)).second) {
        throw Error(ErrorCode::InvalidTree, "duplicate node id " + std::to_string(id), id);
    }
}

const TreeNode& ScenarioTree::node(int id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) {
        throw Error(ErrorCode::InvalidTree, "unknown node id " + std::to_string(id), id);
    }
    return it->second;
}

int ScenarioTree::root() const {
    std::set<int> children;
    for (const auto& [id, n] : nodes) children.insert(n.children.begin(), n.children.end());
    std::optional<int> root;
    for (const auto& [id, n] : nodes) {
        if (children.count(id)) continue;
        if (root) throw Error(ErrorCode::InvalidTree, "several root nodes", id);
        root = id;
    }
    if (!root) throw Error(ErrorCode::CycleDetected, "every node has a parent");
    return *root;
}

std::size_t ScenarioTree::dim() const {
    return nodes.empty() ? 0 : nodes.begin()->second.price.dim();
}

void validate_tree(const ScenarioTree& tree) {
    if (tree.nodes.empty()) throw Error(ErrorCode::InvalidTree, "tree has no nodes");
    if (tree.horizon < 0) throw Error(ErrorCode::InvalidTree, "negative horizon");
    const std::size_t d = tree.dim();
    if (d == 0) throw Error(ErrorCode::InvalidTree, "node prices have dimension 0");

    for (const auto& [id, n] : tree.nodes) {
        if (n.id != id) throw Error(ErrorCode::InvalidTree, "node key and id differ", id);
        if (n.price.dim() != d) {
            throw Error(ErrorCode::DimensionMismatch, "node price dimension differs", id);
        }
        for (double c : n.price.coords()) {
            if (c < 0.0) throw Error(ErrorCode::NegativePrice, "negative price at node", id);
        }
        for (int c : n.children) {
            if (!tree.nodes.count(c)) {
                throw Error(ErrorCode::InvalidTree,
                            "child " + std::to_string(c) + " does not exist", id);
            }
        }
        if (n.is_leaf() && n.child_priors) {
            throw Error(ErrorCode::PriorArityMismatch, "leaf carries child priors", id);
        }
        if (!n.is_leaf()) {
            if (!n.child_priors) {
                throw Error(ErrorCode::PriorArityMismatch, "internal node has no priors", id);
            }
            if (n.child_priors->atom_count() != n.children.size()) {
                throw Error(ErrorCode::PriorArityMismatch,
                            std::to_string(n.child_priors->atom_count()) + " weights over " +
                                std::to_string(n.children.size()) + " children",
                            id);
            }
        }
    }

    const int root = tree.root();
    if (tree.node(root).depth != 0) {
        throw Error(ErrorCode::InvalidTree, "root depth must be 0", root);
    }

    // Iterative DFS; a grey revisit is a cycle, a black revisit a shared child.
    enum class Mark { White, Grey, Black };
    std::map<int, Mark> mark;
    for (const auto& [id, n] : tree.nodes) mark[id] = Mark::White;
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    mark[root] = Mark::Grey;
    while (!stack.empty()) {
        auto& [id, next] = stack.back();
        const TreeNode& n = tree.node(id);
        if (next == n.children.size()) {
            mark[id] = Mark::Black;
            stack.pop_back();
            continue;
        }
        const int c = n.children[next++];
        if (mark[c] == Mark::Grey) throw Error(ErrorCode::CycleDetected, "cycle through node", c);
        if (mark[c] == Mark::Black) throw Error(ErrorCode::InvalidTree, "node has two parents", c);
        if (tree.node(c).depth != n.depth + 1) {
            throw Error(ErrorCode::InvalidTree, "child depth is not parent depth + 1", c);
        }
        mark[c] = Mark::Grey;
        stack.emplace_back(c, 0);
    }
    for (const auto& [id, m] : mark) {
        // Every unvisited node has a parent, so the unvisited part holds a cycle.
        if (m == Mark::White) throw Error(ErrorCode::CycleDetected, "node not reachable from root", id);
    }

    for (const auto& [id, n] : tree.nodes) {
        if (n.is_leaf() && n.depth != tree.horizon) {
            throw Error(ErrorCode::RaggedDepth,
                        "leaf at depth " + std::to_string(n.depth) + ", horizon " +
                            std::to_string(tree.horizon),
                        id);
        }
        if (!n.is_leaf() && n.depth >= tree.horizon) {
            throw Error(ErrorCode::RaggedDepth, "internal node at or beyond the horizon", id);
        }
    }
}

std::set<int> reachable_nodes(const ScenarioTree& tree) {
    validate_tree(tree);
    std::set<int> out;
    std::queue<int> todo;
    todo.push(tree.root());
    while (!todo.empty()) {
        const int id = todo.front();
        todo.pop();
        out.insert(id);
        const TreeNode& n = tree.node(id);
        if (n.is_leaf()) continue;
        for (std::size_t j : relevant_atoms(*n.child_priors)) todo.push(n.children[j]);
    }
    return out;
}

OnePeriodMarket one_step_market(const ScenarioTree& tree, int node) {
    const TreeNode& n = tree.node(node);
    if (n.is_leaf()) throw Error(ErrorCode::LeafNode, "leaf has no one-step market", node);
    RandomVariable terminal;
    for (int c : n.children) terminal.values.push_back(tree.node(c).price);
    return OnePeriodMarket(n.price, std::move(terminal), *n.child_priors);
}

GlobalReport global_aip(const ScenarioTree& tree, const TreeOptions& options) {
    const auto internal = reachable_internal(tree, reachable_nodes(tree));
    std::vector<std::optional<ArbitrageReport>> reports(internal.size());
    run_indexed(internal.size(), options.parallel, [&](std::size_t i) {
        reports[i] = arbitrage_report(one_step_market(tree, internal[i]), options.lp);
    });

    GlobalReport out;
    for (std::size_t i = 0; i < internal.size(); ++i) {
        const auto& r = *reports[i];
        if (!r.na) out.failing_nodes.push_back({internal[i], r.classification()});
        out.global_aip = out.global_aip && r.aip;
        out.global_na = out.global_na && r.na;
        out.node_reports.emplace(internal[i], r);
    }
    return out;
}

GlobalNaReport global_na(const ScenarioTree& tree, const TreeOptions& options) {
    const auto report = global_aip(tree, options);
    GlobalNaReport out;
    out.holds = report.global_na;
    for (const auto& f : report.failing_nodes) out.failing_nodes.push_back(f.node);
    return out;
}

std::map<int, NodeHedge> backward_superhedge(const ScenarioTree& tree,
                                             const std::map<int, double>& terminal_payoff,
                                             const TreeOptions& options) {
    const auto reachable = reachable_nodes(tree);
    const auto report = global_aip(tree, options);
    for (const auto& f : report.failing_nodes) {
        if (f.verdict == MarketClass::IP) {
            throw Error(ErrorCode::GlobalIPDetected,
                        "instantaneous profit at node " + std::to_string(f.node), f.node);
        }
    }

    std::map<int, NodeHedge> out;
    for (const auto& [id, n] : tree.nodes) {
        NodeHedge h;
        h.reachable = reachable.count(id) > 0;
        if (h.reachable && n.is_leaf()) {
            auto it = terminal_payoff.find(id);
            if (it == terminal_payoff.end()) {
                throw Error(ErrorCode::MissingPayoff, "no terminal value for leaf", id);
            }
            if (!std::isfinite(it->second)) {
                throw Error(ErrorCode::NonFiniteValue, "terminal value is not finite", id);
            }
            h.value = it->second;
        }
        out.emplace(id, std::move(h));
    }

    for (int depth = tree.horizon - 1; depth >= 0; --depth) {
        std::vector<int> layer;
        for (int id : reachable) {
            const TreeNode& n = tree.node(id);
            if (n.depth == depth && !n.is_leaf()) layer.push_back(id);
        }
        std::vector<PriceResult> results(layer.size());
        run_indexed(layer.size(), options.parallel, [&](std::size_t i) {
            const TreeNode& n = tree.node(layer[i]);
            // Polar children carry no row; their placeholder value is unused.
            PerAtomClaim claim{std::vector<double>(n.children.size(), 0.0)};
            for (std::size_t j = 0; j < n.children.size(); ++j) {
                const auto& child = out.at(n.children[j]);
                if (child.value) claim.values[j] = *child.value;
            }
            results[i] = superhedge_price(one_step_market(tree, layer[i]), claim, options.lp);
        });
        for (std::size_t i = 0; i < layer.size(); ++i) {
            if (results[i].status != PriceStatus::Finite) {
                throw Error(ErrorCode::GlobalIPDetected, "unbounded one-step price", layer[i]);
            }
            auto& h = out.at(layer[i]);
            h.value = results[i].price;
            h.theta = results[i].theta_hat;
            h.hedge_non_unique = results[i].hedge_non_unique;
        }
    }
    return out;
}

GridIpSearch brute_force_global_ip(const ScenarioTree& tree, double grid_radius,
                                   double grid_step) {
    validate_tree(tree);
    if (tree.horizon > kOracleMaxDepth) {
        throw Error(ErrorCode::ScaleExceeded, "tree deeper than the oracle limit");
    }
    for (const auto& [id, n] : tree.nodes) {
        if (n.children.size() > kOracleMaxBranching) {
            throw Error(ErrorCode::ScaleExceeded, "branching above the oracle limit", id);
        }
    }
    const auto axis = oracle::axis_grid(grid_radius, grid_step);
    if (oracle::grid_size(axis.size(), tree.dim()) > kOracleMaxGrid) {
        throw Error(ErrorCode::ScaleExceeded, "strategy grid too large");
    }

    const auto reachable = reachable_nodes(tree);
    // gain[id]: best worst-case terminal gain from id over grid strategies.
    std::map<int, double> gain;
    for (int depth = tree.horizon; depth >= 0; --depth) {
        for (int id : reachable) {
            const TreeNode& n = tree.node(id);
            if (n.depth != depth) continue;
            if (n.is_leaf()) {
                gain[id] = 0.0;
                continue;
            }
            const auto relevant = relevant_atoms(*n.child_priors);
            double best = -std::numeric_limits<double>::infinity();
            oracle::for_each_grid_point(tree.dim(), axis, [&](const Point& theta) {
                double worst = std::numeric_limits<double>::infinity();
                for (std::size_t j : relevant) {
                    const int c = n.children[j];
                    worst = std::min(worst, dot(theta, tree.node(c).price - n.price) + gain.at(c));
                }
                best = std::max(best, worst);
            });
            gain[id] = best;
        }
    }

    GridIpSearch out;
    std::vector<int> order(reachable.begin(), reachable.end());
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return tree.node(a).depth < tree.node(b).depth;
    });
    for (int id : order) {
        if (gain.at(id) >= grid_step * (1.0 - 1e-12)) {
            out.found = true;
            out.node = id;
            out.guaranteed_gain = gain.at(id);
            break;
        }
    }
    return out;
}

}  // namespace qsh

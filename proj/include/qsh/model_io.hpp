#pragma once

#include "qsh/multiperiod.hpp"
#include "qsh/pricing.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qsh::io {

inline constexpr int kSchemaVersion = 1;

/// Concrete payoff families accepted in model files.
struct PayoffSpec {
    enum class Kind { Call, Put, Linear, Table };

    Kind kind = Kind::Call;
    double strike = 0.0;                            // Call, Put
    std::vector<double> coeffs;                     // Linear
    double constant = 0.0;                          // Linear
    std::vector<std::pair<Point, double>> table;    // Table

    /// Builds g for an asset count; call/put need one asset.
    [[nodiscard]] Payoff to_payoff(std::size_t dim) const;

    friend bool operator==(const PayoffSpec&, const PayoffSpec&) = default;
};

struct AtomSpec {
    Point terminal;
    std::optional<std::string> label;
    std::optional<double> claim;

    friend bool operator==(const AtomSpec&, const AtomSpec&) = default;
};

struct OnePeriodModel {
    std::size_t d = 0;
    Point y;
    std::vector<AtomSpec> atoms;
    std::vector<std::vector<double>> priors;
    std::optional<PayoffSpec> payoff;

    [[nodiscard]] OnePeriodMarket market(bool normalize = false) const;
    /// The payoff if given, else the per-atom claim values if every atom
    /// has one, else empty.
    [[nodiscard]] std::optional<Claim> claim() const;

    friend bool operator==(const OnePeriodModel&, const OnePeriodModel&) = default;
};

struct NodeSpec {
    int id = 0;
    int depth = 0;
    Point price;
    std::vector<int> children;
    std::vector<std::vector<double>> child_priors;

    friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct TreeModel {
    std::size_t d = 0;
    int horizon = 0;
    std::vector<NodeSpec> nodes;
    std::optional<std::map<int, double>> terminal_payoff;
    std::optional<PayoffSpec> payoff;

    [[nodiscard]] ScenarioTree tree(bool normalize = false) const;
    /// Explicit terminal map if given, else the payoff applied to leaf prices.
    [[nodiscard]] std::optional<std::map<int, double>> terminal_values() const;

    friend bool operator==(const TreeModel&, const TreeModel&) = default;
};

using Model = std::variant<OnePeriodModel, TreeModel>;

/// Parses a model document; throws Error(ParseError) on malformed input.
Model parse_model(std::string_view text);

/// Parses a standalone payoff object such as {"type":"call","strike":100}.
PayoffSpec parse_payoff(std::string_view text);

/// Canonical JSON text of the model; parse_model(serialize_model(m)) == m.
std::string serialize_model(const Model& model);

}  // namespace qsh::io

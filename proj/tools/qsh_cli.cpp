// qsh: command-line front end for quasi-sure pricing and arbitrage checks.
//
//   qsh support <model.json>
//   qsh price   <model.json> [--payoff JSON]
//   qsh check   <model.json>
//   qsh hedge   <tree.json>  [--payoff JSON]
//
// Exit codes: 0 success / NA, 2 parse or input error, 3 instantaneous profit
// or global AIP failure, 4 AIP holds but NA fails, 5 internal invariant
// breach (including oracle disagreement).

#include "qsh/arbitrage.hpp"
#include "qsh/errors.hpp"
#include "qsh/grid_oracle.hpp"
#include "qsh/model_io.hpp"
#include "qsh/multiperiod.hpp"
#include "qsh/pricing.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

namespace {

using namespace qsh;

enum ExitCode : int {
    kOk = 0,
    kParseError = 2,
    kProfit = 3,
    kAipOnly = 4,
    kInternal = 5,
};

constexpr double kOracleTolerance = 1e-6;
constexpr double kRouteTolerance = 1e-7;

struct Settings {
    std::string command;
    std::string input = "-";
    std::string payoff;
    double tolerance = lp::kDefaultTolerance;
    bool oracle = false;
    bool normalize = false;
    bool parallel = false;

    [[nodiscard]] lp::Options lp() const { return lp::Options{tolerance}; }
};

class OracleFailure : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string point(const Point& p) {
    if (p.dim() == 1) return num(p[0]);
    std::string s = "(";
    for (std::size_t k = 0; k < p.dim(); ++k) s += (k ? ", " : "") + num(p[k]);
    return s + ")";
}

std::string list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return s + "]";
}

std::string list(const SupportSet& set) {
    std::string s = "[";
    for (std::size_t i = 0; i < set.size(); ++i) s += (i ? ", " : "") + point(set[i]);
    return s + "]";
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const io::OnePeriodModel& require_one_period(const io::Model& model, const char* command) {
    const auto* m = std::get_if<io::OnePeriodModel>(&model);
    if (!m) throw Error(ErrorCode::ParseError, std::string(command) + " needs a one_period model");
    return *m;
}

const io::TreeModel& require_tree(const io::Model& model, const char* command) {
    const auto* m = std::get_if<io::TreeModel>(&model);
    if (!m) throw Error(ErrorCode::ParseError, std::string(command) + " needs a tree model");
    return *m;
}

void print_ip(std::ostream& out, const IpCertificate& ip) {
    out << "IP certificate theta = " << point(ip.theta) << ", epsilon = " << num(ip.epsilon)
        << "\n";
}

int cmd_support(const io::Model& model, const Settings& s, std::ostream& out) {
    const auto& m = require_one_period(model, "support");
    const auto market = m.market(s.normalize);
    std::vector<double> polar;
    for (std::size_t j : polar_atoms(market.priors())) polar.push_back(static_cast<double>(j));
    out << "supp Y = " << list(market.support()) << "\n";
    out << "supp dY = " << list(market.increment_support()) << "\n";
    out << "polar atoms: " << list(polar) << "\n";
    return kOk;
}

void price_oracle(const OnePeriodMarket& market, const Claim& claim, const PriceResult& r,
                  std::ostream& out) {
    if (r.status == PriceStatus::InstantaneousProfit) return;
    if (market.dim() > 3) {
        out << "oracle: skipped (more than 3 assets)\n";
        return;
    }
    std::vector<geometry::MinimaxRow> rows;
    const auto z = [&](std::size_t j) {
        if (const auto* pa = std::get_if<PerAtomClaim>(&claim)) return pa->values[j];
        return *std::get<Payoff>(claim)(market.terminal().values[j]);
    };
    for (std::size_t j : market.relevant()) {
        rows.push_back({z(j), market.initial() - market.terminal().values[j]});
    }
    const double radius = linf_norm(*r.theta_hat) + 1.0;
    const auto grid = oracle::box_vertex_minimax(rows, market.dim(), radius);
    const double gap = std::abs(grid.value - r.price);
    out << "oracle vertex minimum = " << num(grid.value) << "\n";
    out << "oracle discrepancy = " << num(gap) << "\n";
    if (gap > kOracleTolerance) throw OracleFailure("vertex oracle disagrees with the LP price");
}

int cmd_price(const io::Model& model, const Settings& s, std::ostream& out) {
    const auto& m = require_one_period(model, "price");
    const auto market = m.market(s.normalize);
    std::optional<Claim> claim;
    std::optional<Payoff> payoff;
    if (!s.payoff.empty()) {
        payoff = io::parse_payoff(s.payoff).to_payoff(m.d);
        claim = Claim{*payoff};
    } else {
        claim = m.claim();
        if (m.payoff) payoff = m.payoff->to_payoff(m.d);
    }
    if (!claim) {
        throw Error(ErrorCode::ClaimMismatch, "no payoff and no per-atom claim values in the model");
    }

    const auto r = superhedge_price(market, *claim, s.lp());
    const std::optional<double> bicon =
        payoff ? std::optional<double>(price_via_biconjugate(market, *payoff, s.lp())) : std::nullopt;

    if (r.status == PriceStatus::InstantaneousProfit) {
        out << "INSTANTANEOUS PROFIT\n";
        out << "price = -inf\n";
        out << "closedness = " << to_string(r.closedness) << "\n";
        const auto aip = check_aip(market, s.lp());
        if (!aip.ip) throw Error(ErrorCode::InternalInvariant, "unbounded price without IP certificate");
        print_ip(out, *aip.ip);
        if (bicon) out << "biconjugate price = " << num(*bicon) << "\n";
        if (bicon && !std::isinf(*bicon)) {
            throw Error(ErrorCode::InternalInvariant, "biconjugate route is finite under IP");
        }
        return kProfit;
    }

    out << "price = " << num(r.price) << "\n";
    out << "theta = " << point(*r.theta_hat) << "\n";
    out << "closedness = " << to_string(r.closedness) << "\n";
    out << "hedge unique = " << (r.hedge_non_unique ? "false" : "true") << "\n";
    out << "certificate slack = [";
    for (std::size_t i = 0; i < r.atoms.size(); ++i) {
        out << (i ? ", " : "") << "atom " << r.atoms[i] << ": " << num(r.certificate_slack[i]);
    }
    out << "]\n";
    if (bicon) {
        const double gap = std::abs(*bicon - r.price);
        out << "biconjugate price = " << num(*bicon) << "\n";
        out << "route discrepancy = " << num(gap) << "\n";
        if (!(gap <= kRouteTolerance)) {
            throw Error(ErrorCode::InternalInvariant, "pricing routes disagree");
        }
    } else {
        out << "biconjugate price = n/a (claim is not a function of Y)\n";
    }
    if (s.oracle) price_oracle(market, *claim, r, out);
    return kOk;
}

int check_one_period(const io::OnePeriodModel& m, const Settings& s, std::ostream& out) {
    const auto market = m.market(s.normalize);
    const auto report = arbitrage_report(market, s.lp());
    const auto cls = report.classification();
    out << "classification = " << to_string(cls) << "\n";
    switch (cls) {
        case MarketClass::NA:
            out << "NA holds (hence AIP)\n";
            out << "NA certificate weights = " << list(*report.na_certificate) << " on supp dY = "
                << list(report.increments) << "\n";
            break;
        case MarketClass::AipOnly:
            out << "AIP holds; NA fails at vertex certificate h = " << point(*report.na_violation)
                << "\n";
            out << "AIP certificate weights = " << list(*report.aip_certificate)
                << " on supp dY = " << list(report.increments) << "\n";
            break;
        case MarketClass::IP:
            out << "INSTANTANEOUS PROFIT\n";
            print_ip(out, *report.ip_certificate);
            break;
    }
    if (s.oracle) {
        const auto zero = superhedge_price(market, PerAtomClaim{std::vector<double>(market.atom_count(), 0.0)},
                                           s.lp());
        const bool priced_zero = zero.status == PriceStatus::Finite && std::abs(zero.price) <= 1e-9;
        out << "oracle pi(0) = " << num(zero.price) << "\n";
        if (priced_zero != report.aip) throw OracleFailure("pi(0) disagrees with the AIP verdict");
        if (market.dim() == 1) {
            const bool interval = interval_rule_1d(market);
            out << "oracle interval rule = " << (interval ? "true" : "false") << "\n";
            if (interval != report.aip) throw OracleFailure("interval rule disagrees with AIP");
        }
    }
    if (cls == MarketClass::NA) return kOk;
    return cls == MarketClass::AipOnly ? kAipOnly : kProfit;
}

int check_tree(const io::TreeModel& m, const Settings& s, std::ostream& out) {
    const auto tree = m.tree(s.normalize);
    const auto report = global_aip(tree, TreeOptions{s.lp(), s.parallel});
    out << "global AIP = " << (report.global_aip ? "true" : "false") << "\n";
    out << "global NA = " << (report.global_na ? "true" : "false") << "\n";
    out << "failing nodes: [";
    for (std::size_t i = 0; i < report.failing_nodes.size(); ++i) {
        const auto& f = report.failing_nodes[i];
        out << (i ? ", " : "") << f.node << " " << to_string(f.verdict);
    }
    out << "]\n";
    for (const auto& [id, r] : report.node_reports) {
        out << "node " << id << ": " << to_string(r.classification());
        if (r.ip_certificate) {
            out << ", theta = " << point(r.ip_certificate->theta)
                << ", epsilon = " << num(r.ip_certificate->epsilon);
        } else if (r.na_violation) {
            out << ", h = " << point(*r.na_violation);
        }
        out << "\n";
    }
    if (s.oracle) {
        const auto search = brute_force_global_ip(tree, 1.0, 1.0);
        out << "oracle grid IP found = " << (search.found ? "true" : "false") << "\n";
        if (search.found && report.global_aip) {
            throw OracleFailure("grid oracle found an IP under global AIP");
        }
    }
    if (!report.global_aip) return kProfit;
    return report.global_na ? kOk : kAipOnly;
}

int cmd_check(const io::Model& model, const Settings& s, std::ostream& out) {
    if (const auto* m = std::get_if<io::OnePeriodModel>(&model)) return check_one_period(*m, s, out);
    return check_tree(std::get<io::TreeModel>(model), s, out);
}

int cmd_hedge(const io::Model& model, const Settings& s, std::ostream& out) {
    auto m = require_tree(model, "hedge");
    if (!s.payoff.empty()) {
        m.terminal_payoff.reset();
        m.payoff = io::parse_payoff(s.payoff);
    }
    const auto tree = m.tree(s.normalize);
    const auto terminal = m.terminal_values();
    if (!terminal) throw Error(ErrorCode::MissingPayoff, "tree model has no terminal payoff");

    std::map<int, NodeHedge> hedges;
    try {
        hedges = backward_superhedge(tree, *terminal, TreeOptions{s.lp(), s.parallel});
    } catch (const Error& e) {
        if (e.code() != ErrorCode::GlobalIPDetected) throw;
        out << "GLOBAL INSTANTANEOUS PROFIT at node " << e.node().value_or(-1) << "\n";
        return kProfit;
    }

    for (int depth = tree.horizon; depth >= 0; --depth) {
        for (const auto& [id, h] : hedges) {
            const TreeNode& n = tree.node(id);
            if (n.depth != depth) continue;
            out << "depth " << depth << " node " << id << ": ";
            if (!h.reachable) {
                out << "unreachable (unconstrained)\n";
                continue;
            }
            out << "value = " << num(*h.value);
            if (h.theta) out << ", theta = " << point(*h.theta);
            out << "\n";
            if (s.oracle && h.theta) {
                std::vector<geometry::MinimaxRow> rows;
                for (std::size_t j : relevant_atoms(*n.child_priors)) {
                    const int c = n.children[j];
                    rows.push_back({*hedges.at(c).value, n.price - tree.node(c).price});
                }
                const auto grid =
                    oracle::box_vertex_minimax(rows, tree.dim(), linf_norm(*h.theta) + 1.0);
                if (std::abs(grid.value - *h.value) > kOracleTolerance) {
                    throw OracleFailure("vertex oracle disagrees at node " + std::to_string(id));
                }
            }
        }
    }
    out << "root cost = " << num(*hedges.at(tree.root()).value) << "\n";
    if (s.oracle) out << "oracle: per-node vertex checks passed\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-sure superhedging prices and arbitrage checks"};
    app.require_subcommand(1);
    Settings s;
    app.add_option("--tolerance", s.tolerance, "LP feasibility/optimality tolerance")
        ->check(CLI::PositiveNumber);
    app.add_flag("--oracle", s.oracle, "Run grid/enumeration cross-checks");
    app.add_flag("--normalize", s.normalize, "Normalize prior weights");
    app.add_flag("--parallel", s.parallel, "Run per-node tree work concurrently");

    struct Sub {
        const char* name;
        const char* help;
        bool takes_payoff;
    };
    for (const Sub& sub : {Sub{"support", "Quasi-sure supports and polar atoms", false},
                           Sub{"price", "Superhedging price by both routes", true},
                           Sub{"check", "AIP / NA classification", false},
                           Sub{"hedge", "Backward superhedging on a tree", true}}) {
        auto* cmd = app.add_subcommand(sub.name, sub.help)->fallthrough();
        cmd->add_option("model", s.input, "Model file, or - for standard input");
        if (sub.takes_payoff) {
            cmd->add_option("--payoff", s.payoff, "Payoff JSON overriding the model");
        }
        cmd->callback([&s, name = std::string(sub.name)] { s.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kParseError;
    }

    std::ostringstream out;
    int rc = kOk;
    try {
        const auto model = io::parse_model(read_input(s.input));
        if (s.command == "support") rc = cmd_support(model, s, out);
        if (s.command == "price") rc = cmd_price(model, s, out);
        if (s.command == "check") rc = cmd_check(model, s, out);
        if (s.command == "hedge") rc = cmd_hedge(model, s, out);
    } catch (const OracleFailure& e) {
        std::cout << out.str();
        std::cerr << "oracle failure: " << e.what() << "\n";
        return kInternal;
    } catch (const Error& e) {
        std::cout << out.str();
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::InternalInvariant ? kInternal : kParseError;
    } catch (const std::exception& e) {
        std::cout << out.str();
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    std::cout << out.str();
    return rc;
}

#include "qsh/model_io.hpp"

#include "qsh/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace qsh::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where + ": missing \"" + key + "\"");
    return *it;
}

double read_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where + ": number is not finite");
    return x;
}

int read_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where + ": expected an integer");
    return v.get<int>();
}

// Accepts a number (one asset) or an array of numbers.
Point read_point(const json& v, std::size_t dim, const std::string& where) {
    std::vector<double> coords;
    if (v.is_number()) {
        coords.push_back(read_number(v, where));
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            coords.push_back(read_number(v[i], where + "[" + std::to_string(i) + "]"));
        }
    } else {
        fail(where + ": expected a number or an array");
    }
    if (coords.size() != dim) {
        fail(where + ": expected " + std::to_string(dim) + " coordinates, got " +
             std::to_string(coords.size()));
    }
    return Point(std::move(coords));
}

std::vector<double> read_weights(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where + ": expected an array of weights");
    std::vector<double> w;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = read_number(v[i], where + "[" + std::to_string(i) + "]");
        if (x < 0.0) fail(where + ": negative weight");
        w.push_back(x);
    }
    return w;
}

std::vector<std::vector<double>> read_prior_list(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) fail(where + ": expected a non-empty list of priors");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(read_weights(v[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

PayoffSpec read_payoff(const json& v, std::size_t dim) {
    const std::string where = "payoff";
    if (!v.is_object()) fail(where + ": expected an object");
    const auto& type = require(v, "type", where);
    if (!type.is_string()) fail(where + ": \"type\" must be a string");
    const auto t = type.get<std::string>();
    PayoffSpec spec;
    if (t == "call" || t == "put") {
        spec.kind = t == "call" ? PayoffSpec::Kind::Call : PayoffSpec::Kind::Put;
        spec.strike = read_number(require(v, "strike", where), where + ".strike");
        if (spec.strike < 0.0) fail(where + ": strike must be nonnegative");
    } else if (t == "linear") {
        spec.kind = PayoffSpec::Kind::Linear;
        const auto& c = require(v, "coeffs", where);
        if (!c.is_array()) fail(where + ".coeffs: expected an array");
        for (const auto& x : c) spec.coeffs.push_back(read_number(x, where + ".coeffs"));
        if (dim != 0 && spec.coeffs.size() != dim) fail(where + ".coeffs: wrong length");
        if (v.contains("constant")) spec.constant = read_number(v["constant"], where + ".constant");
    } else if (t == "table") {
        spec.kind = PayoffSpec::Kind::Table;
        const auto& entries = require(v, "entries", where);
        if (!entries.is_array()) fail(where + ".entries: expected an array");
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const std::string w = where + ".entries[" + std::to_string(i) + "]";
            const auto& p = require(entries[i], "point", w);
            const std::size_t pd = dim != 0 ? dim : (p.is_array() ? p.size() : 1);
            spec.table.emplace_back(read_point(p, pd, w + ".point"),
                                    read_number(require(entries[i], "value", w), w + ".value"));
        }
    } else {
        fail(where + ": unknown type \"" + t + "\"");
    }
    return spec;
}

json write_point(const Point& p) {
    json a = json::array();
    for (double c : p.coords()) a.push_back(c);
    return a;
}

json write_payoff(const PayoffSpec& spec) {
    json j;
    switch (spec.kind) {
        case PayoffSpec::Kind::Call:
        case PayoffSpec::Kind::Put:
            j["type"] = spec.kind == PayoffSpec::Kind::Call ? "call" : "put";
            j["strike"] = spec.strike;
            break;
        case PayoffSpec::Kind::Linear:
            j["type"] = "linear";
            j["coeffs"] = spec.coeffs;
            j["constant"] = spec.constant;
            break;
        case PayoffSpec::Kind::Table: {
            j["type"] = "table";
            json entries = json::array();
            for (const auto& [p, v] : spec.table) {
                entries.push_back({{"point", write_point(p)}, {"value", v}});
            }
            j["entries"] = std::move(entries);
            break;
        }
    }
    return j;
}

PriorFamily make_family(const std::vector<std::vector<double>>& priors, bool normalize,
                        const std::string& where) {
    std::vector<DiscreteMeasure> measures;
    for (const auto& w : priors) {
        if (!normalize) {
            for (double x : w) {
                if (x > 1.0 + kMassTolerance) fail(where + ": weight above 1");
            }
        }
        try {
            measures.push_back(normalize ? DiscreteMeasure::normalized(w) : DiscreteMeasure(w));
        } catch (const Error& e) {
            fail(where + ": " + e.what());
        }
    }
    return PriorFamily(std::move(measures));
}

OnePeriodModel read_one_period(const json& doc) {
    OnePeriodModel m;
    const int d = read_int(require(doc, "d", "model"), "d");
    if (d < 1) fail("d: must be at least 1");
    m.d = static_cast<std::size_t>(d);
    m.y = read_point(require(doc, "y", "model"), m.d, "y");
    const auto& atoms = require(doc, "atoms", "model");
    if (!atoms.is_array() || atoms.empty()) fail("atoms: expected a non-empty array");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const std::string w = "atoms[" + std::to_string(i) + "]";
        if (!atoms[i].is_object()) fail(w + ": expected an object");
        AtomSpec a;
        a.terminal = read_point(require(atoms[i], "Y", w), m.d, w + ".Y");
        if (atoms[i].contains("label")) {
            if (!atoms[i]["label"].is_string()) fail(w + ".label: expected a string");
            a.label = atoms[i]["label"].get<std::string>();
        }
        if (atoms[i].contains("claim")) a.claim = read_number(atoms[i]["claim"], w + ".claim");
        m.atoms.push_back(std::move(a));
    }
    m.priors = read_prior_list(require(doc, "priors", "model"), "priors");
    for (const auto& p : m.priors) {
        if (p.size() != m.atoms.size()) fail("priors: weight count differs from atom count");
    }
    if (doc.contains("payoff")) m.payoff = read_payoff(doc["payoff"], m.d);
    return m;
}

TreeModel read_tree(const json& doc) {
    TreeModel m;
    const int d = read_int(require(doc, "d", "model"), "d");
    if (d < 1) fail("d: must be at least 1");
    m.d = static_cast<std::size_t>(d);
    m.horizon = read_int(require(doc, "horizon", "model"), "horizon");
    const auto& nodes = require(doc, "nodes", "model");
    if (!nodes.is_array() || nodes.empty()) fail("nodes: expected a non-empty array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string w = "nodes[" + std::to_string(i) + "]";
        const auto& n = nodes[i];
        if (!n.is_object()) fail(w + ": expected an object");
        NodeSpec s;
        s.id = read_int(require(n, "id", w), w + ".id");
        s.depth = read_int(require(n, "depth", w), w + ".depth");
        s.price = read_point(require(n, "price", w), m.d, w + ".price");
        if (n.contains("children")) {
            if (!n["children"].is_array()) fail(w + ".children: expected an array");
            for (const auto& c : n["children"]) s.children.push_back(read_int(c, w + ".children"));
        }
        if (n.contains("child_priors")) {
            s.child_priors = read_prior_list(n["child_priors"], w + ".child_priors");
        }
        m.nodes.push_back(std::move(s));
    }
    if (doc.contains("terminal_payoff")) {
        const auto& tp = doc["terminal_payoff"];
        if (!tp.is_object()) fail("terminal_payoff: expected an object keyed by leaf id");
        std::map<int, double> values;
        for (const auto& [key, val] : tp.items()) {
            int id = 0;
            try {
                std::size_t used = 0;
                id = std::stoi(key, &used);
                if (used != key.size()) fail("terminal_payoff: bad key \"" + key + "\"");
            } catch (const std::logic_error&) {
                fail("terminal_payoff: bad key \"" + key + "\"");
            }
            values[id] = read_number(val, "terminal_payoff." + key);
        }
        m.terminal_payoff = std::move(values);
    }
    if (doc.contains("payoff")) m.payoff = read_payoff(doc["payoff"], m.d);
    return m;
}

}  // namespace

Payoff PayoffSpec::to_payoff(std::size_t dim) const {
    switch (kind) {
        case Kind::Call:
        case Kind::Put: {
            if (dim != 1) {
                throw Error(ErrorCode::ClaimMismatch, "call and put payoffs need one asset");
            }
            const double k = strike;
            const bool call = kind == Kind::Call;
            return [k, call](const Point& z) -> std::optional<double> {
                return call ? std::max(z[0] - k, 0.0) : std::max(k - z[0], 0.0);
            };
        }
        case Kind::Linear: {
            if (coeffs.size() != dim) {
                throw Error(ErrorCode::ClaimMismatch, "linear payoff has the wrong length");
            }
            return [c = Point(coeffs), b = constant](const Point& z) -> std::optional<double> {
                return b + dot(c, z);
            };
        }
        case Kind::Table:
            return PayoffTable(table).as_payoff();
    }
    throw Error(ErrorCode::InternalInvariant, "unknown payoff kind");
}

OnePeriodMarket OnePeriodModel::market(bool normalize) const {
    RandomVariable terminal;
    for (const auto& a : atoms) terminal.values.push_back(a.terminal);
    return OnePeriodMarket(y, std::move(terminal), make_family(priors, normalize, "priors"));
}

std::optional<Claim> OnePeriodModel::claim() const {
    if (payoff) return Claim{payoff->to_payoff(d)};
    if (std::all_of(atoms.begin(), atoms.end(), [](const AtomSpec& a) { return a.claim.has_value(); })) {
        PerAtomClaim c;
        for (const auto& a : atoms) c.values.push_back(*a.claim);
        return Claim{std::move(c)};
    }
    return std::nullopt;
}

ScenarioTree TreeModel::tree(bool normalize) const {
    ScenarioTree t;
    t.horizon = horizon;
    for (const auto& s : nodes) {
        TreeNode n;
        n.id = s.id;
        n.depth = s.depth;
        n.price = s.price;
        n.children = s.children;
        if (!s.child_priors.empty()) {
            for (const auto& w : s.child_priors) {
                if (w.size() != s.children.size()) {
                    throw Error(ErrorCode::PriorArityMismatch,
                                std::to_string(w.size()) + " weights over " +
                                    std::to_string(s.children.size()) + " children",
                                s.id);
                }
            }
            n.child_priors = make_family(s.child_priors, normalize,
                                         "node " + std::to_string(s.id) + " child_priors");
        }
        t.add(std::move(n));
    }
    validate_tree(t);
    return t;
}

std::optional<std::map<int, double>> TreeModel::terminal_values() const {
    if (terminal_payoff) return terminal_payoff;
    if (!payoff) return std::nullopt;
    const Payoff g = payoff->to_payoff(d);
    std::map<int, double> out;
    for (const auto& s : nodes) {
        if (!s.children.empty()) continue;
        const auto v = g(s.price);
        if (!v) throw Error(ErrorCode::MissingPayoff, "payoff undefined at leaf price", s.id);
        out[s.id] = *v;
    }
    return out;
}

Model parse_model(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("model: expected a JSON object");
    const int schema = read_int(require(doc, "schema", "model"), "schema");
    if (schema != kSchemaVersion) fail("schema: unsupported version " + std::to_string(schema));
    const auto& kind = require(doc, "kind", "model");
    if (!kind.is_string()) fail("kind: expected a string");
    const auto k = kind.get<std::string>();
    try {
        if (k == "one_period") return read_one_period(doc);
        if (k == "tree") return read_tree(doc);
    } catch (const json::exception& e) {
        fail(std::string("invalid model: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        fail(e.what());
    }
    fail("kind: unknown model kind \"" + k + "\"");
}

PayoffSpec parse_payoff(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("malformed payoff JSON: ") + e.what());
    }
    return read_payoff(doc, 0);
}

std::string serialize_model(const Model& model) {
    json doc;
    doc["schema"] = kSchemaVersion;
    if (const auto* m = std::get_if<OnePeriodModel>(&model)) {
        doc["kind"] = "one_period";
        doc["d"] = m->d;
        doc["y"] = write_point(m->y);
        json atoms = json::array();
        for (const auto& a : m->atoms) {
            json j;
            j["Y"] = write_point(a.terminal);
            if (a.label) j["label"] = *a.label;
            if (a.claim) j["claim"] = *a.claim;
            atoms.push_back(std::move(j));
        }
        doc["atoms"] = std::move(atoms);
        doc["priors"] = m->priors;
        if (m->payoff) doc["payoff"] = write_payoff(*m->payoff);
    } else {
        const auto& t = std::get<TreeModel>(model);
        doc["kind"] = "tree";
        doc["d"] = t.d;
        doc["horizon"] = t.horizon;
        json nodes = json::array();
        for (const auto& s : t.nodes) {
            json j;
            j["id"] = s.id;
            j["depth"] = s.depth;
            j["price"] = write_point(s.price);
            if (!s.children.empty()) j["children"] = s.children;
            if (!s.child_priors.empty()) j["child_priors"] = s.child_priors;
            nodes.push_back(std::move(j));
        }
        doc["nodes"] = std::move(nodes);
        if (t.terminal_payoff) {
            json tp = json::object();
            for (const auto& [id, v] : *t.terminal_payoff) tp[std::to_string(id)] = v;
            doc["terminal_payoff"] = std::move(tp);
        }
        if (t.payoff) doc["payoff"] = write_payoff(*t.payoff);
    }
    return doc.dump(2);
}

}  // namespace qsh::io

#pragma once

// Parameter sweeps over Monte Carlo QRAM runs, with CSV and JSON output.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qramsim/qram_model.hpp"

namespace qramsim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int csv_schema_version = 1;
inline constexpr std::size_t default_grid_cap = 10000;

struct SweepConfig {
    Protocol protocol = Protocol::td;
    std::vector<int> layers;
    std::vector<double> eta;
    std::optional<std::vector<double>> p_link;  // bound to eta when absent
    std::vector<double> T1_e;
    std::vector<double> T2_e;
    std::vector<double> cnot_error;               // p_e = p_n
    std::optional<std::vector<double>> p_e, p_n;  // split rates, replaces cnot_error
    PlacementKind placement_kind = PlacementKind::random;
    std::vector<double> placement_param{0.0};
    int n_sims = 100;
    std::uint64_t base_seed = 1;
    bool extend_with_qc_link = true;
    std::string output_path;
};

struct GridPoint {
    int layers = 2;
    double eta = 1.0;
    double p_link = 1.0;
    double T1_e = 2.0;
    double T2_e = 0.1;
    double p_e = 0.0;
    double p_n = 0.0;
    double placement_param = 0.0;
};

namespace detail {

template <class T>
std::vector<T> nonempty_list(const nlohmann::json& j, const char* key) {
    if (!j.is_array()) throw ConfigError(std::string("'") + key + "' must be a list");
    if (j.empty()) throw ConfigError(std::string("'") + key + "' must not be empty");
    try {
        return j.get<std::vector<T>>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("'") + key + "' has elements of the wrong type");
    }
}

template <class T>
T scalar(const nlohmann::json& j, const char* key) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("'") + key + "' has the wrong type");
    }
}

inline void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) throw ConfigError(std::string("unknown key '") + it.key() + "' in " + where);
    }
}

inline const nlohmann::json& need(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
    return j.at(key);
}

}  // namespace detail

inline void validate(const SweepConfig& c) {
    if (c.layers.empty() || c.eta.empty() || c.T1_e.empty() || c.T2_e.empty() || c.placement_param.empty()) {
        throw ConfigError("every parameter list must be non-empty");
    }
    for (int L : c.layers)
        if (L < 1 || L > 12) throw ConfigError("layers must lie in 1..12, got " + std::to_string(L));
    for (double x : c.eta)
        if (!(x > 0.0 && x <= 1.0)) throw ConfigError("eta must lie in (0, 1]");
    if (c.p_link) {
        if (c.p_link->empty()) throw ConfigError("'p_link' must not be empty");
        for (double x : *c.p_link)
            if (!(x > 0.0 && x <= 1.0)) throw ConfigError("p_link must lie in (0, 1]");
    }
    for (double x : c.T1_e)
        if (!(x > 0.0)) throw ConfigError("T1_e must be > 0");
    for (double x : c.T2_e)
        if (!(x > 0.0)) throw ConfigError("T2_e must be > 0");
    const bool split = c.p_e.has_value() || c.p_n.has_value();
    if (split) {
        if (!c.p_e || !c.p_n) throw ConfigError("'p_e' and 'p_n' must be given together");
        if (!c.cnot_error.empty()) throw ConfigError("give either 'cnot_error' or 'p_e'/'p_n', not both");
        if (c.p_e->empty() || c.p_n->empty()) throw ConfigError("'p_e' and 'p_n' must not be empty");
    } else if (c.cnot_error.empty()) {
        throw ConfigError("missing key 'cnot_error'");
    }
    auto check_p = [](const std::vector<double>& v, const char* what) {
        for (double x : v)
            if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(std::string(what) + " must lie in [0, 1]");
    };
    check_p(c.cnot_error, "cnot_error");
    if (c.p_e) check_p(*c.p_e, "p_e");
    if (c.p_n) check_p(*c.p_n, "p_n");
    for (double x : c.placement_param) {
        try {
            PlacementStrategy{c.placement_kind, x}.validate();
        } catch (const InvalidParameter& e) {
            throw ConfigError(std::string("placement: ") + e.what());
        }
    }
    if (c.n_sims < 2) throw ConfigError("n_sims must be >= 2");
}

inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
    using detail::need;
    detail::check_keys(j,
                       {"protocol", "layers", "eta", "p_link", "T1_e", "T2_e", "cnot_error", "p_e", "p_n", "placement",
                        "n_sims", "base_seed", "extend_with_qc_link", "output_path"},
                       "config");
    SweepConfig c;
    const auto proto = detail::scalar<std::string>(need(j, "protocol"), "protocol");
    if (proto == "td") {
        c.protocol = Protocol::td;
    } else if (proto == "ts") {
        c.protocol = Protocol::ts;
    } else {
        throw ConfigError("protocol must be 'td' or 'ts', got '" + proto + "'");
    }
    c.layers = detail::nonempty_list<int>(need(j, "layers"), "layers");
    c.eta = detail::nonempty_list<double>(need(j, "eta"), "eta");
    if (j.contains("p_link")) c.p_link = detail::nonempty_list<double>(j.at("p_link"), "p_link");
    c.T1_e = detail::nonempty_list<double>(need(j, "T1_e"), "T1_e");
    c.T2_e = detail::nonempty_list<double>(need(j, "T2_e"), "T2_e");
    if (j.contains("cnot_error")) c.cnot_error = detail::nonempty_list<double>(j.at("cnot_error"), "cnot_error");
    if (j.contains("p_e")) c.p_e = detail::nonempty_list<double>(j.at("p_e"), "p_e");
    if (j.contains("p_n")) c.p_n = detail::nonempty_list<double>(j.at("p_n"), "p_n");
    if (j.contains("placement")) {
        const auto& pl = j.at("placement");
        detail::check_keys(pl, {"kind", "param"}, "placement");
        const auto kind = detail::scalar<std::string>(need(pl, "kind"), "placement.kind");
        if (kind == "random") {
            c.placement_kind = PlacementKind::random;
        } else if (kind == "top_layers") {
            c.placement_kind = PlacementKind::top_layers;
        } else {
            throw ConfigError("placement.kind must be 'random' or 'top_layers', got '" + kind + "'");
        }
        c.placement_param = detail::nonempty_list<double>(need(pl, "param"), "placement.param");
    } else if (c.protocol == Protocol::ts) {
        throw ConfigError("missing key 'placement' (required for ts)");
    }
    if (j.contains("n_sims")) c.n_sims = detail::scalar<int>(j.at("n_sims"), "n_sims");
    if (j.contains("base_seed")) c.base_seed = detail::scalar<std::uint64_t>(j.at("base_seed"), "base_seed");
    if (j.contains("extend_with_qc_link"))
        c.extend_with_qc_link = detail::scalar<bool>(j.at("extend_with_qc_link"), "extend_with_qc_link");
    if (j.contains("output_path")) c.output_path = detail::scalar<std::string>(j.at("output_path"), "output_path");
    validate(c);
    return c;
}

inline SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return sweep_config_from_json(j);
}

inline std::size_t grid_size(const SweepConfig& c) {
    const std::size_t rates = c.p_e ? c.p_e->size() * c.p_n->size() : c.cnot_error.size();
    const std::size_t links = c.p_link ? c.p_link->size() : 1;
    return c.layers.size() * c.eta.size() * links * c.T1_e.size() * c.T2_e.size() * rates * c.placement_param.size();
}

/// Grid in fixed order; layers vary fastest.
inline std::vector<GridPoint> expand_grid(const SweepConfig& c, std::size_t cap = default_grid_cap) {
    validate(c);
    const std::size_t n = grid_size(c);
    if (n > cap) throw ConfigError("grid has " + std::to_string(n) + " points, cap is " + std::to_string(cap));
    std::vector<std::pair<double, double>> rates;
    if (c.p_e) {
        for (double a : *c.p_e)
            for (double b : *c.p_n) rates.emplace_back(a, b);
    } else {
        for (double x : c.cnot_error) rates.emplace_back(x, x);
    }
    std::vector<GridPoint> out;
    out.reserve(n);
    for (double t1 : c.T1_e)
        for (double t2 : c.T2_e)
            for (const auto& [pe, pn] : rates)
                for (double param : c.placement_param)
                    for (double eta : c.eta) {
                        const std::vector<double> links = c.p_link ? *c.p_link : std::vector<double>{eta};
                        for (double pl : links)
                            for (int L : c.layers) out.push_back({L, eta, pl, t1, t2, pe, pn, param});
                    }
    return out;
}

inline RunConfig run_config_of(const SweepConfig& c, const GridPoint& g) {
    RunConfig r;
    r.protocol = c.protocol;
    r.n_layers = g.layers;
    r.params = NoiseParams::from_electron_times(g.T1_e, g.T2_e, g.p_e, g.p_n, g.eta);
    r.params.p_link = g.p_link;
    r.placement = {c.placement_kind, g.placement_param};
    r.options.extend_with_qc_link = c.extend_with_qc_link;
    return r;
}

struct SweepRow {
    GridPoint point;
    MonteCarloSummary summary;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepRow> rows;
};

inline SweepResult run_sweep(const SweepConfig& c, int workers = 1, std::size_t cap = default_grid_cap) {
    SweepResult r;
    r.config = c;
    for (const auto& g : expand_grid(c, cap)) {
        auto s = monte_carlo(run_config_of(c, g), c.n_sims, c.base_seed, workers);
        s.samples.clear();
        r.rows.push_back({g, std::move(s)});
    }
    return r;
}

/// Shortest round-trip decimal form; identical bytes for identical doubles.
inline std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::string placement_name(PlacementKind k) { return k == PlacementKind::random ? "random" : "top_layers"; }

inline const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {
        "protocol",  "layers",    "eta",          "p_link",        "T1_e",
        "T2_e",      "p_e",       "p_n",          "placement",     "placement_param",
        "extend_with_qc_link",    "n_sims",       "base_seed",     "mean_fidelity",
        "stderr_fidelity",        "mean_query_time", "stderr_query_time", "mean_layer_fidelity"};
    return cols;
}

inline std::string to_csv(const SweepResult& r) {
    std::ostringstream os;
    os << "#schema=" << csv_schema_version << '\n';
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    const auto& c = r.config;
    for (const auto& row : r.rows) {
        const auto& g = row.point;
        const auto& s = row.summary;
        std::string layer_f;
        for (std::size_t k = 0; k < s.mean_layer_fidelity.size(); ++k) {
            if (k) layer_f += ';';
            layer_f += format_number(s.mean_layer_fidelity[k]);
        }
        os << to_string(c.protocol) << ',' << g.layers << ',' << format_number(g.eta) << ','
           << format_number(g.p_link) << ',' << format_number(g.T1_e) << ',' << format_number(g.T2_e) << ','
           << format_number(g.p_e) << ',' << format_number(g.p_n) << ',' << placement_name(c.placement_kind) << ','
           << format_number(g.placement_param) << ',' << (c.extend_with_qc_link ? 1 : 0) << ',' << s.n_sims << ','
           << s.base_seed << ',' << format_number(s.mean_fidelity) << ',' << format_number(s.stderr_fidelity) << ','
           << format_number(s.mean_query_time) << ',' << format_number(s.stderr_query_time) << ',' << layer_f << '\n';
    }
    return os.str();
}

inline nlohmann::json to_json(const SweepResult& r) {
    nlohmann::json rows = nlohmann::json::array();
    const auto& c = r.config;
    for (const auto& row : r.rows) {
        const auto& g = row.point;
        const auto& s = row.summary;
        rows.push_back({{"protocol", to_string(c.protocol)},
                        {"layers", g.layers},
                        {"eta", g.eta},
                        {"p_link", g.p_link},
                        {"T1_e", g.T1_e},
                        {"T2_e", g.T2_e},
                        {"p_e", g.p_e},
                        {"p_n", g.p_n},
                        {"placement", placement_name(c.placement_kind)},
                        {"placement_param", g.placement_param},
                        {"extend_with_qc_link", c.extend_with_qc_link},
                        {"n_sims", s.n_sims},
                        {"base_seed", s.base_seed},
                        {"mean_fidelity", s.mean_fidelity},
                        {"stderr_fidelity", s.stderr_fidelity},
                        {"mean_query_time", s.mean_query_time},
                        {"stderr_query_time", s.stderr_query_time},
                        {"mean_layer_fidelity", s.mean_layer_fidelity}});
    }
    return {{"schema", csv_schema_version}, {"rows", rows}};
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write '" + path + "'");
    out << text;
    out.flush();
    if (!out) throw OutputError("write to '" + path + "' failed");
}

}  // namespace qramsim

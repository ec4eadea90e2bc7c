#pragma once

// Machine-readable comparison of the closed forms against the dense oracle.

#include <algorithm>
#include <cmath>
#include <vector>

#include "json.hpp"
#include "qramsim/oracle.hpp"
#include "qramsim/validation.hpp"

namespace qramsim {

inline constexpr double transfer_tolerance = 1e-9;
inline constexpr double linking_gap_tolerance = 1e-2;
inline constexpr double linking_min_ratio = 3.5;

struct TransferGridResult {
    std::size_t cases = 0;
    double max_deviation = 0.0;
    bool pass() const { return max_deviation <= transfer_tolerance; }
};

inline double max_entry_deviation(const DenseState& a, const DenseState& b) {
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

/// Every (damping, dephasing) in {0, 0.01, 0.1} on all four qubits, p_e in {0, 0.01}.
inline TransferGridResult transfer_grid_check() {
    const double levels[3] = {0.0, 0.01, 0.1};
    TransferGridResult r;
    for (double pe : {0.0, 0.01}) {
        for (int code = 0; code < 6561; ++code) {
            int c = code;
            double e[8];
            for (double& x : e) {
                x = levels[c % 3];
                c /= 3;
            }
            TransferDecay d{e[0], e[1], e[2], e[3], e[4], e[5], e[6], e[7], pe};
            const DenseState oracle = run_transfer_block_oracle(d);
            const DenseState closed = pair_state(pair_after_transfer(d));
            r.max_deviation = std::max(r.max_deviation, max_entry_deviation(oracle, closed));
            ++r.cases;
        }
    }
    return r;
}

struct SignAdjudication {
    double mu_oracle = 0.0;
    double mu_printed = 0.0;
    double mu_consistent = 0.0;
    ElectronPairSign verdict() const {
        return std::abs(mu_consistent - mu_oracle) < std::abs(mu_printed - mu_oracle) ? ElectronPairSign::consistent
                                                                                      : ElectronPairSign::as_printed;
    }
};

inline SignAdjudication adjudicate_electron_pair_sign(double damping = 0.01) {
    ElectronPairDecay d;
    d.e1_L = d.e1_R = d.e1p_L = d.e1p_R = damping;
    SignAdjudication a;
    a.mu_oracle = pair_params_of(run_electron_pair_oracle(d)).mu;
    a.mu_printed = pair_electron_only(d, ElectronPairSign::as_printed).mu;
    a.mu_consistent = pair_electron_only(d, ElectronPairSign::consistent).mu;
    return a;
}

/// Corner factors measured on the oracle: noiseless pairs, one CNOT event.
inline CnotFactors oracle_cnot_factors(CnotEventKind kind, double p_e, double p_n) {
    const DenseState bell = DenseState::bell_phi_plus();
    LinkOracleOptions opt;
    opt.p_e = p_e;
    opt.p_n = p_n;
    DenseState s = kind == CnotEventKind::two_step_even_link
                       ? run_link_oracle({bell, bell, bell}, LinkMode::two_step, opt)
                       : run_link_oracle({bell, bell}, LinkMode::ts_deterministic, opt);
    const auto last = static_cast<Eigen::Index>(s.dim() - 1);
    return {2.0 * s(0, 0).real(), 2.0 * s(0, last).real()};
}

inline nlohmann::json factors_json(const CnotFactors& oracle, const CnotFactors& closed) {
    return {{"oracle_diagonal", oracle.diagonal},
            {"closed_diagonal", closed.diagonal},
            {"oracle_coherence", oracle.coherence},
            {"closed_coherence", closed.coherence},
            {"diagonal_exact", std::abs(oracle.diagonal - closed.diagonal) <= 1e-12},
            {"coherence_exact", std::abs(oracle.coherence - closed.coherence) <= 1e-12}};
}

inline nlohmann::json comparison_json(const ScenarioComparison& c) {
    const bool pass = c.gap() <= linking_gap_tolerance && c.ratio() >= linking_min_ratio;
    return {{"name", c.name},
            {"n_qubits", c.n_qubits},
            {"max_eps", c.max_eps},
            {"f_oracle", c.f_oracle},
            {"f_analytic", c.f_analytic},
            {"delta_f", c.gap()},
            {"delta_f_half", c.gap_half()},
            {"halving_ratio", c.ratio()},
            {"analytic_is_lower_bound", c.f_analytic <= c.f_oracle},
            {"pass", pass}};
}

/// Runs every suite. `pass` covers the noiseless, transfer and linking suites;
/// adjudications are informational.
inline nlohmann::json oracle_validate(double eps_max = 0.05) {
    nlohmann::json report;
    bool all_ok = true;

    nlohmann::json noiseless = nlohmann::json::array();
    for (const auto& sc : standard_scenarios(eps_max)) {
        const auto z = sc.scaled(0.0);
        const double fo = oracle_state(z).ghz_fidelity();
        const double fa = ghz_fidelity(evaluate_chain(analytic_chain(z)));
        const double d = std::abs(fo - fa);
        const bool ok = d <= 1e-12 && std::abs(fo - 1.0) <= 1e-12;
        all_ok = all_ok && ok;
        noiseless.push_back({{"name", sc.name}, {"f_oracle", fo}, {"f_analytic", fa}, {"delta_f", d}, {"pass", ok}});
    }
    report["noiseless"] = noiseless;

    const auto grid = transfer_grid_check();
    all_ok = all_ok && grid.pass();
    report["transfer_grid"] = {{"cases", grid.cases},
                               {"max_entry_deviation", grid.max_deviation},
                               {"tolerance", transfer_tolerance},
                               {"pass", grid.pass()}};

    nlohmann::json linking = nlohmann::json::array();
    nlohmann::json linking_consistent = nlohmann::json::array();
    for (const auto& sc : standard_scenarios(eps_max)) {
        auto j = comparison_json(compare_scenario(sc, ElectronPairSign::as_printed));
        all_ok = all_ok && j["pass"].get<bool>();
        linking.push_back(j);
        linking_consistent.push_back(comparison_json(compare_scenario(sc, ElectronPairSign::consistent)));
    }
    report["linking"] = {{"eps_max", eps_max},
                         {"gap_tolerance", linking_gap_tolerance},
                         {"min_halving_ratio", linking_min_ratio},
                         {"cases", linking},
                         {"cases_consistent_sign", linking_consistent}};

    const auto sign = adjudicate_electron_pair_sign();
    const double p = 0.01;
    report["adjudications"] = {
        {"electron_pair_sign",
         {{"damping", 0.01},
          {"mu_oracle", sign.mu_oracle},
          {"mu_printed", sign.mu_printed},
          {"mu_consistent", sign.mu_consistent},
          {"verdict", sign.verdict() == ElectronPairSign::consistent ? "consistent" : "as_printed"}}},
        {"two_step_cnot",
         factors_json(oracle_cnot_factors(CnotEventKind::two_step_even_link, p, p),
                      cnot_event_factors({1, CnotEventKind::two_step_even_link, p, p}))},
        {"ts_deterministic_cnot",
         factors_json(oracle_cnot_factors(CnotEventKind::ts_deterministic, p, p),
                      cnot_event_factors({1, CnotEventKind::ts_deterministic, p, p}))},
        {"ts_deterministic_cnot_split",
         factors_json(oracle_cnot_factors(CnotEventKind::ts_deterministic, p, 2.0 * p),
                      cnot_event_factors({1, CnotEventKind::ts_deterministic, p, 2.0 * p}))}};
    report["pass"] = all_ok;
    return report;
}

}  // namespace qramsim

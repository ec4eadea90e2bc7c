#pragma once

// Small linking instances evaluated twice: by the dense oracle and by the
// closed-form corner pipeline. Noise is given as dimensionless decay exponents
// sigma = t/T and gate error rates, so scaling a scenario by 1/2 halves every
// elapsed time and every error rate.

#include <cmath>
#include <string>
#include <vector>

#include "qramsim/ghz_analytics.hpp"
#include "qramsim/oracle.hpp"

namespace qramsim {

struct ScenarioPair {
    /// Transfer pair (nuclear) when true; electron-only pair otherwise.
    bool transfer = true;
    /// transfer: {eL, eR, nL, nR}; electron-only: {L, R, L', R'}.
    double sigma1[4] = {0, 0, 0, 0};
    double sigma2[4] = {0, 0, 0, 0};
};

struct LinkScenario {
    std::string name;
    LinkMode mode = LinkMode::two_step;
    std::vector<LinkMode> merges;  // TS only
    std::vector<ScenarioPair> pairs;
    double p_e = 0.0;
    double p_n = 0.0;
    std::vector<std::pair<double, double>> final_sigma;  // (sigma1, sigma2) per qubit

    int n_qubits() const {
        if (mode == LinkMode::two_step) return static_cast<int>(pairs.size()) + 1;
        return static_cast<int>(pairs.size()) + 1;
    }

    LinkScenario scaled(double f) const {
        LinkScenario s = *this;
        for (auto& p : s.pairs)
            for (int k = 0; k < 4; ++k) {
                p.sigma1[k] *= f;
                p.sigma2[k] *= f;
            }
        s.p_e *= f;
        s.p_n *= f;
        for (auto& fs : s.final_sigma) {
            fs.first *= f;
            fs.second *= f;
        }
        return s;
    }

    /// Largest decay probability or gate error appearing anywhere.
    double max_eps() const {
        double m = std::max(p_e, p_n);
        auto e = [](double s) { return -std::expm1(-s); };
        for (const auto& p : pairs)
            for (int k = 0; k < 4; ++k) m = std::max({m, e(p.sigma1[k]), e(p.sigma2[k])});
        for (const auto& fs : final_sigma) m = std::max({m, e(fs.first), e(fs.second)});
        return m;
    }
};

namespace detail {
inline double decay_of(double sigma) { return -std::expm1(-sigma); }

inline TransferDecay transfer_of(const ScenarioPair& p, double p_e) {
    TransferDecay d;
    d.e1_eL = decay_of(p.sigma1[0]);
    d.e1_eR = decay_of(p.sigma1[1]);
    d.e1_nL = decay_of(p.sigma1[2]);
    d.e1_nR = decay_of(p.sigma1[3]);
    d.e2_eL = decay_of(p.sigma2[0]);
    d.e2_eR = decay_of(p.sigma2[1]);
    d.e2_nL = decay_of(p.sigma2[2]);
    d.e2_nR = decay_of(p.sigma2[3]);
    d.p_e = p_e;
    return d;
}

inline ElectronPairDecay electron_of(const ScenarioPair& p) {
    ElectronPairDecay d;
    d.e1_L = decay_of(p.sigma1[0]);
    d.e1_R = decay_of(p.sigma1[1]);
    d.e1p_L = decay_of(p.sigma1[2]);
    d.e1p_R = decay_of(p.sigma1[3]);
    d.e2_L = decay_of(p.sigma2[0]);
    d.e2_R = decay_of(p.sigma2[1]);
    d.e2p_L = decay_of(p.sigma2[2]);
    d.e2p_R = decay_of(p.sigma2[3]);
    return d;
}
}  // namespace detail

inline LinkChain analytic_chain(const LinkScenario& sc, ElectronPairSign sign = ElectronPairSign::as_printed) {
    LinkChain chain;
    for (const auto& p : sc.pairs) {
        chain.pairs.push_back(p.transfer ? pair_after_transfer(detail::transfer_of(p, sc.p_e))
                                         : pair_electron_only(detail::electron_of(p), sign));
    }
    if (sc.mode == LinkMode::two_step) {
        for (int k = 1; k + 1 < static_cast<int>(sc.pairs.size()); k += 2) {
            chain.cnot_events.push_back({k, CnotEventKind::two_step_even_link, sc.p_e, sc.p_n});
        }
    } else {
        for (std::size_t k = 0; k < sc.merges.size(); ++k) {
            if (sc.merges[k] == LinkMode::ts_deterministic) {
                chain.cnot_events.push_back({static_cast<int>(k) + 1, CnotEventKind::ts_deterministic, sc.p_e, sc.p_n});
            }
        }
    }
    for (const auto& fs : sc.final_sigma) chain.final_idle.push_back({IdleInterval::from_sigma(fs.first, fs.second)});
    return chain;
}

inline DenseState oracle_state(const LinkScenario& sc) {
    std::vector<DenseState> states;
    for (const auto& p : sc.pairs) {
        states.push_back(p.transfer ? run_transfer_block_oracle(detail::transfer_of(p, sc.p_e))
                                    : run_electron_pair_oracle(detail::electron_of(p)));
    }
    LinkOracleOptions opt;
    opt.merges = sc.merges;
    opt.p_e = sc.p_e;
    opt.p_n = sc.p_n;
    for (const auto& fs : sc.final_sigma) opt.final_decay.emplace_back(detail::decay_of(fs.first), detail::decay_of(fs.second));
    return run_link_oracle(states, sc.mode, opt);
}

struct ScenarioComparison {
    std::string name;
    int n_qubits = 0;
    double max_eps = 0.0;
    double f_oracle = 0.0;
    double f_analytic = 0.0;
    double f_oracle_half = 0.0;
    double f_analytic_half = 0.0;

    double gap() const { return std::abs(f_oracle - f_analytic); }
    double gap_half() const { return std::abs(f_oracle_half - f_analytic_half); }
    double ratio() const { return gap_half() > 0.0 ? gap() / gap_half() : INFINITY; }
};

inline ScenarioComparison compare_scenario(const LinkScenario& sc, ElectronPairSign sign = ElectronPairSign::as_printed) {
    ScenarioComparison r;
    r.name = sc.name;
    r.n_qubits = sc.n_qubits();
    r.max_eps = sc.max_eps();
    r.f_oracle = oracle_state(sc).ghz_fidelity();
    r.f_analytic = ghz_fidelity(evaluate_chain(analytic_chain(sc, sign)));
    const LinkScenario half = sc.scaled(0.5);
    r.f_oracle_half = oracle_state(half).ghz_fidelity();
    r.f_analytic_half = ghz_fidelity(evaluate_chain(analytic_chain(half, sign)));
    return r;
}

/// Mixed-noise instances of 3 to 6 qubits with every error source switched
/// on and the largest decay probability or gate error equal to `eps_max`.
inline std::vector<LinkScenario> standard_scenarios(double eps_max = 0.05) {
    // sigma giving a decay probability of exactly eps_max
    const double s = -std::log1p(-eps_max);
    auto frac = [&](double f) { return s * f; };
    std::vector<LinkScenario> out;

    auto transfer_pair = [&](double a, double b) {
        ScenarioPair p;
        p.transfer = true;
        const double s1[4] = {frac(0.2 * a), frac(0.3 * b), frac(0.6 * a), frac(0.5 * b)};
        const double s2[4] = {frac(0.7 * a), frac(0.4 * b), frac(1.0 * a), frac(0.8 * b)};
        std::copy(s1, s1 + 4, p.sigma1);
        std::copy(s2, s2 + 4, p.sigma2);
        return p;
    };
    auto electron_pair = [&](double a, double b) {
        ScenarioPair p;
        p.transfer = false;
        const double s1[4] = {frac(0.1 * a), frac(0.2 * b), frac(0.7 * a), frac(0.6 * b)};
        const double s2[4] = {frac(0.3 * a), frac(0.2 * b), frac(1.0 * a), frac(0.9 * b)};
        std::copy(s1, s1 + 4, p.sigma1);
        std::copy(s2, s2 + 4, p.sigma2);
        return p;
    };
    auto finals = [&](int n) {
        std::vector<std::pair<double, double>> f;
        for (int q = 0; q < n; ++q) f.emplace_back(frac(0.3 + 0.1 * (q % 3)), frac(0.5 + 0.15 * (q % 4)));
        return f;
    };

    {
        LinkScenario sc;
        sc.name = "two_step_4q";
        sc.mode = LinkMode::two_step;
        sc.pairs = {transfer_pair(1.0, 0.9), electron_pair(0.8, 1.0), transfer_pair(0.7, 1.0)};
        sc.p_e = 0.6 * eps_max;
        sc.p_n = eps_max;
        sc.final_sigma = finals(4);
        out.push_back(sc);
    }
    {
        LinkScenario sc;
        sc.name = "ts_probabilistic_3q";
        sc.mode = LinkMode::ts_probabilistic;
        sc.merges = {LinkMode::ts_probabilistic};
        sc.pairs = {electron_pair(1.0, 0.8), electron_pair(0.9, 1.0)};
        sc.final_sigma = finals(3);
        out.push_back(sc);
    }
    {
        LinkScenario sc;
        sc.name = "ts_deterministic_3q";
        sc.mode = LinkMode::ts_deterministic;
        sc.merges = {LinkMode::ts_deterministic};
        sc.pairs = {electron_pair(0.9, 1.0), electron_pair(1.0, 0.7)};
        sc.p_e = eps_max;
        sc.p_n = eps_max;
        sc.final_sigma = finals(3);
        out.push_back(sc);
    }
    {
        LinkScenario sc;
        sc.name = "ts_mixed_5q";
        sc.mode = LinkMode::ts_probabilistic;
        sc.merges = {LinkMode::ts_probabilistic, LinkMode::ts_deterministic, LinkMode::ts_probabilistic};
        sc.pairs = {electron_pair(1.0, 0.6), electron_pair(0.8, 1.0), electron_pair(0.7, 0.9), electron_pair(1.0, 1.0)};
        sc.p_e = 0.5 * eps_max;
        sc.p_n = eps_max;
        sc.final_sigma = finals(5);
        out.push_back(sc);
    }
    return out;
}

}  // namespace qramsim

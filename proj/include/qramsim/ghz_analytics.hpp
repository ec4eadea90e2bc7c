#pragma once

// Closed-form corner entries of a noisy GHZ layer state. All corner values use
// the doubled convention: the stored numbers are entries of 2*rho.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qramsim/noise.hpp"

namespace qramsim {

struct PairParams {
    double mu = 0.0;
    double nu = 1.0;

    bool valid(double tol = 1e-12) const { return mu >= -tol && mu <= 1.0 + tol && std::abs(nu) <= 1.0 - mu + tol; }
};

struct GhzCorner {
    int n_qubits = 0;
    double rho00 = 1.0;
    double rho11 = 1.0;
    double rho01 = 1.0;
};

enum class CnotEventKind { two_step_even_link, ts_deterministic };

struct CnotEvent {
    int node = 0;  // link index for two-step events, qubit index for deterministic nodes
    CnotEventKind kind = CnotEventKind::two_step_even_link;
    double p_e = 0.0;
    double p_n = 0.0;
};

/// One stretch of idling; infinite T means that channel is off.
struct IdleInterval {
    double duration = 0.0;
    double T1 = std::numeric_limits<double>::infinity();
    double T2 = std::numeric_limits<double>::infinity();

    double decay1() const { return eps_bar(duration, T1); }
    double decay2() const { return eps_bar(duration, T2); }

    /// Unit-duration interval with the given dimensionless decay exponents.
    static IdleInterval from_sigma(double sigma1, double sigma2) {
        const double inf = std::numeric_limits<double>::infinity();
        return {1.0, sigma1 > 0.0 ? 1.0 / sigma1 : inf, sigma2 > 0.0 ? 1.0 / sigma2 : inf};
    }
};

struct LinkChain {
    std::vector<PairParams> pairs;
    std::vector<CnotEvent> cnot_events;
    std::vector<std::vector<IdleInterval>> final_idle;  // one list per qubit

    int n_qubits() const { return static_cast<int>(pairs.size()) + 1; }

    void validate() const {
        const int n = n_qubits();
        if (pairs.empty()) throw std::invalid_argument("link chain needs at least one pair");
        for (const auto& e : cnot_events) {
            const int limit = e.kind == CnotEventKind::two_step_even_link ? n - 1 : n;
            if (e.node < 0 || e.node >= limit) {
                throw std::invalid_argument("CNOT event index " + std::to_string(e.node) + " out of range");
            }
        }
        if (!final_idle.empty() && static_cast<int>(final_idle.size()) != n) {
            throw std::invalid_argument("final idle data must cover every qubit");
        }
    }
};

// ---- pair creation -------------------------------------------------------

/// Decay probabilities of one transfer block (electron pair moved to nuclei).
struct TransferDecay {
    double e1_eL = 0, e1_eR = 0, e1_nL = 0, e1_nR = 0;  // damping
    double e2_eL = 0, e2_eR = 0, e2_nL = 0, e2_nR = 0;  // dephasing
    double p_e = 0;
};

inline PairParams pair_after_transfer(const TransferDecay& d) {
    const double mu =
        (1.0 - f_factor(d.e1_eL, d.e1_eR) * (1.0 - d.p_e) * (1.0 - d.p_e) * g_factor(d.e1_nL, d.e1_nR) -
         d.e1_nL * d.e1_nR) /
        2.0;
    const double nu = (1.0 - d.e2_eL) * (1.0 - d.e2_eR) * (1.0 - d.e2_nL) * (1.0 - d.e2_nR) *
                      std::sqrt((1.0 - d.e1_eL) * (1.0 - d.e1_eR) * (1.0 - d.e1_nL) * (1.0 - d.e1_nR)) *
                      std::pow(1.0 - d.p_e, 4);
    return {mu, nu};
}

inline PairParams pair_after_transfer(double t_eL, double t_eR, double t_nL, double t_nR, const NoiseParams& p) {
    TransferDecay d;
    d.e1_eL = eps(t_eL, p.T1_e);
    d.e1_eR = eps(t_eR, p.T1_e);
    d.e1_nL = eps(t_nL, p.T1_n);
    d.e1_nR = eps(t_nR, p.T1_n);
    d.e2_eL = eps(t_eL, p.T2_e);
    d.e2_eR = eps(t_eR, p.T2_e);
    d.e2_nL = eps(t_nL, p.T2_n);
    d.e2_nR = eps(t_nR, p.T2_n);
    d.p_e = p.p_e;
    return pair_after_transfer(d);
}

/// Sign of the second-order damping term in the electron-only pair. The
/// printed form adds it; a direct channel calculation subtracts it, matching
/// the transfer-block expression.
enum class ElectronPairSign { as_printed, consistent };

struct ElectronPairDecay {
    double e1_L = 0, e1_R = 0, e1p_L = 0, e1p_R = 0;  // damping before / after the herald
    double e2_L = 0, e2_R = 0, e2p_L = 0, e2p_R = 0;  // dephasing before / after the herald
};

inline PairParams pair_electron_only(const ElectronPairDecay& d, ElectronPairSign sign = ElectronPairSign::as_printed) {
    const double second = d.e1p_L * d.e1p_R;
    const double signed_second = sign == ElectronPairSign::as_printed ? second : -second;
    const double mu = (1.0 - f_factor(d.e1_L, d.e1_R) * g_factor(d.e1p_L, d.e1p_R) + signed_second) / 2.0;
    const double nu = (1.0 - d.e2_L) * (1.0 - d.e2_R) * (1.0 - d.e2p_L) * (1.0 - d.e2p_R) *
                      std::sqrt((1.0 - d.e1_L) * (1.0 - d.e1_R) * (1.0 - d.e1p_L) * (1.0 - d.e1p_R));
    return {mu, nu};
}

inline PairParams pair_electron_only(double t_eL, double t_eR, double tp_eL, double tp_eR, const NoiseParams& p,
                                     ElectronPairSign sign = ElectronPairSign::as_printed) {
    ElectronPairDecay d;
    d.e1_L = eps(t_eL, p.T1_e);
    d.e1_R = eps(t_eR, p.T1_e);
    d.e1p_L = eps(tp_eL, p.T1_e);
    d.e1p_R = eps(tp_eR, p.T1_e);
    d.e2_L = eps(t_eL, p.T2_e);
    d.e2_R = eps(t_eR, p.T2_e);
    d.e2p_L = eps(tp_eL, p.T2_e);
    d.e2p_R = eps(tp_eR, p.T2_e);
    return pair_electron_only(d, sign);
}

// ---- linking -------------------------------------------------------------

/// Diagonal entry for a computational basis string; link j couples bits j and
/// j+1, counting bits from the least significant end.
inline double diag_entry(const std::vector<PairParams>& pairs, std::uint64_t bits, int n_qubits) {
    if (static_cast<int>(pairs.size()) != n_qubits - 1) {
        throw std::invalid_argument("diag_entry: need n_qubits - 1 pairs");
    }
    double v = 1.0;
    for (int j = 0; j + 1 < n_qubits; ++j) {
        const bool same = ((bits >> j) & 1U) == ((bits >> (j + 1)) & 1U);
        v *= same ? 1.0 - pairs[j].mu : pairs[j].mu;
    }
    return v;
}

inline GhzCorner link_noiseless(const std::vector<PairParams>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("link_noiseless: no pairs");
    GhzCorner c;
    c.n_qubits = static_cast<int>(pairs.size()) + 1;
    c.rho00 = 1.0;
    c.rho01 = 1.0;
    for (const auto& pp : pairs) {
        c.rho00 *= 1.0 - pp.mu;
        c.rho01 *= pp.nu;
    }
    c.rho11 = c.rho00;
    return c;
}

struct CnotFactors {
    double diagonal = 1.0;
    double coherence = 1.0;
};

inline CnotFactors cnot_event_factors(const CnotEvent& e) {
    switch (e.kind) {
        case CnotEventKind::two_step_even_link: {
            const double p = e.p_n;
            return {h_factor(p), (1.0 - p) * (1.0 - p) * (1.0 - p + p * p / 2.0)};
        }
        case CnotEventKind::ts_deterministic: {
            if (e.p_e == e.p_n) {
                const double p = e.p_n;
                return {h_tilde_factor(p), std::pow(1.0 - p, 3) * (1.0 - p / 2.0)};
            }
            // Unequal rates: bit-flip weights q = p/2 on the three flip sites.
            const double qe = e.p_e / 2.0;
            const double qn = e.p_n / 2.0;
            return {(1.0 - qe) * (1.0 - qn) * (1.0 - qn) + qe * qn * qn,
                    (1.0 - e.p_e) * (1.0 - e.p_e) * (1.0 - e.p_n) * (1.0 - e.p_n / 2.0)};
        }
    }
    throw std::invalid_argument("unknown CNOT event kind");
}

inline GhzCorner apply_cnot_noise(GhzCorner c, const LinkChain& chain) {
    for (const auto& e : chain.cnot_events) {
        const auto f = cnot_event_factors(e);
        c.rho00 *= f.diagonal;
        c.rho11 *= f.diagonal;
        c.rho01 *= f.coherence;
    }
    return c;
}

/// Final memory decoherence. The rho00 correction collects population that
/// damps down from the single-flip neighbours of |0...0>; it is weighted by
/// whatever diagonal factor rho00 already carries beyond prod(1 - mu).
inline GhzCorner apply_final_decoherence(GhzCorner c, const LinkChain& chain) {
    const int n = chain.n_qubits();
    if (static_cast<int>(chain.final_idle.size()) != n) {
        throw std::invalid_argument("apply_final_decoherence: missing idle data for some qubit");
    }
    std::vector<double> keep1(n, 1.0);
    double coh = 1.0;
    double pop11 = 1.0;
    for (int j = 0; j < n; ++j) {
        double d1 = 1.0, d2 = 1.0;
        for (const auto& iv : chain.final_idle[j]) {
            d1 *= iv.decay1();
            d2 *= iv.decay2();
        }
        keep1[j] = d1;
        coh *= d2 * std::sqrt(d1);
        pop11 *= d1;
    }

    const auto& pairs = chain.pairs;
    const int m = n - 1;
    // prefix[k] = prod_{i<k} (1 - mu_i), suffix[k] = prod_{i>=k} (1 - mu_i)
    std::vector<double> prefix(m + 1, 1.0), suffix(m + 1, 1.0);
    for (int i = 0; i < m; ++i) prefix[i + 1] = prefix[i] * (1.0 - pairs[i].mu);
    for (int i = m - 1; i >= 0; --i) suffix[i] = suffix[i + 1] * (1.0 - pairs[i].mu);
    const double base = prefix[m];
    const double threaded = base > 0.0 ? c.rho00 / base : 0.0;

    double gain = 0.0;
    for (int j = 0; j < n; ++j) {
        const double e1 = 1.0 - keep1[j];
        if (e1 == 0.0) continue;
        // flipping qubit j breaks links j-1 and j
        double nb;
        if (j == 0) {
            nb = pairs[0].mu * suffix[1];
        } else if (j == n - 1) {
            nb = prefix[m - 1] * pairs[m - 1].mu;
        } else {
            nb = prefix[j - 1] * pairs[j - 1].mu * pairs[j].mu * suffix[j + 1];
        }
        gain += e1 * nb;
    }

    c.rho00 += gain * threaded;
    c.rho11 *= pop11;
    c.rho01 *= coh;
    return c;
}

inline double ghz_fidelity(const GhzCorner& c) { return (c.rho00 + c.rho11 + 2.0 * c.rho01) / 4.0; }

struct ValidityWarning {
    int n_qubits = 0;
    double max_eps = 0.0;
    double product = 0.0;
    std::string message;
};

/// Flags chains where the first-order damping truncation is no longer safe.
inline std::optional<ValidityWarning> validity_warning(int n_qubits, double max_eps) {
    const double prod = static_cast<double>(n_qubits) * max_eps;
    if (prod <= 1.0) return std::nullopt;
    return ValidityWarning{n_qubits, max_eps, prod,
                           "N*eps = " + std::to_string(prod) + " exceeds 1; neighbour-sum truncation unreliable"};
}

/// Largest accumulated damping probability over the final idles of a chain.
inline double max_final_damping(const LinkChain& chain) {
    double worst = 0.0;
    for (const auto& list : chain.final_idle) {
        double d1 = 1.0;
        for (const auto& iv : list) d1 *= iv.decay1();
        worst = std::max(worst, 1.0 - d1);
    }
    return worst;
}

/// Full pipeline on a chain whose pairs are already known.
inline GhzCorner evaluate_chain(const LinkChain& chain) {
    chain.validate();
    GhzCorner c = link_noiseless(chain.pairs);
    c = apply_cnot_noise(c, chain);
    if (!chain.final_idle.empty()) c = apply_final_decoherence(c, chain);
    return c;
}

}  // namespace qramsim

#pragma once

// Brute-force reference runs of the pair-creation and linking protocols on a
// dense density matrix. Every measurement is resolved by summing both
// branches with their corrections, so the results are exact averages.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qramsim/dense_state.hpp"
#include "qramsim/ghz_analytics.hpp"
#include "qramsim/noise.hpp"

namespace qramsim {

/// Eq.-(mu, nu) form: diag (1-mu, mu, mu, 1-mu)/2, corners nu/2.
inline DenseState pair_state(const PairParams& pp) {
    DenseState::Matrix m = DenseState::Matrix::Zero(4, 4);
    m(0, 0) = m(3, 3) = (1.0 - pp.mu) / 2.0;
    m(1, 1) = m(2, 2) = pp.mu / 2.0;
    m(0, 3) = m(3, 0) = pp.nu / 2.0;
    return DenseState::from_matrix(m);
}

/// Reads (mu, nu) back from a symmetrized two-qubit state.
inline PairParams pair_params_of(const DenseState& s) {
    if (s.n_qubits() != 2) throw std::invalid_argument("pair_params_of: need a two-qubit state");
    return {s(1, 1).real() + s(2, 2).real(), 2.0 * s(0, 3).real()};
}

struct TransferTimes {
    double t_eL = 0, t_eR = 0, t_nL = 0, t_nR = 0;
};

inline TransferDecay transfer_decay(const NoiseParams& p, const TransferTimes& t) {
    TransferDecay d;
    d.e1_eL = eps(t.t_eL, p.T1_e);
    d.e1_eR = eps(t.t_eR, p.T1_e);
    d.e1_nL = eps(t.t_nL, p.T1_n);
    d.e1_nR = eps(t.t_nR, p.T1_n);
    d.e2_eL = eps(t.t_eL, p.T2_e);
    d.e2_eR = eps(t.t_eR, p.T2_e);
    d.e2_nL = eps(t.t_nL, p.T2_n);
    d.e2_nR = eps(t.t_nR, p.T2_n);
    d.p_e = p.p_e;
    return d;
}

/// Electron pair heralded, idles, moved onto the nuclei with two noisy
/// electronic CNOTs and X measurements, nuclei idle. Returns the nuclear pair.
inline DenseState run_transfer_block_oracle(const TransferDecay& d) {
    // qubits: 0 eL, 1 eR
    DenseState s = DenseState::bell_phi_plus();
    s.apply_idle(0, d.e1_eL, d.e2_eL);
    s.apply_idle(1, d.e1_eR, d.e2_eR);
    s.twirl_x({0, 1});

    // 2 nL, 3 nR
    s = DenseState::tensor(s, DenseState(2));
    s.apply_noisy_cnot(0, 2, d.p_e);
    s.apply_noisy_cnot(1, 3, d.p_e);
    s.measure_and_correct(0, Basis::X, [](DenseState& b) { b.apply_gate(Gate::Z, {2}); });
    s.measure_and_correct(1, Basis::X, [](DenseState& b) { b.apply_gate(Gate::Z, {3}); });
    s.trace_out(1);
    s.trace_out(0);

    s.apply_idle(0, d.e1_nL, d.e2_nL);
    s.apply_idle(1, d.e1_nR, d.e2_nR);
    s.symmetrize_antidiagonal();
    return s;
}

inline DenseState run_transfer_block_oracle(const NoiseParams& p, const TransferTimes& t) {
    return run_transfer_block_oracle(transfer_decay(p, t));
}

/// Electron-only pair: idle before and after the herald, no transfer.
inline DenseState run_electron_pair_oracle(const ElectronPairDecay& d) {
    DenseState s = DenseState::bell_phi_plus();
    s.apply_idle(0, d.e1_L, d.e2_L);
    s.apply_idle(1, d.e1_R, d.e2_R);
    s.twirl_x({0, 1});
    s.apply_idle(0, d.e1p_L, d.e2p_L);
    s.apply_idle(1, d.e1p_R, d.e2p_R);
    s.symmetrize_antidiagonal();
    return s;
}

enum class LinkMode { two_step, ts_probabilistic, ts_deterministic };

struct LinkOracleOptions {
    /// Two-step: ignored (every electron pair is a nuclear-CNOT link).
    /// TS: one entry per merge node, ts_probabilistic or ts_deterministic.
    std::vector<LinkMode> merges;
    double p_e = 0.0;
    double p_n = 0.0;
    /// Per final qubit: (damping, dephasing) decay probabilities after linking.
    std::vector<std::pair<double, double>> final_decay;
    int qubit_cap = DenseState::default_qubit_cap;
};

namespace detail {

inline void check_peak(int qubits, int cap) {
    if (qubits > cap) {
        throw QubitCapExceeded("linking needs " + std::to_string(qubits) + " simultaneous qubits, cap is " +
                               std::to_string(cap));
    }
}

inline void flip_range(DenseState& s, int from, int to) {
    for (int q = from; q < to; ++q) s.apply_gate(Gate::X, {q});
}

// fragment ... nA | eA eB | nB nC  ->  fragment ... nA nB nC
inline void merge_two_step(DenseState& frag, const DenseState& electrons, const DenseState& next, double p_n, int cap) {
    const int f = frag.n_qubits();
    check_peak(f + 4, cap);
    DenseState s = DenseState::tensor(DenseState::tensor(frag, electrons), next);
    const int nA = f - 1, eA = f, eB = f + 1, nB = f + 2;
    s.apply_noisy_cnot(nA, eA, p_n);
    s.apply_noisy_cnot(nB, eB, p_n);
    s.parity_check_and_correct({eA, eB}, [&](DenseState& b) { flip_range(b, nB, nB + 2); });
    s.trace_out(eB);
    s.trace_out(eA);
    frag = std::move(s);
}

// fragment ... eL | eR next  ->  fragment ... eL next
inline void merge_probabilistic(DenseState& frag, const DenseState& pair, int cap) {
    const int f = frag.n_qubits();
    check_peak(f + 2, cap);
    DenseState s = DenseState::tensor(frag, pair);
    const int eL = f - 1, eR = f;
    s.parity_check_and_correct({eL, eR}, [&](DenseState& b) { flip_range(b, eR, eR + 2); });
    s.measure_and_correct(eR, Basis::X, [&](DenseState& b) { b.apply_gate(Gate::Z, {eL}); });
    s.trace_out(eR);
    frag = std::move(s);
}

// fragment ... eL | n | eR next  ->  fragment ... n next
inline void merge_deterministic(DenseState& frag, const DenseState& pair, double p_e, double p_n, int cap) {
    const int f = frag.n_qubits();
    check_peak(f + 3, cap);
    DenseState s = DenseState::tensor(DenseState::tensor(frag, DenseState(1)), pair);
    const int eL = f - 1;
    s.apply_noisy_cnot(eL, f, p_e);
    s.measure_and_correct(eL, Basis::X, [&](DenseState& b) { b.apply_gate(Gate::Z, {f}); });
    s.trace_out(eL);
    const int n = f - 1, eR = f;
    s.apply_noisy_cnot(n, eR, p_n);
    s.measure_and_correct(eR, Basis::Z, [&](DenseState& b) { flip_range(b, eR + 1, eR + 2); });
    s.trace_out(eR);
    frag = std::move(s);
}

}  // namespace detail

/// Links the given pairs into one GHZ state, applies final memory decay and
/// the randomized-correction symmetrization.
///
/// two_step: pairs alternate nuclear, electron, nuclear, ...; each electron
/// pair joins its neighbours through two nuclear CNOTs.
/// TS modes: pairs are consecutive electron links; merge k happens at the node
/// shared by pairs k and k+1.
inline DenseState run_link_oracle(const std::vector<DenseState>& pairs, LinkMode mode, const LinkOracleOptions& opt) {
    if (pairs.empty()) throw std::invalid_argument("run_link_oracle: no pairs");
    for (const auto& p : pairs) {
        if (p.n_qubits() != 2) throw std::invalid_argument("run_link_oracle: pairs must be two-qubit states");
    }
    DenseState frag = pairs.front();
    if (mode == LinkMode::two_step) {
        if (pairs.size() % 2 == 0) throw std::invalid_argument("two_step linking needs an odd number of pairs");
        for (std::size_t k = 1; k + 1 < pairs.size(); k += 2) {
            detail::merge_two_step(frag, pairs[k], pairs[k + 1], opt.p_n, opt.qubit_cap);
        }
    } else {
        std::vector<LinkMode> merges = opt.merges;
        if (merges.empty()) merges.assign(pairs.size() - 1, mode);
        if (merges.size() != pairs.size() - 1) throw std::invalid_argument("run_link_oracle: one merge mode per node");
        for (std::size_t k = 1; k < pairs.size(); ++k) {
            if (merges[k - 1] == LinkMode::ts_deterministic) {
                detail::merge_deterministic(frag, pairs[k], opt.p_e, opt.p_n, opt.qubit_cap);
            } else if (merges[k - 1] == LinkMode::ts_probabilistic) {
                detail::merge_probabilistic(frag, pairs[k], opt.qubit_cap);
            } else {
                throw std::invalid_argument("run_link_oracle: two_step merges cannot be mixed into a TS chain");
            }
        }
    }
    if (!opt.final_decay.empty()) {
        if (static_cast<int>(opt.final_decay.size()) != frag.n_qubits()) {
            throw std::invalid_argument("run_link_oracle: final decay must cover every qubit");
        }
        for (int q = 0; q < frag.n_qubits(); ++q) frag.apply_idle(q, opt.final_decay[q].first, opt.final_decay[q].second);
    }
    frag.symmetrize_antidiagonal();
    return frag;
}

}  // namespace qramsim

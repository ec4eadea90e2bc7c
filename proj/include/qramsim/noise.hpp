#pragma once

// Scalar noise algebra shared by the closed-form analytics and the
// density-matrix oracle: decay probabilities, helper factors, physical
// parameter sets and the Kraus sets of the three memory/gate channels.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qramsim {

using cplx = std::complex<double>;

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using Mat2 = std::array<cplx, 4>;

class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_probability(double p, std::string_view what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidParameter(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

inline void require_positive(double x, std::string_view what) {
    if (!(x > 0.0)) {
        throw InvalidParameter(std::string(what) + " must be > 0, got " + std::to_string(x));
    }
}

}  // namespace detail

/// Probability that a memory decays within `dt` given characteristic time `T`:
/// 1 - exp(-dt/T). Infinite T is allowed and means "never decays".
inline double eps(double dt, double T) {
    detail::require_positive(T, "characteristic time");
    if (!(dt >= 0.0)) {
        throw InvalidParameter("elapsed time must be >= 0, got " + std::to_string(dt));
    }
    return -std::expm1(-dt / T);
}

/// exp(-dt/T); the surviving amplitude factor. eps + eps_bar == 1.
inline double eps_bar(double dt, double T) {
    detail::require_positive(T, "characteristic time");
    if (!(dt >= 0.0)) {
        throw InvalidParameter("elapsed time must be >= 0, got " + std::to_string(dt));
    }
    return std::exp(-dt / T);
}

inline double f_factor(double e1, double e2) { return 1.0 - e1 - e2 + 2.0 * e1 * e2; }

inline double g_factor(double e1, double e2) { return (1.0 - e1) * (1.0 - e2); }

/// Diagonal factor of one two-step even link (two nuclear CNOTs).
inline double h_factor(double p) {
    const double half = 1.0 - p / 2.0;
    return half * half - p * half;
}

/// Diagonal factor of one deterministic TS linking node.
inline double h_tilde_factor(double p) { return (1.0 - p) * (1.0 - p) + (p / 2.0) * (1.0 - p / 2.0); }

/// Physical error rates. Times in seconds.
struct NoiseParams {
    double T1_e = 2.0;
    double T2_e = 0.1;
    double T1_n = 200.0;
    double T2_n = 10.0;
    double p_e = 0.0;
    double p_n = 0.0;
    double eta = 1.0;
    double p_link = 1.0;

    /// Nuclear times are 100x the electronic ones; p_link follows eta.
    static NoiseParams from_electron_times(double T1_e, double T2_e, double p_e, double p_n, double eta) {
        NoiseParams p;
        p.T1_e = T1_e;
        p.T2_e = T2_e;
        p.T1_n = 100.0 * T1_e;
        p.T2_n = 100.0 * T2_e;
        p.p_e = p_e;
        p.p_n = p_n;
        p.eta = eta;
        p.p_link = eta;
        p.validate();
        return p;
    }

    /// Every channel switched off; memories never decay.
    static NoiseParams noiseless() {
        const double inf = std::numeric_limits<double>::infinity();
        NoiseParams p;
        p.T1_e = p.T2_e = p.T1_n = p.T2_n = inf;
        p.p_e = p.p_n = 0.0;
        p.eta = p.p_link = 1.0;
        return p;
    }

    void validate() const {
        detail::require_positive(T1_e, "T1_e");
        detail::require_positive(T2_e, "T2_e");
        detail::require_positive(T1_n, "T1_n");
        detail::require_positive(T2_n, "T2_n");
        detail::require_probability(p_e, "p_e");
        detail::require_probability(p_n, "p_n");
        detail::require_probability(eta, "eta");
        detail::require_probability(p_link, "p_link");
        if (!(eta > 0.0)) throw InvalidParameter("eta must be > 0");
        if (!(p_link > 0.0)) throw InvalidParameter("p_link must be > 0");
    }
};

enum class MemoryType { electron, nuclear };

inline double t1_of(const NoiseParams& p, MemoryType m) { return m == MemoryType::electron ? p.T1_e : p.T1_n; }
inline double t2_of(const NoiseParams& p, MemoryType m) { return m == MemoryType::electron ? p.T2_e : p.T2_n; }

enum class ChannelKind { dephasing, damping, depolarizing };

inline std::string_view to_string(ChannelKind k) {
    switch (k) {
        case ChannelKind::dephasing: return "dephasing";
        case ChannelKind::damping: return "damping";
        case ChannelKind::depolarizing: return "depolarizing";
    }
    return "?";
}

struct KrausSet {
    ChannelKind label;
    double p;
    std::vector<Mat2> operators;

    /// Largest entry of |sum K^dagger K - I|.
    double completeness_error() const {
        Mat2 acc{};
        for (const auto& k : operators) {
            // (K^dagger K)_{ij} = sum_r conj(K_{ri}) K_{rj}
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    acc[2 * i + j] += std::conj(k[i]) * k[j] + std::conj(k[2 + i]) * k[2 + j];
                }
            }
        }
        acc[0] -= 1.0;
        acc[3] -= 1.0;
        double worst = 0.0;
        for (const auto& a : acc) worst = std::max(worst, std::abs(a));
        return worst;
    }
};

/// The operator sets exactly as printed for each channel:
///   dephasing    {sqrt(1-p) I, sqrt(p) Z}
///   damping      {|0><0| + sqrt(1-p)|1><1|, sqrt(p)|0><1|}
///   depolarizing {sqrt(1-p) I, sqrt(p/3) X, sqrt(p/3) Y, sqrt(p/3) Z}
/// Zero-weight operators are dropped.
inline KrausSet kraus_set(ChannelKind kind, double p) {
    detail::require_probability(p, "channel probability");
    const cplx i{0.0, 1.0};
    KrausSet ks{kind, p, {}};
    auto push = [&](double weight, Mat2 m) {
        if (weight <= 0.0) return;
        const double s = std::sqrt(weight);
        for (auto& x : m) x *= s;
        ks.operators.push_back(m);
    };
    switch (kind) {
        case ChannelKind::dephasing:
            push(1.0 - p, {1.0, 0.0, 0.0, 1.0});
            push(p, {1.0, 0.0, 0.0, -1.0});
            break;
        case ChannelKind::damping:
            ks.operators.push_back({1.0, 0.0, 0.0, std::sqrt(1.0 - p)});
            push(p, {0.0, 1.0, 0.0, 0.0});
            break;
        case ChannelKind::depolarizing:
            push(1.0 - p, {1.0, 0.0, 0.0, 1.0});
            push(p / 3.0, {0.0, 1.0, 1.0, 0.0});
            push(p / 3.0, {0.0, -i, i, 0.0});
            push(p / 3.0, {1.0, 0.0, 0.0, -1.0});
            break;
    }
    return ks;
}

// The closed forms treat a gate error p as "replace the qubit by I/2 with
// probability p". In the printed depolarizing parametrization that is weight
// 3p/4 on the non-identity Paulis.
inline KrausSet gate_error_channel(double p) {
    detail::require_probability(p, "gate error");
    return kraus_set(ChannelKind::depolarizing, 0.75 * p);
}

// Idle dephasing for a decay probability e = eps(dt, T2): coherences shrink by
// (1 - e), which is the printed channel at p = e/2.
inline KrausSet idle_dephasing(double e) { return kraus_set(ChannelKind::dephasing, e / 2.0); }

inline KrausSet idle_damping(double e) { return kraus_set(ChannelKind::damping, e); }

}  // namespace qramsim

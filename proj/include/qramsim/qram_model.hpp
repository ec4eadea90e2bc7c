#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qramsim/ghz_analytics.hpp"
#include "qramsim/protocol_sim.hpp"

namespace qramsim {

struct QramEstimate {
    std::vector<double> per_layer_fidelity;
    double tree_fidelity = 1.0;
    double query_time = 0.0;
};

/// A layer with no pair (single node, no QC link) needs no GHZ state.
inline double layer_fidelity(const LinkChain& chain) {
    if (chain.pairs.empty()) return 1.0;
    return ghz_fidelity(evaluate_chain(chain));
}

inline double qram_fidelity(const std::vector<double>& layer_fidelities) {
    if (layer_fidelities.empty()) throw std::invalid_argument("qram_fidelity: no layers");
    double f = 1.0;
    for (double x : layer_fidelities) f *= x;
    return f;
}

inline QramEstimate estimate(const QramRunResult& run) {
    QramEstimate e;
    for (const auto& c : run.chains) e.per_layer_fidelity.push_back(layer_fidelity(c));
    e.tree_fidelity = qram_fidelity(e.per_layer_fidelity);
    e.query_time = run.query_time;
    return e;
}

struct RunConfig {
    Protocol protocol = Protocol::td;
    int n_layers = 2;
    NoiseParams params;
    TimingModel timing;
    PlacementStrategy placement;
    SimOptions options;
    ElectronPairSign sign = ElectronPairSign::as_printed;
};

inline QramEstimate run_once(const RunConfig& c, std::uint64_t seed) {
    return estimate(simulate_qram(c.protocol, c.n_layers, c.params, c.timing, c.placement, seed, c.options, c.sign));
}

struct MonteCarloSummary {
    int n_sims = 0;
    std::uint64_t base_seed = 0;
    double mean_fidelity = 0.0;
    double stderr_fidelity = 0.0;
    double mean_query_time = 0.0;
    double stderr_query_time = 0.0;
    std::vector<double> mean_layer_fidelity;
    std::vector<QramEstimate> samples;  // in seed order
};

namespace detail {
inline void mean_and_stderr(const std::vector<double>& xs, double& mean, double& se) {
    const double n = static_cast<double>(xs.size());
    double s = 0.0;
    for (double x : xs) s += x;
    mean = s / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}
}  // namespace detail

/// Seeds base_seed .. base_seed + n_sims - 1. Results are reduced in seed
/// order, so the summary does not depend on the worker count.
inline MonteCarloSummary monte_carlo(const RunConfig& c, int n_sims, std::uint64_t base_seed, int workers = 1) {
    if (n_sims < 2) throw std::invalid_argument("monte_carlo needs n_sims >= 2");
    std::vector<QramEstimate> out(n_sims);
    if (workers <= 1) {
        for (int i = 0; i < n_sims; ++i) out[i] = run_once(c, base_seed + static_cast<std::uint64_t>(i));
    } else {
        std::atomic<int> next{0};
        std::exception_ptr err;
        std::mutex err_mu;
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int i = next++; i < n_sims; i = next++) {
                    try {
                        out[i] = run_once(c, base_seed + static_cast<std::uint64_t>(i));
                    } catch (...) {
                        std::lock_guard<std::mutex> lk(err_mu);
                        if (!err) err = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }

    MonteCarloSummary s;
    s.n_sims = n_sims;
    s.base_seed = base_seed;
    std::vector<double> fid, qt;
    for (const auto& e : out) {
        fid.push_back(e.tree_fidelity);
        qt.push_back(e.query_time);
    }
    detail::mean_and_stderr(fid, s.mean_fidelity, s.stderr_fidelity);
    detail::mean_and_stderr(qt, s.mean_query_time, s.stderr_query_time);
    const std::size_t L = out.front().per_layer_fidelity.size();
    s.mean_layer_fidelity.assign(L, 0.0);
    for (const auto& e : out)
        for (std::size_t k = 0; k < L; ++k) s.mean_layer_fidelity[k] += e.per_layer_fidelity[k];
    for (auto& v : s.mean_layer_fidelity) v /= n_sims;
    s.samples = std::move(out);
    return s;
}

}  // namespace qramsim

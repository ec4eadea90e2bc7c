#pragma once

// Event-timing simulation of GHZ distribution across one QRAM layer. Nothing
// here touches quantum states: the simulation records when pairs were
// heralded, how long each qubit idled in which memory, and which noisy CNOTs
// ran. The analytics turn that record into corner entries afterwards.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qramsim/ghz_analytics.hpp"
#include "qramsim/noise.hpp"
#include "qramsim/random.hpp"

namespace qramsim {

/// Durations in seconds, velocity in m/s, distance in m.
struct TimingModel {
    double single_qubit_gate = 32e-9;
    double qubit_init = 5e-6;
    double nuclear_cnot = 16e-6;
    double electronic_cnot = 29e-9;
    double photon_spin_interaction = 0.1e-9;
    double light_velocity = 2e8;
    double cavity_distance = 10e-6;
    double measurement = 0.0;

    double transit() const { return cavity_distance / light_velocity; }

    void validate() const {
        const double d[] = {single_qubit_gate, qubit_init, nuclear_cnot,    electronic_cnot,
                            photon_spin_interaction, cavity_distance, measurement};
        for (double x : d) {
            if (!(x >= 0.0)) throw InvalidParameter("timing durations must be >= 0");
        }
        if (!(light_velocity > 0.0)) throw InvalidParameter("light velocity must be > 0");
    }
};

/// Qubit reset, photon interaction at both ends, photon flight and herald return.
inline double attempt_cycle_duration(const TimingModel& t) {
    return t.qubit_init + 2.0 * t.photon_spin_interaction + 2.0 * t.transit();
}

enum class PlacementKind { random, top_layers };

struct PlacementStrategy {
    PlacementKind kind = PlacementKind::random;
    /// random: probability that a merge node is deterministic.
    /// top_layers: distribution levels strictly above this offset are deterministic.
    double param = 0.0;

    void validate() const {
        if (kind == PlacementKind::random) {
            detail::require_probability(param, "P_d");
        } else if (!(param >= 1.0)) {
            throw InvalidParameter("top_layers offset must be >= 1");
        }
    }
};

enum class PairKind { transfer, electron_only };

/// Idle times fed into the pair formulas. For transfer pairs t_* are electron
/// waits and tp_* nuclear waits before linking; for electron-only pairs both
/// are electron waits, before and after the herald reaches the node.
struct PairRecord {
    PairKind kind = PairKind::transfer;
    double created = 0.0;
    double t_L = 0.0, t_R = 0.0;
    double tp_L = 0.0, tp_R = 0.0;
};

struct CustodyInterval {
    double start = 0.0;
    double end = 0.0;
    MemoryType memory = MemoryType::nuclear;
};

struct LayerLedger {
    int layer = 1;
    int n_nodes = 1;
    std::vector<PairRecord> pairs;                         // one per link of the final chain
    std::vector<std::vector<CustodyInterval>> custody;     // one list per chain qubit
    std::vector<CnotEvent> cnot_events;
    double completion = 0.0;
    double extension_end = 0.0;
    bool extended = false;
    int merge_nodes = 0;
    int deterministic_nodes = 0;
    std::uint64_t epr_attempts = 0;
    std::uint64_t failed_merges = 0;

    double finish_time() const { return extended ? extension_end : completion; }
};

class SimulationLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimOptions {
    bool extend_with_qc_link = true;
    /// Let second-step EPR attempts start at time zero instead of after step one.
    bool overlap_td_steps = false;
    std::uint64_t max_epr_attempts = 4'000'000'000ULL;
};

namespace detail {

struct HeraldLatency {
    double left;   // first electron touched by the photon
    double right;  // second electron
};

inline HeraldLatency herald_latency(const TimingModel& t) {
    return {t.photon_spin_interaction + 2.0 * t.transit(), t.transit()};
}

inline double geometric_time(double p, double cycle, Rng& rng, LayerLedger& led, std::uint64_t cap) {
    const std::uint64_t k = sample_heralded_success(p, rng);
    led.epr_attempts += k;
    if (led.epr_attempts > cap) {
        throw SimulationLimitExceeded("layer " + std::to_string(led.layer) + " exceeded " + std::to_string(cap) +
                                      " entanglement attempts");
    }
    return static_cast<double>(k) * cycle;
}

/// Appends the QC link behind the last chain qubit.
inline void extend_layer(LayerLedger& led, const NoiseParams& p, const TimingModel& t, Rng& rng, const SimOptions& o) {
    const double cycle = attempt_cycle_duration(t);
    const auto lat = herald_latency(t);
    const double created = led.completion + geometric_time(p.eta, cycle, rng, led, o.max_epr_attempts);
    const double moved = created + t.electronic_cnot + t.measurement;
    led.extension_end = moved + t.single_qubit_gate;
    led.extended = true;
    PairRecord pr;
    pr.kind = PairKind::transfer;
    pr.created = created;
    pr.t_L = lat.left;
    pr.t_R = lat.right;
    led.pairs.push_back(pr);
    for (auto& list : led.custody) {
        if (list.empty()) continue;
        list.back().end = led.extension_end;
    }
    if (led.custody.empty()) {
        // single-node layer: the node qubit is the left end of the new pair
        led.custody.push_back({{moved, led.extension_end, MemoryType::nuclear}});
    }
    led.custody.push_back({{moved, led.extension_end, MemoryType::nuclear}});
}

}  // namespace detail

/// Two-step layer: transfer pairs on links 0, 2, 4, ... then electron pairs on
/// links 1, 3, ... joined through nuclear CNOTs.
inline LayerLedger simulate_layer_td(int layer, int n_nodes, const NoiseParams& p, const TimingModel& t, Rng& rng,
                                     const SimOptions& o = {}) {
    LayerLedger led;
    led.layer = layer;
    led.n_nodes = n_nodes;
    if (n_nodes < 1) throw std::invalid_argument("layer needs at least one node");
    if (n_nodes > 1 && n_nodes % 2 != 0) throw std::invalid_argument("two-step layer needs an even node count");
    const double cycle = attempt_cycle_duration(t);
    const auto lat = detail::herald_latency(t);
    const int links = n_nodes - 1;

    led.pairs.assign(links, PairRecord{});
    std::vector<double> nucleus_ready(n_nodes, 0.0);  // end of the transfer CNOT
    double step1_end = 0.0;
    for (int j = 0; j < links; j += 2) {
        const double created = detail::geometric_time(p.eta, cycle, rng, led, o.max_epr_attempts);
        auto& pr = led.pairs[j];
        pr.kind = PairKind::transfer;
        pr.created = created;
        pr.t_L = lat.left;
        pr.t_R = lat.right;
        const double moved = created + t.electronic_cnot;
        nucleus_ready[j] = nucleus_ready[j + 1] = moved;
        step1_end = std::max(step1_end, moved + t.measurement + t.single_qubit_gate);
    }

    led.custody.assign(n_nodes, {});
    const double step2_start = o.overlap_td_steps ? 0.0 : step1_end;
    double completion = step1_end;
    for (int j = 1; j < links; j += 2) {
        const double created = step2_start + detail::geometric_time(p.eta, cycle, rng, led, o.max_epr_attempts);
        const double gate_start = std::max({created, nucleus_ready[j], nucleus_ready[j + 1]});
        const double gate_end = gate_start + t.nuclear_cnot;
        auto& pr = led.pairs[j];
        pr.kind = PairKind::electron_only;
        pr.created = created;
        pr.t_L = lat.left + (gate_start - created);
        pr.t_R = lat.right + (gate_start - created);
        // nucleus j is the right end of transfer pair j-1, nucleus j+1 the left end of pair j+1
        led.pairs[j - 1].tp_R = gate_start - nucleus_ready[j];
        led.pairs[j + 1].tp_L = gate_start - nucleus_ready[j + 1];
        led.custody[j].push_back({gate_end, 0.0, MemoryType::nuclear});
        led.custody[j + 1].push_back({gate_end, 0.0, MemoryType::nuclear});
        led.cnot_events.push_back({j, CnotEventKind::two_step_even_link, p.p_e, p.p_n});
        completion = std::max(completion, gate_end + t.measurement + t.single_qubit_gate);
    }
    if (links >= 1) {
        led.custody[0].push_back({nucleus_ready[0], 0.0, MemoryType::nuclear});
        led.custody[n_nodes - 1].push_back({nucleus_ready[n_nodes - 1], 0.0, MemoryType::nuclear});
    } else {
        led.custody.clear();
    }
    led.completion = completion;
    for (auto& list : led.custody)
        for (auto& iv : list) iv.end = completion;

    led.extension_end = completion;
    if (o.extend_with_qc_link) detail::extend_layer(led, p, t, rng, o);
    return led;
}

/// Distribution level of merge node i: 1 + number of trailing zero bits.
inline int distribution_level(int node) { return std::countr_zero(static_cast<unsigned>(node)) + 1; }

/// Interior nodes that a placement marks deterministic, as a per-node mask.
inline std::vector<char> place_deterministic(int n_nodes, const PlacementStrategy& pl, Rng& rng) {
    pl.validate();
    std::vector<char> det(std::max(n_nodes, 0), 0);
    for (int i = 1; i + 1 < n_nodes; ++i) {
        if (pl.kind == PlacementKind::random) {
            det[i] = bernoulli(rng, pl.param) ? 1 : 0;
        } else {
            det[i] = distribution_level(i) > pl.param ? 1 : 0;
        }
    }
    return det;
}

namespace detail {

struct TsBuilder {
    const NoiseParams& p;
    const TimingModel& t;
    Rng& rng;
    const SimOptions& o;
    LayerLedger& led;
    const std::vector<char>& det;
    double cycle;
    std::vector<double> created;      // per link
    std::vector<double> merge_start;  // per node
    std::vector<double> merge_end;    // per node

    double probabilistic_duration() const {
        return 2.0 * t.photon_spin_interaction + 2.0 * t.transit() + t.measurement + t.single_qubit_gate;
    }

    double deterministic_duration() const {
        return t.electronic_cnot + t.measurement + t.nuclear_cnot + t.measurement + t.single_qubit_gate;
    }

    static int split_node(int a, int b) {
        int best = a + 1;
        int best_tz = -1;
        for (int i = a + 1; i < b; ++i) {
            const int tz = std::countr_zero(static_cast<unsigned>(i));
            if (tz > best_tz) {
                best_tz = tz;
                best = i;
            }
        }
        return best;
    }

    // Builds the fragment spanning nodes a..b starting at t0; returns ready time.
    double build(int a, int b, double t0) {
        if (b == a + 1) {
            created[a] = t0 + geometric_time(p.eta, cycle, rng, led, o.max_epr_attempts);
            return created[a];
        }
        const int mid = split_node(a, b);
        for (;;) {
            const double ready = std::max(build(a, mid, t0), build(mid, b, t0));
            if (det[mid]) {
                merge_start[mid] = ready;
                merge_end[mid] = ready + deterministic_duration();
                return merge_end[mid];
            }
            const double done = ready + probabilistic_duration();
            if (bernoulli(rng, p.p_link)) {
                merge_start[mid] = ready;
                merge_end[mid] = done;
                return done;
            }
            ++led.failed_merges;
            t0 = done;
        }
    }
};

}  // namespace detail

/// Stochastic layer: electron pairs on every link joined level by level up the
/// distribution tree; failed photonic merges regenerate both fragments.
inline LayerLedger simulate_layer_ts(int layer, int n_nodes, const NoiseParams& p, const TimingModel& t,
                                     const PlacementStrategy& pl, Rng& rng, const SimOptions& o = {}) {
    if (n_nodes < 1) throw std::invalid_argument("layer needs at least one node");
    if (!(p.p_link > 0.0)) throw InvalidParameter("p_link must be > 0 for the stochastic protocol");
    LayerLedger led;
    led.layer = layer;
    led.n_nodes = n_nodes;
    const auto det = place_deterministic(n_nodes, pl, rng);
    led.merge_nodes = std::max(n_nodes - 2, 0);
    for (char d : det) led.deterministic_nodes += d;

    const int links = n_nodes - 1;
    if (links >= 1) {
        detail::TsBuilder b{p,
                            t,
                            rng,
                            o,
                            led,
                            det,
                            attempt_cycle_duration(t),
                            std::vector<double>(links, 0.0),
                            std::vector<double>(n_nodes, 0.0),
                            std::vector<double>(n_nodes, 0.0)};
        const double completion = b.build(0, n_nodes - 1, 0.0);
        led.completion = completion;
        const auto lat = detail::herald_latency(t);

        led.pairs.assign(links, PairRecord{});
        for (int j = 0; j < links; ++j) {
            auto& pr = led.pairs[j];
            pr.kind = PairKind::electron_only;
            pr.created = b.created[j];
            pr.t_L = lat.left;
            pr.t_R = lat.right;
            pr.tp_L = j == 0 ? 0.0 : b.merge_start[j] - b.created[j];
            pr.tp_R = j + 1 == n_nodes - 1 ? 0.0 : b.merge_start[j + 1] - b.created[j];
        }
        led.custody.assign(n_nodes, {});
        led.custody[0].push_back({b.created[0], completion, MemoryType::electron});
        led.custody[n_nodes - 1].push_back({b.created[links - 1], completion, MemoryType::electron});
        for (int i = 1; i + 1 < n_nodes; ++i) {
            const MemoryType m = det[i] ? MemoryType::nuclear : MemoryType::electron;
            led.custody[i].push_back({b.merge_end[i], completion, m});
            if (det[i]) led.cnot_events.push_back({i, CnotEventKind::ts_deterministic, p.p_e, p.p_n});
        }
    }
    led.extension_end = led.completion;
    if (o.extend_with_qc_link) detail::extend_layer(led, p, t, rng, o);
    return led;
}

/// Turns a ledger into the analytic chain. Empty when the layer holds no pair.
inline LinkChain chain_from_ledger(const LayerLedger& led, const NoiseParams& p,
                                   ElectronPairSign sign = ElectronPairSign::as_printed) {
    LinkChain chain;
    for (const auto& pr : led.pairs) {
        chain.pairs.push_back(pr.kind == PairKind::transfer ? pair_after_transfer(pr.t_L, pr.t_R, pr.tp_L, pr.tp_R, p)
                                                            : pair_electron_only(pr.t_L, pr.t_R, pr.tp_L, pr.tp_R, p, sign));
    }
    chain.cnot_events = led.cnot_events;
    for (const auto& list : led.custody) {
        std::vector<IdleInterval> ivs;
        for (const auto& c : list) ivs.push_back({c.end - c.start, t1_of(p, c.memory), t2_of(p, c.memory)});
        chain.final_idle.push_back(std::move(ivs));
    }
    return chain;
}

enum class Protocol { td, ts };

inline std::string to_string(Protocol p) { return p == Protocol::td ? "td" : "ts"; }

struct QramRunResult {
    int n_layers = 0;
    std::uint64_t seed = 0;
    std::vector<LayerLedger> layers;
    std::vector<LinkChain> chains;
    double query_time = 0.0;
};

/// Runs layers 1..n_layers (layer k has 2^(k-1) nodes) off one generator in
/// layer order.
inline QramRunResult simulate_qram(Protocol protocol, int n_layers, const NoiseParams& p, const TimingModel& t,
                                   const PlacementStrategy& pl, std::uint64_t seed, const SimOptions& o = {},
                                   ElectronPairSign sign = ElectronPairSign::as_printed) {
    if (n_layers < 1) throw std::invalid_argument("n_layers must be >= 1");
    if (n_layers > 30) throw std::invalid_argument("n_layers must be <= 30");
    p.validate();
    t.validate();
    if (protocol == Protocol::ts) pl.validate();
    Rng rng(seed);
    QramRunResult r;
    r.n_layers = n_layers;
    r.seed = seed;
    for (int k = 1; k <= n_layers; ++k) {
        const int nodes = 1 << (k - 1);
        LayerLedger led = protocol == Protocol::td ? simulate_layer_td(k, nodes, p, t, rng, o)
                                                   : simulate_layer_ts(k, nodes, p, t, pl, rng, o);
        r.query_time = std::max(r.query_time, led.finish_time());
        r.chains.push_back(chain_from_ledger(led, p, sign));
        r.layers.push_back(std::move(led));
    }
    return r;
}

}  // namespace qramsim

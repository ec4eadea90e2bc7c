#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "qramsim/protocol_sim.hpp"

using namespace qramsim;
using Catch::Approx;

namespace {
SimOptions no_extension() {
    SimOptions o;
    o.extend_with_qc_link = false;
    return o;
}

void check_ledger(const LayerLedger& led) {
    const std::size_t qubits = led.pairs.size() + 1;
    if (led.pairs.empty()) return;
    REQUIRE(led.custody.size() == qubits);
    for (const auto& list : led.custody) {
        REQUIRE_FALSE(list.empty());
        for (std::size_t k = 0; k < list.size(); ++k) {
            CHECK(list[k].start <= list[k].end);
            if (k) CHECK(list[k - 1].end <= list[k].start);
        }
        CHECK(list.back().end == Approx(led.finish_time()).epsilon(1e-15));
        CHECK(list.back().end <= led.finish_time());
    }
    for (const auto& pr : led.pairs) {
        CHECK(pr.t_L >= 0.0);
        CHECK(pr.t_R >= 0.0);
        CHECK(pr.tp_L >= 0.0);
        CHECK(pr.tp_R >= 0.0);
        CHECK(pr.created <= led.finish_time());
    }
}
}  // namespace

TEST_CASE("attempt cycle duration", "[protocol]") {
    TimingModel t;
    CHECK(attempt_cycle_duration(t) == Approx(5.0002001e-6).epsilon(1e-12));
    t.qubit_init = 0.0;
    t.cavity_distance = 0.0;
    CHECK(attempt_cycle_duration(t) == Approx(0.2e-9).epsilon(1e-12));
    TimingModel a, b;
    b.cavity_distance = 2.0 * a.cavity_distance;
    CHECK(attempt_cycle_duration(b) - attempt_cycle_duration(a) == Approx(2.0 * a.transit()).epsilon(1e-6));
    t.single_qubit_gate = -1.0;
    CHECK_THROWS_AS(t.validate(), InvalidParameter);
}

TEST_CASE("TD single link with certain heralding", "[protocol][td]") {
    TimingModel t;
    auto p = NoiseParams::noiseless();
    Rng rng(1);
    auto led = simulate_layer_td(2, 2, p, t, rng, no_extension());
    REQUIRE(led.pairs.size() == 1);
    CHECK(led.pairs[0].kind == PairKind::transfer);
    CHECK(led.completion == Approx(attempt_cycle_duration(t) + t.electronic_cnot + t.single_qubit_gate).epsilon(1e-12));
    CHECK(led.cnot_events.empty());
    check_ledger(led);
}

TEST_CASE("TD lockstep when eta = 1", "[protocol][td]") {
    TimingModel t;
    auto p = NoiseParams::noiseless();
    Rng rng(9);
    auto led = simulate_layer_td(5, 16, p, t, rng, no_extension());
    REQUIRE(led.pairs.size() == 15);
    for (std::size_t j = 2; j < led.pairs.size(); ++j) {
        CHECK(led.pairs[j].created == led.pairs[j - 2].created);
        CHECK(led.pairs[j].t_L == led.pairs[j - 2].t_L);
    }
    // interior transfer pairs see waits on both nuclei, the outermost ones on one side only
    CHECK(led.pairs[2].tp_L == led.pairs[2].tp_R);
    CHECK(led.pairs[0].tp_L == 0.0);
    CHECK(led.pairs[14].tp_R == 0.0);
    CHECK(led.epr_attempts == 15);
    check_ledger(led);
}

TEST_CASE("TD even-link CNOT event count", "[protocol][td]") {
    TimingModel t;
    NoiseParams p;
    p.eta = 0.6;
    Rng rng(4);
    for (int k = 1; k <= 8; ++k) {
        const int n = 1 << (k - 1);
        auto led = simulate_layer_td(k, n, p, t, rng, no_extension());
        const int links = n - 1;
        const int even_links = links - (links + 1) / 2;
        CHECK(static_cast<int>(led.cnot_events.size()) == even_links);
        for (const auto& e : led.cnot_events) CHECK(e.kind == CnotEventKind::two_step_even_link);
        check_ledger(led);
    }
}

TEST_CASE("TD completion follows the max of geometric retries", "[protocol][td]") {
    TimingModel t;
    NoiseParams p;
    p.eta = 0.9;
    const int n_nodes = 2048;
    const int reps = 200;
    const double cycle = attempt_cycle_duration(t);

    double sim = 0.0;
    for (int s = 0; s < reps; ++s) {
        Rng rng(1000 + s);
        sim += simulate_layer_td(12, n_nodes, p, t, rng, no_extension()).completion;
    }
    sim /= reps;

    // brute force with an unrelated generator and the standard geometric law
    std::mt19937 g(77);
    std::geometric_distribution<int> geo(0.9);
    auto max_of = [&](int m) {
        int best = 0;
        for (int i = 0; i < m; ++i) best = std::max(best, geo(g) + 1);
        return best;
    };
    double brute = 0.0;
    const int brute_reps = 4000;
    for (int s = 0; s < brute_reps; ++s) brute += cycle * (max_of(1024) + max_of(1023));
    brute /= brute_reps;
    brute += t.electronic_cnot + t.single_qubit_gate + t.nuclear_cnot + t.single_qubit_gate;

    CHECK(sim == Approx(brute).epsilon(0.03));
}

TEST_CASE("TD step overlap option", "[protocol][td]") {
    TimingModel t;
    NoiseParams p;
    p.eta = 0.5;
    SimOptions seq = no_extension(), ovl = no_extension();
    ovl.overlap_td_steps = true;
    double a = 0, b = 0;
    for (int s = 0; s < 50; ++s) {
        Rng r1(s), r2(s);
        a += simulate_layer_td(7, 64, p, t, r1, seq).completion;
        b += simulate_layer_td(7, 64, p, t, r2, ovl).completion;
    }
    CHECK(b < a);
}

TEST_CASE("placement of deterministic nodes", "[protocol][ts]") {
    Rng rng(3);
    CHECK(distribution_level(1) == 1);
    CHECK(distribution_level(2) == 2);
    CHECK(distribution_level(32) == 6);
    auto top = place_deterministic(64, {PlacementKind::top_layers, 4}, rng);
    const int count = static_cast<int>(std::count(top.begin(), top.end(), 1));
    CHECK(std::abs(count - 2) <= 1);
    CHECK(top[16] == 1);
    CHECK(top[32] == 1);
    CHECK(top[8] == 0);
    auto none = place_deterministic(64, {PlacementKind::random, 0.0}, rng);
    CHECK(std::count(none.begin(), none.end(), 1) == 0);
    auto all = place_deterministic(64, {PlacementKind::random, 1.0}, rng);
    CHECK(std::count(all.begin(), all.end(), 1) == 62);
    CHECK(all.front() == 0);
    CHECK(all.back() == 0);
    CHECK_THROWS_AS(place_deterministic(8, {PlacementKind::top_layers, 0.0}, rng), InvalidParameter);
    CHECK_THROWS_AS(place_deterministic(8, {PlacementKind::random, 1.5}, rng), InvalidParameter);
}

TEST_CASE("TS failure-free schedule", "[protocol][ts]") {
    TimingModel t;
    auto p = NoiseParams::noiseless();
    const double merge = 2 * t.photon_spin_interaction + 2 * t.transit() + t.measurement + t.single_qubit_gate;
    for (int k : {2, 3, 5, 8}) {
        const int n = 1 << (k - 1);
        Rng rng(k);
        auto led = simulate_layer_ts(k, n, p, t, {PlacementKind::random, 0.0}, rng, no_extension());
        const int depth = static_cast<int>(std::ceil(std::log2(n - 1)));  // merge levels over n - 1 links
        CHECK(led.completion == Approx(attempt_cycle_duration(t) + depth * merge).epsilon(1e-12));
        CHECK(led.failed_merges == 0);
        CHECK(led.cnot_events.empty());
        check_ledger(led);
    }
}

TEST_CASE("TS deterministic nodes log events and use nuclear memory", "[protocol][ts]") {
    TimingModel t;
    NoiseParams p;
    p.p_e = p.p_n = 1e-3;
    p.eta = 0.7;
    p.p_link = 0.7;
    Rng rng(8);
    auto led = simulate_layer_ts(7, 64, p, t, {PlacementKind::top_layers, 3}, rng, no_extension());
    CHECK(led.deterministic_nodes == 7);
    CHECK(static_cast<int>(led.cnot_events.size()) == 7);
    for (const auto& e : led.cnot_events) {
        CHECK(e.kind == CnotEventKind::ts_deterministic);
        CHECK(led.custody[e.node].front().memory == MemoryType::nuclear);
    }
    CHECK(led.custody[1].front().memory == MemoryType::electron);
    CHECK(led.custody[0].front().memory == MemoryType::electron);
    check_ledger(led);
}

TEST_CASE("TS resets keep the ledger consistent", "[protocol][ts]") {
    TimingModel t;
    NoiseParams p;
    p.eta = 0.5;
    p.p_link = 0.5;
    std::uint64_t failures = 0;
    for (int s = 0; s < 30; ++s) {
        Rng rng(s);
        auto led = simulate_layer_ts(6, 32, p, t, {PlacementKind::random, 0.2}, rng);
        failures += led.failed_merges;
        check_ledger(led);
        // layer pairs precede completion; the QC extension pair precedes the layer's finish
        for (std::size_t j = 0; j < led.pairs.size(); ++j) CHECK(led.pairs[j].created <= led.finish_time());
    }
    CHECK(failures > 0);
}

TEST_CASE("QRAM runs are deterministic", "[protocol]") {
    TimingModel t;
    NoiseParams p;
    p.eta = 0.7;
    p.p_link = 0.7;
    for (auto proto : {Protocol::td, Protocol::ts}) {
        auto a = simulate_qram(proto, 6, p, t, {PlacementKind::random, 0.3}, 42);
        auto b = simulate_qram(proto, 6, p, t, {PlacementKind::random, 0.3}, 42);
        CHECK(a.query_time == b.query_time);
        REQUIRE(a.layers.size() == b.layers.size());
        for (std::size_t k = 0; k < a.layers.size(); ++k) {
            CHECK(a.layers[k].epr_attempts == b.layers[k].epr_attempts);
            REQUIRE(a.chains[k].pairs.size() == b.chains[k].pairs.size());
            for (std::size_t j = 0; j < a.chains[k].pairs.size(); ++j) {
                CHECK(a.chains[k].pairs[j].mu == b.chains[k].pairs[j].mu);
                CHECK(a.chains[k].pairs[j].nu == b.chains[k].pairs[j].nu);
            }
        }
    }
}

TEST_CASE("QRAM run structure", "[protocol]") {
    TimingModel t;
    auto p = NoiseParams::noiseless();
    auto one = simulate_qram(Protocol::td, 1, p, t, {}, 5);
    REQUIRE(one.layers.size() == 1);
    CHECK(one.query_time == Approx(attempt_cycle_duration(t) + t.electronic_cnot + t.single_qubit_gate).epsilon(1e-12));
    auto r = simulate_qram(Protocol::td, 5, p, t, {}, 5);
    double worst = 0.0;
    for (std::size_t k = 0; k < r.layers.size(); ++k) {
        CHECK(r.layers[k].n_nodes == 1 << k);
        CHECK(r.chains[k].pairs.size() == static_cast<std::size_t>(1 << k));  // links plus the QC pair
        worst = std::max(worst, r.layers[k].finish_time());
    }
    CHECK(r.query_time == worst);
    CHECK_THROWS_AS(simulate_qram(Protocol::td, 0, p, t, {}, 5), std::invalid_argument);
}

TEST_CASE("attempt cap stops runaway layers", "[protocol]") {
    TimingModel t;
    NoiseParams p;
    p.eta = 0.01;
    SimOptions o;
    o.max_epr_attempts = 50;
    Rng rng(1);
    CHECK_THROWS_AS(simulate_layer_td(6, 32, p, t, rng, o), SimulationLimitExceeded);
}

TEST_CASE("TS query time grows polynomially with layer size", "[protocol][ts]") {
    TimingModel t;
    NoiseParams p;
    p.eta = 0.5;
    p.p_link = 0.5;
    auto mean_time = [&](int k) {
        double s = 0;
        for (int i = 0; i < 40; ++i) {
            Rng rng(500 + i);
            s += simulate_layer_ts(k, 1 << (k - 1), p, t, {PlacementKind::random, 0.0}, rng, no_extension()).completion;
        }
        return s / 40;
    };
    const double t6 = mean_time(6), t8 = mean_time(8);
    // quadrupling N costs well under N^2 growth
    CHECK(t8 / t6 < 16.0);
    CHECK(t8 > t6);
}

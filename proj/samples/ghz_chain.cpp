// Simulate one TD layer and print its noise ledger and GHZ fidelity.

#include <cstdio>
#include <cstdlib>

#include "qramsim/qram_model.hpp"

int main(int argc, char** argv) {
    using namespace qramsim;
    const int layer = argc > 1 ? std::atoi(argv[1]) : 4;
    const NoiseParams p = NoiseParams::from_electron_times(2.0, 0.1, 1e-3, 1e-3, 0.9);
    const TimingModel t;
    Rng rng(7);
    const auto led = simulate_layer_td(layer, 1 << (layer - 1), p, t, rng, SimOptions{});
    const auto chain = chain_from_ledger(led, p);

    std::printf("layer %d: %d nodes, %zu pairs, %zu CNOT events, %llu EPR attempts\n", layer, led.n_nodes,
                led.pairs.size(), chain.cnot_events.size(), static_cast<unsigned long long>(led.epr_attempts));
    for (std::size_t j = 0; j < chain.pairs.size(); ++j)
        std::printf("  link %2zu  mu=%.3e  nu=%.6f\n", j, chain.pairs[j].mu, chain.pairs[j].nu);
    const auto c = evaluate_chain(chain);
    std::printf("completion %.3f us, GHZ fidelity %.6f\n", led.finish_time() * 1e6, ghz_fidelity(c));
}

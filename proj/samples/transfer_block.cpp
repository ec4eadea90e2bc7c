// One heralded pair moved onto nuclear spins: closed form vs dense oracle.

#include <cstdio>

#include "qramsim/oracle.hpp"

int main() {
    using namespace qramsim;
    NoiseParams p = NoiseParams::from_electron_times(2.0, 0.1, 0.01, 0.01, 0.9);
    TransferTimes t{20e-6, 5e-6, 150e-6, 150e-6};

    const auto closed = pair_after_transfer(t.t_eL, t.t_eR, t.t_nL, t.t_nR, p);
    const auto oracle = pair_params_of(run_transfer_block_oracle(p, t));
    std::printf("closed form: mu=%.10f nu=%.10f\n", closed.mu, closed.nu);
    std::printf("oracle:      mu=%.10f nu=%.10f\n", oracle.mu, oracle.nu);
    std::printf("pair fidelity %.8f\n", (2.0 * (1.0 - closed.mu) + 2.0 * closed.nu) / 4.0);
}

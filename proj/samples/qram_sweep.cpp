// Small fidelity/query-time sweep over QRAM size, written as CSV to stdout.

#include <iostream>

#include "qramsim/sweep.hpp"

int main() {
    using namespace qramsim;
    SweepConfig c;
    c.protocol = Protocol::td;
    c.layers = {2, 3, 4, 5, 6};
    c.eta = {0.5, 0.9};
    c.T1_e = {2.0};
    c.T2_e = {0.1};
    c.cnot_error = {1e-3};
    c.n_sims = 20;
    c.base_seed = 42;
    std::cout << to_csv(run_sweep(c));
}

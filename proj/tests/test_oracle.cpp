#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "qramsim/validation_report.hpp"

using namespace qramsim;
using Catch::Approx;

TEST_CASE("transfer block without noise gives phi+", "[oracle]") {
    auto s = run_transfer_block_oracle(TransferDecay{});
    CHECK(s.matrix().isApprox(DenseState::bell_phi_plus().matrix(), 1e-14));
    auto pp = pair_params_of(s);
    CHECK(pp.mu == Approx(0.0).margin(1e-15));
    CHECK(pp.nu == Approx(1.0).margin(1e-15));
}

TEST_CASE("transfer block with gate error only", "[oracle]") {
    TransferDecay d;
    d.p_e = 0.01;
    auto pp = pair_params_of(run_transfer_block_oracle(d));
    CHECK(pp.mu == Approx(0.00995).margin(1e-14));
    CHECK(pp.nu == Approx(0.96059601).margin(1e-14));
}

TEST_CASE("transfer block with electron dephasing for T2 ln 2", "[oracle]") {
    NoiseParams p;
    p.T1_e = std::numeric_limits<double>::infinity();
    TransferTimes t;
    t.t_eL = p.T2_e * std::log(2.0);
    auto pp = pair_params_of(run_transfer_block_oracle(p, t));
    CHECK(pp.mu == Approx(0.0).margin(1e-14));
    CHECK(pp.nu == Approx(0.5).margin(1e-14));
}

TEST_CASE("transfer block, mixed noise, frozen oracle value", "[oracle]") {
    TransferDecay d{0.01, 0.02, 0.003, 0.004, 0.05, 0.03, 0.002, 0.001, 0.01};
    auto s = run_transfer_block_oracle(d);
    auto pp = pair_params_of(s);
    CHECK(pp.mu == Approx(0.02777258510576).margin(1e-12));
    CHECK(pp.nu == Approx(0.86624358405051).margin(1e-12));
    const auto closed = pair_state(pair_after_transfer(d));
    CHECK(max_entry_deviation(s, closed) < 1e-12);
}

TEST_CASE("transfer grid sample agrees with the closed form", "[oracle]") {
    const double levels[3] = {0.0, 0.01, 0.1};
    double worst = 0.0;
    for (int code = 0; code < 6561; code += 37) {
        int c = code;
        double e[8];
        for (double& x : e) {
            x = levels[c % 3];
            c /= 3;
        }
        TransferDecay d{e[0], e[1], e[2], e[3], e[4], e[5], e[6], e[7], 0.01};
        worst = std::max(worst, max_entry_deviation(run_transfer_block_oracle(d), pair_state(pair_after_transfer(d))));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("electron-pair sign adjudication", "[oracle]") {
    const auto a = adjudicate_electron_pair_sign(0.01);
    CHECK(a.mu_oracle == Approx(0.01960299).margin(1e-12));
    CHECK(a.mu_printed == Approx(0.01970299).margin(1e-12));
    CHECK(a.mu_consistent == Approx(0.01960299).margin(1e-12));
    CHECK(a.verdict() == ElectronPairSign::consistent);
}

TEST_CASE("noiseless linking gives a perfect GHZ state", "[oracle]") {
    const auto bell = DenseState::bell_phi_plus();
    LinkOracleOptions opt;
    auto two = run_link_oracle({bell, bell, bell}, LinkMode::two_step, opt);
    CHECK(two.n_qubits() == 4);
    CHECK(two.ghz_fidelity() == Approx(1.0).margin(1e-13));
    auto prob = run_link_oracle({bell, bell, bell}, LinkMode::ts_probabilistic, opt);
    CHECK(prob.n_qubits() == 4);
    CHECK(prob.ghz_fidelity() == Approx(1.0).margin(1e-13));
    auto det = run_link_oracle({bell, bell}, LinkMode::ts_deterministic, opt);
    CHECK(det.n_qubits() == 3);
    CHECK(det.ghz_fidelity() == Approx(1.0).margin(1e-13));
}

TEST_CASE("linking of mu-nu pairs follows the product pattern", "[oracle]") {
    const PairParams pp{0.01, 0.96};
    const auto s = pair_state(pp);
    auto g = run_link_oracle({s, s, s}, LinkMode::two_step, LinkOracleOptions{});
    CHECK(2.0 * g(0, 0).real() == Approx(0.970299).margin(1e-12));
    CHECK(2.0 * g(0, 15).real() == Approx(0.884736).margin(1e-12));
    CHECK(g.ghz_fidelity() == Approx(0.9275175).margin(1e-9));
}

TEST_CASE("CNOT corner factors from the oracle", "[oracle]") {
    SECTION("two-step: coherence exact, diagonal above h at second order") {
        const auto f = oracle_cnot_factors(CnotEventKind::two_step_even_link, 0.01, 0.01);
        const double q = 0.005;
        CHECK(f.diagonal == Approx((1 - q) * (1 - q) * ((1 - q) * (1 - q) + q * q)).margin(1e-14));
        CHECK(f.coherence == Approx(0.99 * 0.99 * (0.99 + 0.00005)).margin(1e-14));
        CHECK(f.diagonal > h_factor(0.01));
        CHECK(f.diagonal - h_factor(0.01) < 1e-4);
    }
    SECTION("TS deterministic matches h-tilde exactly") {
        const auto f = oracle_cnot_factors(CnotEventKind::ts_deterministic, 0.01, 0.01);
        CHECK(f.diagonal == Approx(0.985075).margin(1e-14));
        CHECK(f.coherence == Approx(0.965447505).margin(1e-14));
    }
    SECTION("unequal rates match the generalized factors") {
        const auto f = oracle_cnot_factors(CnotEventKind::ts_deterministic, 0.01, 0.03);
        const auto c = cnot_event_factors({1, CnotEventKind::ts_deterministic, 0.01, 0.03});
        CHECK(f.diagonal == Approx(c.diagonal).margin(1e-14));
        CHECK(f.coherence == Approx(c.coherence).margin(1e-14));
    }
}

TEST_CASE("linking respects the qubit cap", "[oracle]") {
    const auto bell = DenseState::bell_phi_plus();
    std::vector<DenseState> pairs(9, bell);
    LinkOracleOptions opt;
    CHECK_THROWS_AS(run_link_oracle(pairs, LinkMode::two_step, opt), QubitCapExceeded);
    CHECK_THROWS_AS(run_link_oracle({bell, bell}, LinkMode::two_step, opt), std::invalid_argument);
}

TEST_CASE("linking suite converges quadratically", "[oracle]") {
    for (const auto& sc : standard_scenarios(0.05)) {
        const auto c = compare_scenario(sc);
        INFO(sc.name);
        CHECK(c.gap() <= 1e-2);
        CHECK(c.ratio() >= 3.5);
        CHECK(c.f_analytic <= c.f_oracle);
    }
}

TEST_CASE("linking suite frozen oracle fidelities", "[oracle]") {
    const auto sc = standard_scenarios(0.05);
    const double expected[4] = {0.542219150956124, 0.774722620563447, 0.692704732481558, 0.588659286279878};
    for (std::size_t i = 0; i < 4; ++i) CHECK(oracle_state(sc[i]).ghz_fidelity() == Approx(expected[i]).margin(1e-12));
}

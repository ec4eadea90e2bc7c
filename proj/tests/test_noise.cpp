#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "qramsim/noise.hpp"
#include "qramsim/random.hpp"

using namespace qramsim;
using Catch::Approx;

TEST_CASE("eps limits and closed values", "[noise]") {
    CHECK(eps(0.0, 1.0) == 0.0);
    CHECK(eps(1e9, 1e-3) == Approx(1.0));
    CHECK(eps(std::log(2.0) * 3.0, 3.0) == Approx(0.5).margin(1e-15));
    CHECK(eps(5.0, std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(eps(0.3, 2.0) + eps_bar(0.3, 2.0) == 1.0);
}

TEST_CASE("eps_bar is multiplicative over intervals", "[noise]") {
    for (double t1 : {1e-6, 0.01, 0.4})
        for (double t2 : {3e-5, 0.2}) CHECK(eps_bar(t1 + t2, 0.1) == Approx(eps_bar(t1, 0.1) * eps_bar(t2, 0.1)).epsilon(1e-12));
}

TEST_CASE("eps is monotone", "[noise]") {
    CHECK(eps(0.1, 1.0) < eps(0.2, 1.0));
    CHECK(eps(0.1, 1.0) > eps(0.1, 2.0));
}

TEST_CASE("eps rejects bad times", "[noise]") {
    CHECK_THROWS_AS(eps(-1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(eps(1.0, 0.0), InvalidParameter);
    CHECK_THROWS_AS(eps(1.0, -2.0), InvalidParameter);
}

TEST_CASE("f, g, h factors", "[noise]") {
    CHECK(f_factor(0, 0) == 1.0);
    CHECK(f_factor(0.5, 0.5) == Approx(0.5));
    CHECK(f_factor(1, 1) == Approx(1.0));
    CHECK(g_factor(0, 0) == 1.0);
    CHECK(g_factor(0.1, 0.2) == Approx(0.72));
    CHECK(g_factor(1.0, 0.3) == 0.0);
    CHECK(h_factor(0) == 1.0);
    CHECK(h_factor(0.01) == Approx(0.980075).margin(1e-12));
    CHECK(h_factor(0.02) == Approx(0.9603).margin(1e-12));
    CHECK(h_tilde_factor(0) == 1.0);
    CHECK(h_tilde_factor(0.01) == Approx(0.985075).margin(1e-12));
    CHECK(h_tilde_factor(0.1) == Approx(0.8575).margin(1e-12));
}

TEST_CASE("Kraus sets", "[noise]") {
    SECTION("zero dephasing is the identity alone") {
        auto k = kraus_set(ChannelKind::dephasing, 0.0);
        REQUIRE(k.operators.size() == 1);
        CHECK(k.completeness_error() < 1e-15);
    }
    SECTION("depolarizing has four weighted operators") {
        auto k = kraus_set(ChannelKind::depolarizing, 0.3);
        REQUIRE(k.operators.size() == 4);
        CHECK(std::norm(k.operators[0][0]) == Approx(0.7));
        for (int i = 1; i < 4; ++i) {
            double w = 0;
            for (auto x : k.operators[i]) w += std::norm(x);
            CHECK(w / 2.0 == Approx(0.1));
        }
        CHECK(k.completeness_error() < 1e-14);
    }
    SECTION("full damping maps |1> to |0>") {
        auto k = kraus_set(ChannelKind::damping, 1.0);
        REQUIRE(k.operators.size() == 2);
        const Mat2& m = k.operators[1];
        CHECK(m[1] == cplx(1.0, 0.0));
        CHECK(m[0] == cplx(0.0, 0.0));
        CHECK(k.completeness_error() < 1e-15);
    }
    SECTION("every kind is complete") {
        for (auto kind : {ChannelKind::dephasing, ChannelKind::damping, ChannelKind::depolarizing})
            for (double p : {0.0, 0.01, 0.37, 1.0}) CHECK(kraus_set(kind, p).completeness_error() < 1e-14);
    }
    CHECK_THROWS_AS(kraus_set(ChannelKind::damping, 1.5), InvalidParameter);
    CHECK_THROWS_AS(kraus_set(ChannelKind::dephasing, -0.1), InvalidParameter);
}

TEST_CASE("noise parameters", "[noise]") {
    auto p = NoiseParams::from_electron_times(2.0, 0.1, 1e-3, 2e-3, 0.8);
    CHECK(p.T1_n == Approx(200.0));
    CHECK(p.T2_n == Approx(10.0));
    CHECK(p.p_link == 0.8);
    CHECK_NOTHROW(p.validate());
    p.eta = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p = NoiseParams{};
    p.T2_e = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    CHECK_NOTHROW(NoiseParams::noiseless().validate());
}

TEST_CASE("heralded success sampling", "[random]") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) CHECK(sample_heralded_success(1.0, rng) == 1);
    Rng a(5), b(5);
    for (int i = 0; i < 50; ++i) CHECK(sample_heralded_success(0.3, a) == sample_heralded_success(0.3, b));
    Rng g(2024);
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto k = sample_heralded_success(0.5, g);
        REQUIRE(k >= 1);
        sum += static_cast<double>(k);
    }
    CHECK(sum / n == Approx(2.0).margin(0.05));
    CHECK_THROWS_AS(sample_heralded_success(0.0, g), InvalidParameter);
    CHECK_THROWS_AS(sample_heralded_success(1.2, g), InvalidParameter);
}

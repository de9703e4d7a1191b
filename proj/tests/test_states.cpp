#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qphase/states.hpp"

using namespace qphase;

TEST_CASE("input state validates and renormalizes") {
    CHECK_THROWS_AS(InputState(2, {0.5, 0.5}), ContractError);          // wrong length
    CHECK_THROWS_AS(InputState(1, {0.8, 0.1}), ContractError);          // sum far from 1
    CHECK_THROWS_AS(InputState(1, {1.5, -0.5}), ContractError);         // negative weight
    CHECK_THROWS_AS(InputState(-1, {}), ContractError);

    // Within 1e-12 of the simplex: accepted and renormalized.
    InputState nudged(1, {0.5 + 4e-13, 0.5});
    CHECK(nudged.weight(0) + nudged.weight(1) == doctest::Approx(1.0).epsilon(1e-15));

    // Beyond the tolerance: rejected.
    CHECK_THROWS_AS(InputState(1, {0.5 + 1e-10, 0.5}), ContractError);
}

TEST_CASE("presets") {
    auto noon = preset_state(StateKind::Noon, 4);
    CHECK(noon.weights() == std::vector<double>{0.5, 0, 0, 0, 0.5});

    auto twin = preset_state(StateKind::TwinFock, 4);
    CHECK(twin.weights() == std::vector<double>{0, 0, 1, 0, 0});
    CHECK_THROWS_AS(preset_state(StateKind::TwinFock, 5), ContractError);

    PresetParams two;
    two.m = 1;
    two.p = 0.3;
    auto tc = preset_state(StateKind::TwoComponent, 5, two);
    CHECK(tc.weight(1) == doctest::Approx(0.3));
    CHECK(tc.weight(5) == doctest::Approx(0.7));
    CHECK(tc.weight(0) == 0.0);
    CHECK(tc.weight(2) == 0.0);

    PresetParams sym;
    sym.m = 1;
    auto s = preset_state(StateKind::SymmetricTwoComponent, 4, sym);
    CHECK(s.weight(1) == 0.5);
    CHECK(s.weight(3) == 0.5);

    auto uniform = preset_state(StateKind::Uniform, 3);
    for (int k = 0; k <= 3; ++k) CHECK(uniform.weight(k) == doctest::Approx(0.25));

    // Holland-Burnett weights are even-index only and sum to 1.
    auto hb = preset_state(StateKind::HollandBurnett, 6);
    double sum = 0.0;
    for (int k = 0; k <= 6; ++k) {
        if (k % 2 == 1) CHECK(hb.weight(k) == 0.0);
        sum += hb.weight(k);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(preset_state(StateKind::TwoComponent, 5, {}), ContractError);
    CHECK_THROWS_AS(preset_state(StateKind::Noon, 0), ContractError);
}

TEST_CASE("binomials match the exact integer oracle through n=60") {
    for (int n = 0; n <= 60; ++n) {
        for (int k = 0; k <= n; ++k) {
            const double exact = static_cast<double>(oracles::exact_binomial(n, k));
            CHECK(binomial(n, k) == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("branch coefficient closed form") {
    // No-loss branch is eta_a^k eta_b^(n-k).
    CHECK(branch_coefficient(2, 0, 0, 3, LossModel(0.9, 0.9)) ==
          doctest::Approx(0.9 * 0.9 * 0.9).epsilon(1e-14));
    // A single photon lost from arm a with probability 1-eta_a.
    CHECK(branch_coefficient(1, 1, 0, 1, LossModel(0.9, 1.0)) ==
          doctest::Approx(0.1).epsilon(1e-14));
    // Hand-evaluated mixed-loss case, cross-checked with the exact-rational
    // oracle.
    const double expected = oracles::rational_branch_coefficient(2, 1, 1, 4, 4, 5, 7, 10);
    CHECK(expected == doctest::Approx(0.02688).epsilon(1e-15));
    CHECK(branch_coefficient(2, 1, 1, 4, LossModel(0.8, 0.7)) ==
          doctest::Approx(expected).epsilon(1e-13));

    CHECK_THROWS_AS(branch_coefficient(2, 3, 0, 4, LossModel(0.9, 0.9)), ContractError);
    CHECK_THROWS_AS(branch_coefficient(2, 0, 3, 4, LossModel(0.9, 0.9)), ContractError);
}

TEST_CASE("branch coefficients against the rational oracle on random inputs") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> n_dist(1, 12);
    std::uniform_int_distribution<long> frac(0, 10);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = n_dist(rng);
        const long pa = frac(rng), pb = frac(rng);
        const LossModel loss(pa / 10.0, pb / 10.0);
        std::uniform_int_distribution<int> k_dist(0, n);
        const int k = k_dist(rng);
        std::uniform_int_distribution<int> l_dist(0, k), m_dist(0, n - k);
        const int l = l_dist(rng), m = m_dist(rng);
        const double expected = oracles::rational_branch_coefficient(k, l, m, n, pa, 10, pb, 10);
        CHECK(branch_coefficient(k, l, m, n, loss) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("binomial completeness: loss outcomes exhaust each component") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> eta(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 14;
        const LossModel loss(eta(rng), eta(rng));
        for (int k = 0; k <= n; ++k) {
            double total = 0.0;
            for (int l = 0; l <= k; ++l) {
                for (int m = 0; m <= n - k; ++m) {
                    total += branch_coefficient(k, l, m, n, loss);
                }
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("decompose: single-photon case") {
    const InputState state(1, {0.5, 0.5});
    const auto d = decompose(state, LossModel(0.9, 0.9));
    REQUIRE(d.branches.size() == 3);
    const auto& no_loss = d.branches[0];
    CHECK(no_loss.lost_a == 0);
    CHECK(no_loss.lost_b == 0);
    CHECK(no_loss.probability == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(no_loss.amplitudes[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(no_loss.amplitudes[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    for (const auto& b : d.branches) {
        if (b.lost_a + b.lost_b == 1) {
            CHECK(b.probability == doctest::Approx(0.05).epsilon(1e-14));
        }
    }
}

TEST_CASE("decompose: lossless identity") {
    const InputState state(5, {0.1, 0.2, 0.3, 0.2, 0.1, 0.1});
    const auto d = decompose(state, LossModel(1.0, 1.0));
    REQUIRE(d.branches.size() == 1);
    CHECK(d.branches[0].probability == 1.0);
    for (int k = 0; k <= 5; ++k) {
        CHECK(d.branches[0].amplitudes[static_cast<size_t>(k)] *
                  d.branches[0].amplitudes[static_cast<size_t>(k)] ==
              doctest::Approx(state.weight(k)).epsilon(1e-12));
    }
}

TEST_CASE("decompose: two-photon one-arm N00N example") {
    const InputState state(2, {0.5, 0.0, 0.5});
    const auto d = decompose(state, LossModel(0.9, 1.0));
    double p00 = 0, p10 = 0, p20 = 0;
    for (const auto& b : d.branches) {
        if (b.lost_a == 0 && b.lost_b == 0) p00 = b.probability;
        if (b.lost_a == 1 && b.lost_b == 0) p10 = b.probability;
        if (b.lost_a == 2 && b.lost_b == 0) p20 = b.probability;
    }
    CHECK(p00 == doctest::Approx(0.5 + 0.81 / 2).epsilon(1e-14));
    CHECK(p10 == doctest::Approx(0.09).epsilon(1e-14));
    CHECK(p20 == doctest::Approx(0.005).epsilon(1e-14));
}

TEST_CASE("decompose: probabilities sum to one and amplitudes are unit norm") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> eta(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 16;
        std::vector<double> w(static_cast<size_t>(n) + 1);
        std::gamma_distribution<double> gamma(1.0, 1.0);
        double sum = 0.0;
        for (double& v : w) sum += (v = gamma(rng));
        for (double& v : w) v /= sum;
        const InputState state(n, w);
        const LossModel loss(eta(rng), eta(rng));
        const auto d = decompose(state, loss);
        CHECK(d.total_probability() == doctest::Approx(1.0).epsilon(1e-10));
        for (const auto& b : d.branches) {
            double norm = 0.0;
            for (double a : b.amplitudes) norm += a * a;
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(b.lost_a + b.lost_b <= n);
            CHECK(b.probability > 0.0);
            CHECK(b.probability <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("decompose: mode-relabeling symmetry") {
    // Swapping (eta_a, eta_b) together with (k -> n-k, l -> m) leaves branch
    // probabilities unchanged.
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> eta(0.05, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial;
        std::vector<double> w(static_cast<size_t>(n) + 1);
        std::gamma_distribution<double> gamma(1.0, 1.0);
        double sum = 0.0;
        for (double& v : w) sum += (v = gamma(rng));
        for (double& v : w) v /= sum;
        std::vector<double> w_rev(w.rbegin(), w.rend());
        const double ea = eta(rng), eb = eta(rng);
        const auto d1 = decompose(InputState(n, w), LossModel(ea, eb));
        const auto d2 = decompose(InputState(n, w_rev), LossModel(eb, ea));
        for (const auto& b1 : d1.branches) {
            bool matched = false;
            for (const auto& b2 : d2.branches) {
                if (b2.lost_a == b1.lost_b && b2.lost_b == b1.lost_a) {
                    CHECK(b1.probability == doctest::Approx(b2.probability).epsilon(1e-11));
                    matched = true;
                }
            }
            CHECK(matched);
        }
    }
}

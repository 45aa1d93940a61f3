#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qnva/rng.hpp"
#include "qnva/source.hpp"

using namespace qnva;

TEST_CASE("bell state weights follow the statevector") {
    const auto phi_plus = bell_probabilities(BellState::PhiPlus);
    REQUIRE(phi_plus[0] == Catch::Approx(0.5));
    REQUIRE(phi_plus[1] == 0.0);
    REQUIRE(phi_plus[2] == 0.0);
    REQUIRE(phi_plus[3] == Catch::Approx(0.5));

    const auto phi_minus = bell_probabilities(BellState::PhiMinus);
    REQUIRE(phi_minus[0] == Catch::Approx(0.5));
    REQUIRE(phi_minus[3] == Catch::Approx(0.5));
    REQUIRE(phi_minus[1] == 0.0);

    const auto psi_plus = bell_probabilities(BellState::PsiPlus);
    REQUIRE(psi_plus[1] == Catch::Approx(0.5));
    REQUIRE(psi_plus[2] == Catch::Approx(0.5));
    REQUIRE(psi_plus[0] == 0.0);

    const auto psi_minus = bell_probabilities(BellState::PsiMinus);
    REQUIRE(psi_minus[1] == Catch::Approx(0.5));
    REQUIRE(psi_minus[2] == Catch::Approx(0.5));
    REQUIRE(psi_minus[0] == 0.0);
    REQUIRE(psi_minus[3] == 0.0);

    const auto plus = plus_probabilities();
    REQUIRE(plus[0] == Catch::Approx(0.5));
    REQUIRE(plus[1] == Catch::Approx(0.5));
}

TEST_CASE("bell oracle samples only supported outcomes") {
    Rng rng(11);
    const std::uint64_t shots = 100000;
    const auto histogram = oracle_measure_bell(BellState::PhiPlus, shots, rng);
    REQUIRE(histogram[0] + histogram[1] + histogram[2] + histogram[3] == shots);
    REQUIRE(histogram[1] == 0);
    REQUIRE(histogram[2] == 0);
    // 3-sigma binomial band around 0.5 is about +-0.0047.
    const double p00 = static_cast<double>(histogram[0]) / static_cast<double>(shots);
    REQUIRE(p00 >= 0.495);
    REQUIRE(p00 <= 0.505);

    Rng rng2(12);
    const auto psi = oracle_measure_bell(BellState::PsiMinus, shots, rng2);
    REQUIRE(psi[0] == 0);
    REQUIRE(psi[3] == 0);
    REQUIRE(psi[1] + psi[2] == shots);
}

TEST_CASE("plus oracle is unbiased and deterministic") {
    Rng rng(21);
    const std::uint64_t shots = 100000;
    const auto histogram = oracle_measure_plus(shots, rng);
    REQUIRE(histogram[0] + histogram[1] == shots);
    const double p0 = static_cast<double>(histogram[0]) / static_cast<double>(shots);
    REQUIRE(std::abs(p0 - 0.5) <= 0.005);

    // Single-shot reproducibility under a fixed seed.
    Rng a(99), b(99);
    REQUIRE(oracle_measure_plus(1, a) == oracle_measure_plus(1, b));

    Rng c(1);
    REQUIRE_THROWS_AS(oracle_measure_plus(0, c), std::invalid_argument);
    REQUIRE_THROWS_AS(oracle_measure_bell(BellState::PhiPlus, 0, c), std::invalid_argument);
}

TEST_CASE("distribute validates its parameters") {
    Rng rng(31);
    REQUIRE_THROWS_AS(distribute(2, 10, NoiseModel{}, rng), ConfigError);
    REQUIRE_THROWS_AS(distribute(2, 0, NoiseModel{}, rng), ConfigError);
    REQUIRE_THROWS_AS(distribute(1, 16, NoiseModel{}, rng), ConfigError);
    REQUIRE_THROWS_AS(distribute(2, 16, NoiseModel{1.0}, rng), ConfigError);
    REQUIRE_THROWS_AS(distribute(2, 16, NoiseModel{-0.1}, rng), ConfigError);
}

TEST_CASE("noiseless distribution correlates exactly at the owned position") {
    Rng rng(32);
    const auto result = distribute(3, 16, NoiseModel{}, rng);
    REQUIRE(result.alice_bits.is_bit_sequence());
    REQUIRE(result.bob_bits.size() == 3);
    for (int k = 1; k <= 3; ++k) {
        REQUIRE(result.bob_bits[k - 1].is_bit_sequence());
        for (int l = 1; l <= 16; ++l) {
            REQUIRE(result.bob_bits[k - 1].at(k, l) == result.alice_bits.at(k, l));
        }
    }
}

TEST_CASE("verifier bits are unbiased") {
    Rng rng(33);
    const auto result = distribute(2, 1024, NoiseModel{}, rng);
    int ones = 0;
    for (int l = 1; l <= 1024; ++l) {
        if (result.alice_bits.at(1, l) == Symbol::One) ++ones;
    }
    const double fraction = ones / 1024.0;
    REQUIRE(fraction >= 0.45);
    REQUIRE(fraction <= 0.55);
}

TEST_CASE("full depolarization removes the correlation") {
    Rng rng(34);
    const int degree = 10000;
    const auto result = sample_correlated_sequences(2, degree, NoiseModel{0.5}, rng);
    int matches = 0;
    for (int l = 1; l <= degree; ++l) {
        if (result.bob_bits[0].at(1, l) == result.alice_bits.at(1, l)) ++matches;
    }
    const double fraction = matches / static_cast<double>(degree);
    REQUIRE(std::abs(fraction - 0.5) <= 3.0 * 0.5 / std::sqrt(static_cast<double>(degree)));
}

TEST_CASE("off-position bits are independent of the verifier's") {
    Rng rng(35);
    const int degree = 10000;
    const auto result = sample_correlated_sequences(2, degree, NoiseModel{}, rng);
    // Position 2 of aggregator 1's sequence comes from uniform draws.
    int matches = 0;
    for (int l = 1; l <= degree; ++l) {
        if (result.bob_bits[0].at(2, l) == result.alice_bits.at(2, l)) ++matches;
    }
    const double fraction = matches / static_cast<double>(degree);
    REQUIRE(std::abs(fraction - 0.5) <= 3.0 * 0.5 / std::sqrt(static_cast<double>(degree)));
}

TEST_CASE("fixed seed reproduces the distribution bit for bit") {
    Rng a(36), b(36);
    const auto first = distribute(3, 32, NoiseModel{0.1}, a);
    const auto second = distribute(3, 32, NoiseModel{0.1}, b);
    REQUIRE(first.alice_bits == second.alice_bits);
    for (std::size_t i = 0; i < first.bob_bits.size(); ++i) {
        REQUIRE(first.bob_bits[i] == second.bob_bits[i]);
    }
}

TEST_CASE("entanglement validation verdicts") {
    std::vector<int> all;
    for (int l = 1; l <= 1000; ++l) all.push_back(l);
    const IndexSet sample(all);

    Rng clean_rng(41);
    const auto clean = sample_correlated_sequences(2, 1000, NoiseModel{}, clean_rng);
    const auto clean_report = validate_entanglement(clean, 1, sample, 0.05);
    REQUIRE(clean_report.mismatches == 0);
    REQUIRE(clean_report.passed);
    REQUIRE(clean_report.sampled_pairs == 1000);

    Rng noisy_rng(42);
    const auto noisy = sample_correlated_sequences(2, 1000, NoiseModel{0.5}, noisy_rng);
    REQUIRE_FALSE(validate_entanglement(noisy, 1, sample, 0.05).passed);

    Rng mild_rng(43);
    const auto mild = sample_correlated_sequences(2, 1000, NoiseModel{0.01}, mild_rng);
    REQUIRE(validate_entanglement(mild, 1, sample, 0.05).passed);

    REQUIRE_THROWS_AS(validate_entanglement(clean, 1, IndexSet{}, 0.05), std::invalid_argument);
    REQUIRE_THROWS_AS(validate_entanglement(clean, 5, sample, 0.05), std::invalid_argument);
}

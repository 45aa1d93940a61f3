#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qnva/errors.hpp"
#include "qnva/rng.hpp"
#include "qnva/sequence.hpp"

namespace qnva {

/// The four maximally entangled two-qubit states. Joint computational-basis
/// measurement of PhiPlus/PhiMinus yields 00 or 11 equiprobably, and of
/// PsiPlus/PsiMinus yields 01 or 10 equiprobably.
enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline const char* bell_state_name(BellState s) {
    switch (s) {
        case BellState::PhiPlus: return "phi+";
        case BellState::PhiMinus: return "phi-";
        case BellState::PsiPlus: return "psi+";
        default: return "psi-";
    }
}

/// Statevector amplitudes over basis order {00, 01, 10, 11}.
inline std::array<double, 4> bell_amplitudes(BellState s) {
    const double a = 1.0 / std::sqrt(2.0);
    switch (s) {
        case BellState::PhiPlus: return {a, 0.0, 0.0, a};
        case BellState::PhiMinus: return {a, 0.0, 0.0, -a};
        case BellState::PsiPlus: return {0.0, a, a, 0.0};
        default: return {0.0, a, -a, 0.0};
    }
}

/// Born-rule outcome weights |amplitude|^2 over {00, 01, 10, 11}.
inline std::array<double, 4> bell_probabilities(BellState s) {
    auto amps = bell_amplitudes(s);
    std::array<double, 4> probs{};
    for (std::size_t i = 0; i < 4; ++i) probs[i] = amps[i] * amps[i];
    return probs;
}

/// Amplitudes of the single-qubit uniform superposition H|0>.
inline std::array<double, 2> plus_amplitudes() {
    const double a = 1.0 / std::sqrt(2.0);
    return {a, a};
}

inline std::array<double, 2> plus_probabilities() {
    auto amps = plus_amplitudes();
    return {amps[0] * amps[0], amps[1] * amps[1]};
}

/// Samples `shots` joint measurements of a Bell pair from the exact
/// statevector weights. Histogram indices follow basis order {00,01,10,11}.
inline std::array<std::uint64_t, 4> oracle_measure_bell(BellState state, std::uint64_t shots,
                                                        Rng& rng) {
    if (shots < 1) throw std::invalid_argument("oracle_measure_bell: shots must be >= 1");
    const auto probs = bell_probabilities(state);
    std::array<std::uint64_t, 4> histogram{};
    for (std::uint64_t i = 0; i < shots; ++i) {
        const double u = rng.next_double();
        double cumulative = 0.0;
        std::size_t outcome = 3;
        for (std::size_t j = 0; j < 4; ++j) {
            cumulative += probs[j];
            if (u < cumulative) {
                outcome = j;
                break;
            }
        }
        ++histogram[outcome];
    }
    return histogram;
}

/// Samples `shots` computational-basis measurements of |+>.
inline std::array<std::uint64_t, 2> oracle_measure_plus(std::uint64_t shots, Rng& rng) {
    if (shots < 1) throw std::invalid_argument("oracle_measure_plus: shots must be >= 1");
    const auto probs = plus_probabilities();
    std::array<std::uint64_t, 2> histogram{};
    for (std::uint64_t i = 0; i < shots; ++i) {
        ++histogram[rng.next_double() < probs[0] ? 0 : 1];
    }
    return histogram;
}

/// Independent bit-flip probability applied to each of an aggregator's
/// entangled-position bits after the correlated draw. epsilon = 0 reproduces
/// perfect correlation.
struct NoiseModel {
    double epsilon = 0.0;

    void validate() const {
        if (!(epsilon >= 0.0 && epsilon < 1.0)) {
            throw ConfigError("noise epsilon must lie in [0, 1)");
        }
    }
};

/// Classical outcome of the distribution-and-measurement step: the
/// verifier's bit sequence plus one bit sequence per aggregator. At position
/// k, aggregator k's bits equal the verifier's up to the noise model; every
/// other position is an independent unbiased bit.
struct DistributionResult {
    TupleSequence alice_bits;
    std::vector<TupleSequence> bob_bits;
};

/// Core correlated draw without scenario-level degree constraints; used both
/// for protocol sequences and for the sacrificial validation tuples.
inline DistributionResult sample_correlated_sequences(int aggregators, int tuples,
                                                      const NoiseModel& noise, Rng& rng) {
    if (aggregators < 2) throw ConfigError("aggregator count must be at least 2");
    if (tuples < 1) throw ConfigError("tuple count must be positive");
    noise.validate();

    TupleSequence alice(tuples, aggregators);
    for (int l = 1; l <= tuples; ++l) {
        for (int k = 1; k <= aggregators; ++k) alice.set_bit(k, l, rng.bit());
    }

    std::vector<TupleSequence> bobs;
    bobs.reserve(static_cast<std::size_t>(aggregators));
    for (int k = 1; k <= aggregators; ++k) {
        TupleSequence bob(tuples, aggregators);
        for (int l = 1; l <= tuples; ++l) {
            for (int j = 1; j <= aggregators; ++j) {
                if (j == k) {
                    bool value = alice.at(k, l) == Symbol::One;
                    if (noise.epsilon > 0.0 && rng.bernoulli(noise.epsilon)) value = !value;
                    bob.set_bit(j, l, value);
                } else {
                    bob.set_bit(j, l, rng.bit());
                }
            }
        }
        bobs.push_back(std::move(bob));
    }
    return DistributionResult{std::move(alice), std::move(bobs)};
}

/// Distribution step for one active network: `degree` must be a positive
/// multiple of 4 so that downstream count checks have integral centers.
inline DistributionResult distribute(int aggregators, int degree, const NoiseModel& noise,
                                     Rng& rng) {
    if (degree < 4 || degree % 4 != 0) {
        throw ConfigError("degree of accuracy must be a multiple of 4 and at least 4");
    }
    return sample_correlated_sequences(aggregators, degree, noise, rng);
}

struct ValidationReport {
    int sampled_pairs = 0;
    int mismatches = 0;
    double estimated_error_rate = 0.0;
    bool passed = false;
};

/// Correlation sampling over sacrificial tuples: compares the verifier's and
/// aggregator `position`'s bits at the sampled tuple indices. A failed
/// report aborts the round at harness level.
inline ValidationReport validate_entanglement(const DistributionResult& result, int position,
                                              const IndexSet& sample, double threshold) {
    if (sample.empty()) {
        throw std::invalid_argument("validate_entanglement: sample must not be empty");
    }
    if (position < 1 || position > static_cast<int>(result.bob_bits.size())) {
        throw std::invalid_argument("validate_entanglement: position out of range");
    }
    const TupleSequence& bob = result.bob_bits[static_cast<std::size_t>(position - 1)];
    ValidationReport report;
    for (int l : sample) {
        ++report.sampled_pairs;
        if (result.alice_bits.at(position, l) != bob.at(position, l)) ++report.mismatches;
    }
    report.estimated_error_rate =
        static_cast<double>(report.mismatches) / static_cast<double>(report.sampled_pairs);
    report.passed = report.estimated_error_rate <= threshold;
    return report;
}

}  // namespace qnva

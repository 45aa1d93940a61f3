#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnva/proof.hpp"
#include "qnva/sequence.hpp"

namespace qnva {

/// Relaxation knobs for the consistency tests. The structural properties of
/// honest proofs hold in expectation, so count checks accept a band of
/// z_count standard deviations around the center instead of demanding exact
/// equality; strict_mode restores exact equality for pedagogical runs.
struct TolerancePolicy {
    double z_count = 4.0;
    /// Channel bit-flip rate assumed when deriving default budgets.
    double epsilon = 0.0;
    /// Max fraction of revealed-cell mismatches against the aggregator's own
    /// bits. Default: 0 for a noiseless channel, otherwise
    /// epsilon + z_count * sqrt(epsilon (1 - epsilon) / revealed).
    std::optional<double> mismatch_budget{};
    /// Max symmetric-difference size in the revealed-index comparison.
    /// Honest proofs agree exactly even under channel noise (they are built
    /// from the verifier's own bits), so the default stays 0.
    std::optional<double> set_diff_budget{};
    bool strict_mode = false;

    bool count_in_band(std::size_t count, double center, double sd) const {
        const double n = static_cast<double>(count);
        if (strict_mode) return n == center;
        return std::abs(n - center) <= z_count * sd;
    }

    double effective_mismatch_budget(std::size_t revealed) const {
        if (mismatch_budget) return *mismatch_budget;
        if (epsilon <= 0.0) return 0.0;
        const double n = static_cast<double>(revealed == 0 ? 1 : revealed);
        return epsilon + z_count * std::sqrt(epsilon * (1.0 - epsilon) / n);
    }

    double effective_set_diff_budget() const { return set_diff_budget.value_or(0.0); }
};

enum class FailureReason {
    None,
    CountOffK,
    BitMismatch,
    Unbalanced,
    CountOffKPrime,
    SetMismatch,
    Malformed,
};

inline const char* failure_reason_name(FailureReason r) {
    switch (r) {
        case FailureReason::None: return "none";
        case FailureReason::CountOffK: return "count_off_k";
        case FailureReason::BitMismatch: return "bit_mismatch";
        case FailureReason::Unbalanced: return "unbalanced";
        case FailureReason::CountOffKPrime: return "count_off_k_prime";
        case FailureReason::SetMismatch: return "set_mismatch";
        default: return "malformed";
    }
}

/// Outcome of one consistency test; failure_reason identifies the earliest
/// gate that failed, and `observed` carries the counts that gate saw.
struct TestResult {
    bool passed = false;
    FailureReason failure_reason = FailureReason::Malformed;
    std::vector<std::pair<std::string, double>> observed{};

    static TestResult pass(std::vector<std::pair<std::string, double>> counts = {}) {
        return TestResult{true, FailureReason::None, std::move(counts)};
    }

    static TestResult fail(FailureReason reason,
                           std::vector<std::pair<std::string, double>> counts = {}) {
        return TestResult{false, reason, std::move(counts)};
    }
};

/// Checks that at every other position r the revealed tuples split evenly
/// between (outcome, outcome) and (outcome, !outcome) pairs: each count must
/// sit within degree/4 +- z * sqrt(3 * degree / 16), the spread of a
/// probability-1/4 event over `degree` draws.
inline TestResult is_proof_balanced(int position, bool outcome, const TupleSequence& proof,
                                    const TolerancePolicy& tol) {
    if (position < 1 || position > proof.width()) {
        throw std::invalid_argument("is_proof_balanced: position out of range");
    }
    if (!proof.is_valid_proof()) return TestResult::fail(FailureReason::Malformed);

    const double d = static_cast<double>(proof.degree());
    const double center = d / 4.0;
    const double sd = std::sqrt(3.0 * d / 16.0);
    for (int r = 1; r <= proof.width(); ++r) {
        if (r == position) continue;
        const std::size_t same = positions_with_pair(proof, position, r, outcome, outcome).size();
        const std::size_t diff = positions_with_pair(proof, position, r, outcome, !outcome).size();
        if (!tol.count_in_band(same, center, sd) || !tol.count_in_band(diff, center, sd)) {
            return TestResult::fail(FailureReason::Unbalanced,
                                    {{"position", static_cast<double>(r)},
                                     {"pair_same", static_cast<double>(same)},
                                     {"pair_diff", static_cast<double>(diff)}});
        }
    }
    return TestResult::pass();
}

/// Aggregator-side check of the coordinator's proof against the claimed
/// outcome, in gate order:
///   1. the revealed-tuple count sits within degree/2 +- z * sqrt(degree)/2;
///   2. every revealed tuple carries the claimed outcome at this
///      aggregator's position and matches his own measured bit there, up to
///      the mismatch budget;
///   3. the proof is balanced at every other position.
inline TestResult is_alice_proof_consistent(int position, bool outcome,
                                            const TupleSequence& proof,
                                            const TupleSequence& own_bits,
                                            const TolerancePolicy& tol) {
    if (!proof.same_shape(own_bits)) {
        throw std::invalid_argument("is_alice_proof_consistent: shape mismatch");
    }
    if (!own_bits.is_bit_sequence()) {
        throw std::invalid_argument("is_alice_proof_consistent: own bits contain cryptic cells");
    }
    if (position < 1 || position > proof.width()) {
        throw std::invalid_argument("is_alice_proof_consistent: position out of range");
    }
    if (!proof.is_valid_proof()) return TestResult::fail(FailureReason::Malformed);

    const double d = static_cast<double>(proof.degree());
    const std::size_t count = positions_with(proof, position, outcome).size();
    if (!tol.count_in_band(count, d / 2.0, std::sqrt(d) / 2.0)) {
        return TestResult::fail(FailureReason::CountOffK,
                                {{"count_k", static_cast<double>(count)}});
    }

    std::size_t revealed = 0;
    std::size_t mismatches = 0;
    const Symbol wanted = symbol_from_bit(outcome);
    for (int l = 1; l <= proof.degree(); ++l) {
        if (proof.tuple_is_cryptic(l)) continue;
        ++revealed;
        const Symbol cell = proof.at(position, l);
        if (cell != wanted || cell != own_bits.at(position, l)) ++mismatches;
    }
    if (revealed > 0) {
        const double fraction = static_cast<double>(mismatches) / static_cast<double>(revealed);
        if (fraction > tol.effective_mismatch_budget(revealed)) {
            return TestResult::fail(FailureReason::BitMismatch,
                                    {{"revealed", static_cast<double>(revealed)},
                                     {"mismatches", static_cast<double>(mismatches)}});
        }
    }

    TestResult balance = is_proof_balanced(position, outcome, proof, tol);
    if (!balance.passed) return balance;
    return TestResult::pass({{"count_k", static_cast<double>(count)},
                             {"revealed", static_cast<double>(revealed)},
                             {"mismatches", static_cast<double>(mismatches)}});
}

/// Cross-check of a peer's proof for the opposite outcome, in gate order:
///   1. the peer proof reveals about degree/2 tuples at the peer's position;
///   2. the revealed indices that pair the own outcome with its negation
///      agree between the two proofs (exactly, unless a budget is granted);
///   3. the peer proof is balanced.
/// `own_proof` must have been validated against this aggregator's own bits
/// beforehand; `claimed_outcome` must be the negation of `outcome`.
inline TestResult is_bob_proof_consistent(int position, int peer_position, bool outcome,
                                          const TupleSequence& own_proof, bool claimed_outcome,
                                          const TupleSequence& peer_proof,
                                          const TolerancePolicy& tol) {
    if (claimed_outcome == outcome) {
        throw std::invalid_argument(
            "is_bob_proof_consistent: claimed outcome must oppose the own outcome");
    }
    if (position == peer_position) {
        throw std::invalid_argument("is_bob_proof_consistent: positions must differ");
    }
    if (!own_proof.same_shape(peer_proof)) {
        throw std::invalid_argument("is_bob_proof_consistent: shape mismatch");
    }
    if (!own_proof.is_valid_proof() || !peer_proof.is_valid_proof()) {
        return TestResult::fail(FailureReason::Malformed);
    }

    const double d = static_cast<double>(peer_proof.degree());
    const std::size_t count = positions_with(peer_proof, peer_position, claimed_outcome).size();
    if (!tol.count_in_band(count, d / 2.0, std::sqrt(d) / 2.0)) {
        return TestResult::fail(FailureReason::CountOffKPrime,
                                {{"count_k_prime", static_cast<double>(count)}});
    }

    const IndexSet own_set =
        positions_with_pair(own_proof, position, peer_position, outcome, claimed_outcome);
    const IndexSet peer_set =
        positions_with_pair(peer_proof, position, peer_position, outcome, claimed_outcome);
    const std::size_t diff = symmetric_difference_size(own_set, peer_set);
    if (static_cast<double>(diff) > tol.effective_set_diff_budget()) {
        return TestResult::fail(FailureReason::SetMismatch,
                                {{"symmetric_difference", static_cast<double>(diff)},
                                 {"own_set", static_cast<double>(own_set.size())},
                                 {"peer_set", static_cast<double>(peer_set.size())}});
    }

    TestResult balance = is_proof_balanced(peer_position, claimed_outcome, peer_proof, tol);
    if (!balance.passed) return balance;
    return TestResult::pass({{"count_k_prime", static_cast<double>(count)},
                             {"symmetric_difference", static_cast<double>(diff)}});
}

}  // namespace qnva

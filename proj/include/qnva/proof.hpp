#pragma once

#include <string>
#include <vector>

#include "qnva/errors.hpp"
#include "qnva/rng.hpp"
#include "qnva/sequence.hpp"

namespace qnva {

/// How a cheating aggregator fills the cells he cannot know when fabricating
/// a proof for the opposite outcome.
///
/// UniformGuess draws every unknown cell independently and uniformly.
/// ExactCountGuess places exactly degree/4 occurrences of the bit the victim
/// cross-checks (the negation of the claimed outcome) at the attacked
/// position, choosing the placement uniformly among all subsets of that size;
/// remaining unknown cells are uniform. This keeps every count statistic at
/// its expected center, so only the revealed-index comparison can expose the
/// forgery.
enum class ForgeStrategy { UniformGuess, ExactCountGuess };

/// Builds the personalized proof for aggregator `position` and verdict
/// `outcome`: tuple l is copied from the verifier's bits when her bit at
/// `position` equals `outcome`, and is fully cryptic otherwise.
inline TupleSequence build_proof(const TupleSequence& alice_bits, int position, bool outcome) {
    if (!alice_bits.is_bit_sequence()) {
        throw std::invalid_argument("build_proof: source sequence must contain no cryptic cells");
    }
    if (position < 1 || position > alice_bits.width()) {
        throw std::invalid_argument("build_proof: position out of range");
    }
    TupleSequence proof(alice_bits.degree(), alice_bits.width());
    const Symbol wanted = symbol_from_bit(outcome);
    for (int l = 1; l <= alice_bits.degree(); ++l) {
        if (alice_bits.at(position, l) == wanted) {
            proof.copy_tuple_from(alice_bits, l);
        } else {
            proof.set_tuple_cryptic(l);
        }
    }
    return proof;
}

/// Fabricates a proof claiming `claimed_outcome` from a genuine proof that
/// was consistent with the opposite outcome.
///
/// The forger knows with certainty that the cryptic tuples of his genuine
/// proof carry the claimed outcome at his own position, so the forgery
/// reveals exactly those indices (and hides the formerly revealed ones).
/// `attacked_position` is the position whose bits the designated victim will
/// compare; it steers ExactCountGuess and is ignored by UniformGuess.
inline TupleSequence forge_proof(const TupleSequence& received_proof, int own_position,
                                 bool claimed_outcome, ForgeStrategy strategy,
                                 int attacked_position, Rng& rng) {
    if (own_position < 1 || own_position > received_proof.width()) {
        throw std::invalid_argument("forge_proof: own position out of range");
    }
    if (attacked_position < 1 || attacked_position > received_proof.width() ||
        attacked_position == own_position) {
        throw std::invalid_argument("forge_proof: attacked position invalid");
    }
    const IndexSet hidden = cryptic_positions(received_proof);  // throws on malformed input
    const int degree = received_proof.degree();
    const int width = received_proof.width();

    TupleSequence forged(degree, width);
    for (int l = 1; l <= degree; ++l) forged.set_tuple_cryptic(l);

    std::vector<int> reveal(hidden.begin(), hidden.end());
    for (int l : reveal) {
        forged.set_bit(own_position, l, claimed_outcome);
        for (int k = 1; k <= width; ++k) {
            if (k == own_position || k == attacked_position) continue;
            forged.set_bit(k, l, rng.bit());
        }
    }

    const bool target_bit = !claimed_outcome;
    if (strategy == ForgeStrategy::UniformGuess) {
        for (int l : reveal) forged.set_bit(attacked_position, l, rng.bit());
    } else {
        const int quota = degree / 4;
        if (static_cast<int>(reveal.size()) < quota) {
            throw DegenerateInput("forge_proof: fewer cryptic tuples (" +
                                  std::to_string(reveal.size()) + ") than required placements (" +
                                  std::to_string(quota) + ")");
        }
        std::vector<int> order = reveal;
        rng.shuffle(order);
        for (std::size_t i = 0; i < order.size(); ++i) {
            forged.set_bit(attacked_position, order[i],
                           static_cast<int>(i) < quota ? target_bit : !target_bit);
        }
    }
    return forged;
}

/// Ground-truth consistency: true iff `proof` equals the reference
/// construction cell for cell. Test-side oracle, independent of the
/// tolerance-based checks.
inline bool is_consistent_oracle(const TupleSequence& proof, const TupleSequence& alice_bits,
                                 int position, bool outcome) {
    if (!proof.same_shape(alice_bits)) {
        throw std::invalid_argument("is_consistent_oracle: shape mismatch");
    }
    return proof == build_proof(alice_bits, position, outcome);
}

}  // namespace qnva

#include <catch2/catch_amalgamated.hpp>

#include "qnva/rng.hpp"
#include "qnva/sequence.hpp"

using namespace qnva;

namespace {

TupleSequence random_bit_sequence(int degree, int width, Rng& rng) {
    TupleSequence seq(degree, width);
    for (int l = 1; l <= degree; ++l) {
        for (int k = 1; k <= width; ++k) seq.set_bit(k, l, rng.bit());
    }
    return seq;
}

}  // namespace

TEST_CASE("tuple sequence construction and addressing") {
    TupleSequence seq(4, 2);
    REQUIRE(seq.degree() == 4);
    REQUIRE(seq.width() == 2);
    REQUIRE(seq.at(1, 1) == Symbol::Zero);
    seq.set(2, 3, Symbol::One);
    REQUIRE(seq.at(2, 3) == Symbol::One);

    REQUIRE_THROWS_AS(TupleSequence(0, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(TupleSequence(4, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(seq.at(3, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(seq.at(1, 5), std::invalid_argument);
    REQUIRE_THROWS_AS(seq.at(0, 1), std::invalid_argument);
}

TEST_CASE("validity predicates distinguish bit sequences, proofs and mixed tuples") {
    TupleSequence seq(3, 2);
    REQUIRE(seq.is_bit_sequence());
    REQUIRE(seq.is_valid_proof());

    seq.set_tuple_cryptic(2);
    REQUIRE_FALSE(seq.is_bit_sequence());
    REQUIRE(seq.is_valid_proof());
    REQUIRE(seq.tuple_is_cryptic(2));
    REQUIRE(seq.tuple_is_revealed(1));

    seq.set(1, 2, Symbol::Zero);  // half-revealed tuple
    REQUIRE_FALSE(seq.is_valid_proof());
    REQUIRE_FALSE(seq.tuple_is_cryptic(2));
    REQUIRE_FALSE(seq.tuple_is_revealed(2));
}

TEST_CASE("positions_with matches the hand-enumerated example") {
    // d=4, n=2; bits at position 2 across l=1..4 are 0,1,1,0.
    TupleSequence seq(4, 2);
    seq.set_bit(2, 1, false);
    seq.set_bit(2, 2, true);
    seq.set_bit(2, 3, true);
    seq.set_bit(2, 4, false);
    REQUIRE(positions_with(seq, 2, true) == IndexSet{2, 3});
    REQUIRE(positions_with(seq, 2, false) == IndexSet{1, 4});
}

TEST_CASE("positions_with edge cases") {
    TupleSequence zeros(3, 2);
    REQUIRE(positions_with(zeros, 1, true).empty());

    TupleSequence ones(5, 2);
    for (int l = 1; l <= 5; ++l) ones.set_bit(1, l, true);
    REQUIRE(positions_with(ones, 1, true) == IndexSet{1, 2, 3, 4, 5});

    REQUIRE_THROWS_AS(positions_with(zeros, 0, true), std::invalid_argument);
    REQUIRE_THROWS_AS(positions_with(zeros, 3, true), std::invalid_argument);
}

TEST_CASE("positions_with_pair matches the hand-enumerated example") {
    // Tuples (k=1, k=2) per l: (1,0), (1,1), (0,0), (1,0).
    TupleSequence seq(4, 2);
    const bool bits[4][2] = {{true, false}, {true, true}, {false, false}, {true, false}};
    for (int l = 1; l <= 4; ++l) {
        seq.set_bit(1, l, bits[l - 1][0]);
        seq.set_bit(2, l, bits[l - 1][1]);
    }
    REQUIRE(positions_with_pair(seq, 1, 2, true, false) == IndexSet{1, 4});
    REQUIRE(positions_with_pair(seq, 1, 2, true, true) == IndexSet{2});

    TupleSequence zeros(4, 2);
    REQUIRE(positions_with_pair(zeros, 1, 2, true, true).empty());

    REQUIRE_THROWS_AS(positions_with_pair(seq, 1, 1, true, false), std::invalid_argument);
    REQUIRE_THROWS_AS(positions_with_pair(seq, 1, 3, true, false), std::invalid_argument);
}

TEST_CASE("cryptic cells never match position queries") {
    TupleSequence seq(3, 2);
    seq.set_tuple_cryptic(2);
    REQUIRE(positions_with(seq, 1, false) == IndexSet{1, 3});
    REQUIRE(positions_with(seq, 1, true).empty());
}

TEST_CASE("cryptic_positions enumerates whole cryptic tuples") {
    TupleSequence proof(3, 2);
    proof.set_tuple_cryptic(1);
    proof.set_bit(1, 2, true);
    proof.set_bit(2, 2, false);
    proof.set_tuple_cryptic(3);
    REQUIRE(cryptic_positions(proof) == IndexSet{1, 3});

    TupleSequence revealed(4, 2);
    REQUIRE(cryptic_positions(revealed).empty());

    TupleSequence hidden(6, 3);
    for (int l = 1; l <= 6; ++l) hidden.set_tuple_cryptic(l);
    REQUIRE(cryptic_positions(hidden) == IndexSet{1, 2, 3, 4, 5, 6});

    TupleSequence mixed(2, 2);
    mixed.set(1, 1, Symbol::Cryptic);
    REQUIRE_THROWS_AS(cryptic_positions(mixed), MalformedSequence);
}

TEST_CASE("count and set identities over random bit sequences") {
    Rng rng(7101);
    for (int trial = 0; trial < 200; ++trial) {
        const int degree = 4 + static_cast<int>(rng.below(32));
        const int width = 2 + static_cast<int>(rng.below(4));
        const TupleSequence seq = random_bit_sequence(degree, width, rng);
        const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(width)));
        int kp = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(width)));
        if (kp == k) kp = (k % width) + 1;

        const IndexSet p0 = positions_with(seq, k, false);
        const IndexSet p1 = positions_with(seq, k, true);
        REQUIRE(p0.size() + p1.size() == static_cast<std::size_t>(degree));
        REQUIRE(set_intersection(p0, p1).empty());

        // Pair-query symmetry and the disjoint-union decomposition.
        const IndexSet p10 = positions_with_pair(seq, k, kp, true, false);
        const IndexSet p11 = positions_with_pair(seq, k, kp, true, true);
        REQUIRE(p10 == positions_with_pair(seq, kp, k, false, true));
        REQUIRE(set_intersection(p10, p11).empty());
        REQUIRE(set_union(p10, p11) == p1);
    }
}

TEST_CASE("proof count identity includes the cryptic tuples") {
    Rng rng(7102);
    for (int trial = 0; trial < 100; ++trial) {
        const int degree = 4 + static_cast<int>(rng.below(24));
        TupleSequence proof = random_bit_sequence(degree, 2, rng);
        for (int l = 1; l <= degree; ++l) {
            if (rng.bit()) proof.set_tuple_cryptic(l);
        }
        const std::size_t zero = positions_with(proof, 1, false).size();
        const std::size_t one = positions_with(proof, 1, true).size();
        const std::size_t hidden = cryptic_positions(proof).size();
        REQUIRE(zero + one + hidden == static_cast<std::size_t>(degree));
    }
}

TEST_CASE("text serialization round-trips") {
    TupleSequence proof(3, 2);
    proof.set_bit(1, 1, false);
    proof.set_bit(2, 1, true);
    proof.set_tuple_cryptic(2);
    proof.set_bit(1, 3, true);
    proof.set_bit(2, 3, true);
    REQUIRE(proof.to_text() == "01 ** 11");
    REQUIRE(TupleSequence::from_text(proof.to_text()) == proof);

    Rng rng(7103);
    for (int trial = 0; trial < 50; ++trial) {
        const TupleSequence seq =
            random_bit_sequence(4 + static_cast<int>(rng.below(16)), 3, rng);
        REQUIRE(TupleSequence::from_text(seq.to_text()) == seq);
    }

    REQUIRE_THROWS_AS(TupleSequence::from_text(""), std::invalid_argument);
    REQUIRE_THROWS_AS(TupleSequence::from_text("01 0"), std::invalid_argument);
    REQUIRE_THROWS_AS(TupleSequence::from_text("0x"), std::invalid_argument);
}

TEST_CASE("index set operations") {
    const IndexSet a{3, 1, 2};
    REQUIRE(a == IndexSet{1, 2, 3});
    REQUIRE(a.contains(2));
    REQUIRE_FALSE(a.contains(4));

    const IndexSet b{2, 4};
    REQUIRE(symmetric_difference_size(a, b) == 3);
    REQUIRE(symmetric_difference_size(a, a) == 0);
    REQUIRE(set_union(a, b) == IndexSet{1, 2, 3, 4});
    REQUIRE(set_intersection(a, b) == IndexSet{2});

    const IndexSet dup{1, 1, 2};
    REQUIRE(dup.size() == 2);
}

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qnva/consistency.hpp"
#include "qnva/errors.hpp"
#include "qnva/proof.hpp"
#include "qnva/sequence.hpp"

namespace qnva {

/// Verdict bit plus accompanying proof, as carried on both the
/// coordinator-to-aggregator and aggregator-to-aggregator channels.
struct OutcomeMessage {
    int sender = 0;  // 0 = coordinator, otherwise aggregator position
    bool outcome = false;
    TupleSequence proof;
};

enum class Decision { Undecided, AcceptTrue, AcceptFake, RejectFakeBlameVerifier };

inline const char* decision_name(Decision d) {
    switch (d) {
        case Decision::Undecided: return "undecided";
        case Decision::AcceptTrue: return "accept_true";
        case Decision::AcceptFake: return "accept_fake";
        default: return "reject_fake_blame_verifier";
    }
}

/// How a verifier behaves towards her active network.
struct VerifierBehavior {
    enum class Kind { Honest, InconsistentProof, Contradictory };

    Kind kind = Kind::Honest;
    bool outcome = true;
    /// InconsistentProof: the aggregator that receives the wrong-branch proof.
    int victim = 1;
    /// Contradictory: aggregators that receive `outcome`; the rest receive
    /// its negation, each with an honestly built proof.
    std::vector<int> targets{};

    static VerifierBehavior honest(bool outcome) { return {Kind::Honest, outcome, 1, {}}; }

    static VerifierBehavior inconsistent_proof(bool outcome, int victim) {
        return {Kind::InconsistentProof, outcome, victim, {}};
    }

    static VerifierBehavior contradictory(bool outcome, std::vector<int> targets) {
        return {Kind::Contradictory, outcome, 1, std::move(targets)};
    }
};

/// How an aggregator behaves during the exchange phase.
struct AggregatorBehavior {
    enum class Kind { Honest, Forger };

    Kind kind = Kind::Honest;
    ForgeStrategy strategy = ForgeStrategy::ExactCountGuess;
    /// Position whose bits the forgery optimizes against; 0 picks the lowest
    /// peer position.
    int attacked_position = 0;

    static AggregatorBehavior honest() { return {}; }

    static AggregatorBehavior forger(ForgeStrategy strategy, int attacked_position = 0) {
        return {Kind::Forger, strategy, attacked_position};
    }
};

/// Produces the coordinator's message for every aggregator 1..n. Honest and
/// contradictory verifiers build each proof consistently with the outcome
/// that message claims; an inconsistent verifier hands the victim the proof
/// built for the opposite branch.
inline std::vector<OutcomeMessage> verifier_send(const VerifierBehavior& behavior,
                                                 const TupleSequence& alice_bits,
                                                 int aggregators) {
    if (aggregators < 2 || aggregators > alice_bits.width()) {
        throw std::invalid_argument("verifier_send: aggregator count out of range");
    }
    std::vector<OutcomeMessage> messages;
    messages.reserve(static_cast<std::size_t>(aggregators));
    for (int k = 1; k <= aggregators; ++k) {
        bool claim = behavior.outcome;
        bool proof_branch = behavior.outcome;
        switch (behavior.kind) {
            case VerifierBehavior::Kind::Honest:
                break;
            case VerifierBehavior::Kind::InconsistentProof:
                if (k == behavior.victim) proof_branch = !behavior.outcome;
                break;
            case VerifierBehavior::Kind::Contradictory: {
                const bool targeted = std::find(behavior.targets.begin(), behavior.targets.end(),
                                                k) != behavior.targets.end();
                claim = targeted ? behavior.outcome : !behavior.outcome;
                proof_branch = claim;
                break;
            }
        }
        messages.push_back(OutcomeMessage{0, claim, build_proof(alice_bits, k, proof_branch)});
    }
    return messages;
}

/// Events driving one aggregator's round, in order: the coordinator's
/// delivery, any number of peer deliveries, then the end-of-exchange marker.
struct DeliverCoordinator {
    OutcomeMessage message;
};
struct DeliverPeer {
    OutcomeMessage message;
};
struct AllPeersDelivered {};
using ProtocolEvent = std::variant<DeliverCoordinator, DeliverPeer, AllPeersDelivered>;

/// Per-aggregator round state: own bits, what was received, the two
/// reputation lists and the final verdict. The decision moves monotonically
/// from Undecided to a terminal value within one round.
struct AggregatorState {
    enum class Stage { AwaitCoordinator, AwaitPeers, Terminal };

    int id = 0;
    std::vector<int> peers{};
    TupleSequence own_bits;
    std::optional<OutcomeMessage> received{};
    std::map<int, OutcomeMessage> peer_messages{};
    std::set<int> malicious_aggregators{};  // M_A
    std::set<int> malicious_verifiers{};    // M_V
    Decision decision = Decision::Undecided;
    Stage stage = Stage::AwaitCoordinator;
    /// Failure reason of the coordinator check, when it failed.
    FailureReason coordinator_failure = FailureReason::None;

    AggregatorState(int id_, std::vector<int> peers_, TupleSequence own_bits_)
        : id(id_), peers(std::move(peers_)), own_bits(std::move(own_bits_)) {}

    bool terminal() const { return stage == Stage::Terminal; }
};

/// Advances one aggregator's state machine by one event and returns the
/// messages it emits. Steps:
///   - coordinator delivery: run the coordinator-proof check; on failure
///     reject the news, blacklist the verifier and terminate; on success
///     relay the received outcome and proof to every peer not blacklisted;
///   - peer delivery: record the peer's claim;
///   - end of exchange: if every recorded claim agrees with the own outcome,
///     adopt it; otherwise cross-check each conflicting peer in ascending
///     order. An inconsistent peer proof blacklists that peer, while a
///     consistent one proves the verifier sent contradictory verdicts, so
///     the news is rejected and the verifier blacklisted.
inline std::vector<OutcomeMessage> qnva_step(AggregatorState& state, const ProtocolEvent& event,
                                             const TolerancePolicy& tol) {
    constexpr int kCoordinator = 0;

    if (std::holds_alternative<DeliverCoordinator>(event)) {
        if (state.stage != AggregatorState::Stage::AwaitCoordinator) {
            throw ProtocolError("qnva_step: coordinator message delivered twice or late");
        }
        const OutcomeMessage& msg = std::get<DeliverCoordinator>(event).message;
        state.received = msg;
        const TestResult check =
            is_alice_proof_consistent(state.id, msg.outcome, msg.proof, state.own_bits, tol);
        if (!check.passed) {
            state.coordinator_failure = check.failure_reason;
            state.decision = Decision::RejectFakeBlameVerifier;
            state.malicious_verifiers.insert(kCoordinator);
            state.stage = AggregatorState::Stage::Terminal;
            return {};
        }
        state.stage = AggregatorState::Stage::AwaitPeers;
        std::vector<OutcomeMessage> outbound;
        for (int peer : state.peers) {
            if (state.malicious_aggregators.count(peer)) continue;
            outbound.push_back(OutcomeMessage{state.id, msg.outcome, msg.proof});
        }
        return outbound;
    }

    if (std::holds_alternative<DeliverPeer>(event)) {
        if (state.stage != AggregatorState::Stage::AwaitPeers) {
            throw ProtocolError("qnva_step: peer message before coordinator or after decision");
        }
        const OutcomeMessage& msg = std::get<DeliverPeer>(event).message;
        if (state.malicious_aggregators.count(msg.sender)) {
            throw ProtocolError("qnva_step: harness delivered a message from a blocked sender");
        }
        if (!state.peer_messages.emplace(msg.sender, msg).second) {
            throw ProtocolError("qnva_step: duplicate peer message from sender " +
                                std::to_string(msg.sender));
        }
        return {};
    }

    if (state.stage != AggregatorState::Stage::AwaitPeers) {
        throw ProtocolError("qnva_step: exchange ended before the coordinator delivery");
    }
    const bool own_outcome = state.received->outcome;
    for (const auto& [peer, msg] : state.peer_messages) {  // ascending peer id
        if (msg.outcome == own_outcome) continue;
        const TestResult check = is_bob_proof_consistent(state.id, peer, own_outcome,
                                                         state.received->proof, msg.outcome,
                                                         msg.proof, tol);
        if (check.passed) {
            // Only the verifier herself can produce a consistent proof for
            // the opposite outcome.
            state.decision = Decision::RejectFakeBlameVerifier;
            state.malicious_verifiers.insert(kCoordinator);
            state.stage = AggregatorState::Stage::Terminal;
            return {};
        }
        state.malicious_aggregators.insert(peer);
    }
    state.decision = own_outcome ? Decision::AcceptTrue : Decision::AcceptFake;
    state.stage = AggregatorState::Stage::Terminal;
    return {};
}

}  // namespace qnva

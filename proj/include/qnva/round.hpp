#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qnva/consistency.hpp"
#include "qnva/network.hpp"
#include "qnva/proof.hpp"
#include "qnva/protocol.hpp"
#include "qnva/rng.hpp"
#include "qnva/source.hpp"

namespace qnva {

/// Per-round parameters around the state machine: degree of accuracy,
/// sacrificial validation tuples (defaults to degree / 4), the abort
/// threshold for the correlation check, channel noise and tolerances.
struct RoundParams {
    int degree = 16;
    int validation_tuples = 0;  // 0 -> degree / 4
    double validation_threshold = 0.05;
    NoiseModel noise{};
    TolerancePolicy tolerance{};

    int effective_validation_tuples() const {
        return validation_tuples > 0 ? validation_tuples : degree / 4;
    }

    void validate() const {
        if (degree < 4 || degree % 4 != 0) {
            throw ConfigError("degree of accuracy must be a multiple of 4 and at least 4");
        }
        if (!(validation_threshold >= 0.0 && validation_threshold < 1.0)) {
            throw ConfigError("validation threshold must lie in [0, 1)");
        }
        noise.validate();
    }
};

/// Behavior assignment for one network; aggregators without an entry act
/// honestly.
struct NetworkBehaviors {
    VerifierBehavior verifier = VerifierBehavior::honest(true);
    std::map<int, AggregatorBehavior> aggregators{};

    AggregatorBehavior aggregator(int position) const {
        const auto it = aggregators.find(position);
        return it == aggregators.end() ? AggregatorBehavior::honest() : it->second;
    }
};

struct RoundOutcome {
    struct PerAggregator {
        int network = 0;
        int position = 0;
        Decision decision = Decision::Undecided;
        FailureReason coordinator_failure = FailureReason::None;
        std::vector<int> malicious_aggregators{};
        std::vector<int> malicious_verifiers{};
        int messages_sent = 0;
    };

    bool aborted = false;
    std::vector<PerAggregator> aggregators{};
    int messages_sent = 0;
    /// Distinct message-bearing protocol phases that occurred
    /// (coordinator send, peer exchange, decision); constant in the
    /// participant count.
    int phases = 0;
    Transcript transcript{};

    const PerAggregator& at(int network, int position) const {
        for (const auto& a : aggregators) {
            if (a.network == network && a.position == position) return a;
        }
        throw std::invalid_argument("RoundOutcome::at: unknown aggregator");
    }
};

/// Runs one full round: correlated distribution, sacrificial entanglement
/// validation (failure aborts the round), coordinator send, peer exchange
/// and decisions, independently per active network. All randomness derives
/// from `base`, so a fixed seed reproduces the outcome bit for bit.
inline RoundOutcome run_round(const Topology& topology,
                              const std::vector<NetworkBehaviors>& behaviors,
                              const RoundParams& params, const Rng& base) {
    topology.validate();
    params.validate();
    if (behaviors.size() != topology.networks.size()) {
        throw ConfigError("run_round: one behavior assignment per network required");
    }

    RoundOutcome outcome;
    std::set<Phase> protocol_phases;

    for (std::size_t net_index = 0; net_index < topology.networks.size(); ++net_index) {
        const auto& network = topology.networks[net_index];
        const auto& net_behaviors = behaviors[net_index];
        const int net_id = static_cast<int>(net_index) + 1;
        const int n = static_cast<int>(network.aggregators.size());
        Rng net_rng = base.derive(static_cast<std::uint64_t>(net_id));
        Rng dist_rng = net_rng.derive(1);

        DistributionResult main = distribute(n, params.degree, params.noise, dist_rng);
        DistributionResult validation = sample_correlated_sequences(
            n, params.effective_validation_tuples(), params.noise, dist_rng);

        outcome.transcript.append(Phase::Distribution, net_id, -1, 0,
                                  fnv1a64(main.alice_bits.to_text()));
        for (int k = 1; k <= n; ++k) {
            outcome.transcript.append(Phase::Distribution, net_id, -1, k,
                                      fnv1a64(main.bob_bits[k - 1].to_text()));
        }

        std::vector<int> all_validation(validation.alice_bits.degree());
        for (int l = 1; l <= validation.alice_bits.degree(); ++l) all_validation[l - 1] = l;
        const IndexSet validation_sample(all_validation);
        bool validation_ok = true;
        for (int k = 1; k <= n; ++k) {
            const ValidationReport report = validate_entanglement(
                validation, k, validation_sample, params.validation_threshold);
            const std::string text = std::to_string(report.mismatches) + "/" +
                                     std::to_string(report.sampled_pairs) +
                                     (report.passed ? ":pass" : ":fail");
            outcome.transcript.append(Phase::Validation, net_id, k, 0, fnv1a64(text));
            if (!report.passed) validation_ok = false;
        }
        if (!validation_ok) {
            outcome.aborted = true;
            return outcome;
        }

        // Coordinator send.
        std::vector<OutcomeMessage> coordinator_msgs =
            verifier_send(net_behaviors.verifier, main.alice_bits, n);
        std::vector<AggregatorState> states;
        states.reserve(static_cast<std::size_t>(n));
        for (int k = 1; k <= n; ++k) {
            std::vector<int> peers;
            for (int j = 1; j <= n; ++j) {
                if (j != k) peers.push_back(j);
            }
            states.emplace_back(k, std::move(peers), main.bob_bits[k - 1]);
        }

        std::vector<Envelope> exchange;
        std::vector<int> messages_sent(static_cast<std::size_t>(n), 0);
        for (int k = 1; k <= n; ++k) {
            AggregatorState& state = states[static_cast<std::size_t>(k - 1)];
            const OutcomeMessage& msg = coordinator_msgs[static_cast<std::size_t>(k - 1)];
            outcome.transcript.append(Phase::CoordinatorSend, net_id, 0, k,
                                      fnv1a64(msg.proof.to_text() + (msg.outcome ? "|1" : "|0")));
            protocol_phases.insert(Phase::CoordinatorSend);
            std::vector<OutcomeMessage> outbound =
                qnva_step(state, DeliverCoordinator{msg}, params.tolerance);

            const AggregatorBehavior behavior = net_behaviors.aggregator(k);
            if (behavior.kind == AggregatorBehavior::Kind::Forger && !outbound.empty()) {
                int attacked = behavior.attacked_position;
                if (attacked == 0) attacked = (k == 1) ? 2 : 1;
                Rng forge_rng = net_rng.derive(0x464F5247ULL, static_cast<std::uint64_t>(k));
                const TupleSequence forged =
                    forge_proof(state.received->proof, k, !state.received->outcome,
                                behavior.strategy, attacked, forge_rng);
                for (auto& msg_out : outbound) {
                    msg_out.outcome = !state.received->outcome;
                    msg_out.proof = forged;
                }
            }

            std::size_t peer_index = 0;
            for (int peer : state.peers) {
                if (state.malicious_aggregators.count(peer)) continue;
                if (peer_index >= outbound.size()) break;
                exchange.push_back(Envelope{k, peer, outbound[peer_index]});
                ++peer_index;
            }
            messages_sent[static_cast<std::size_t>(k - 1)] =
                static_cast<int>(outbound.size());
        }

        // Peer exchange.
        std::map<int, std::set<int>> blocked;
        for (const auto& state : states) blocked[state.id] = state.malicious_aggregators;
        DeliveryPlan plan = deliver_phase(std::move(exchange), blocked);
        for (const auto& envelope : plan.dropped) {
            outcome.transcript.append(Phase::PeerExchange, net_id, envelope.sender,
                                      envelope.receiver,
                                      fnv1a64(envelope.message.proof.to_text()), true);
        }
        for (const auto& envelope : plan.deliveries) {
            AggregatorState& receiver = states[static_cast<std::size_t>(envelope.receiver - 1)];
            const bool to_terminal = receiver.terminal();
            outcome.transcript.append(
                Phase::PeerExchange, net_id, envelope.sender, envelope.receiver,
                fnv1a64(envelope.message.proof.to_text() +
                        (envelope.message.outcome ? "|1" : "|0")),
                to_terminal);
            protocol_phases.insert(Phase::PeerExchange);
            if (to_terminal) continue;  // the receiver already terminated
            qnva_step(receiver, DeliverPeer{envelope.message}, params.tolerance);
        }

        // Decisions.
        for (auto& state : states) {
            if (!state.terminal()) {
                qnva_step(state, AllPeersDelivered{}, params.tolerance);
            }
            outcome.transcript.append(Phase::Decision, net_id, state.id, state.id,
                                      fnv1a64(decision_name(state.decision)));
            protocol_phases.insert(Phase::Decision);

            RoundOutcome::PerAggregator entry;
            entry.network = net_id;
            entry.position = state.id;
            entry.decision = state.decision;
            entry.coordinator_failure = state.coordinator_failure;
            entry.malicious_aggregators.assign(state.malicious_aggregators.begin(),
                                               state.malicious_aggregators.end());
            entry.malicious_verifiers.assign(state.malicious_verifiers.begin(),
                                             state.malicious_verifiers.end());
            entry.messages_sent = messages_sent[static_cast<std::size_t>(state.id - 1)];
            outcome.messages_sent += entry.messages_sent;
            outcome.aggregators.push_back(std::move(entry));
        }
    }

    outcome.phases = static_cast<int>(protocol_phases.size());
    return outcome;
}

}  // namespace qnva

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qnva/errors.hpp"
#include "qnva/protocol.hpp"

namespace qnva {

/// m active networks; each pairs one coordinator with at least two
/// aggregators. Aggregator positions within a network are their 1-based
/// index in the id list. Networks never exchange traffic.
struct Topology {
    struct Network {
        int coordinator = 0;
        std::vector<int> aggregators{};
    };

    std::vector<Network> networks{};

    static Topology single(int aggregators) {
        Topology t;
        Network net;
        net.coordinator = 0;
        for (int k = 1; k <= aggregators; ++k) net.aggregators.push_back(k);
        t.networks.push_back(std::move(net));
        return t;
    }

    int verifier_count() const { return static_cast<int>(networks.size()); }

    void validate() const {
        if (networks.empty()) throw ConfigError("topology: at least one network required");
        for (const auto& net : networks) {
            if (net.aggregators.size() < 2) {
                throw ConfigError("topology: every network needs at least two aggregators");
            }
            std::set<int> unique(net.aggregators.begin(), net.aggregators.end());
            if (unique.size() != net.aggregators.size()) {
                throw ConfigError("topology: duplicate aggregator id within a network");
            }
        }
    }
};

enum class Phase { Distribution, Validation, CoordinatorSend, PeerExchange, Decision };

inline const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Distribution: return "distribution";
        case Phase::Validation: return "validation";
        case Phase::CoordinatorSend: return "coordinator_send";
        case Phase::PeerExchange: return "peer_exchange";
        default: return "decision";
    }
}

/// FNV-1a 64-bit digest; stable across platforms so that transcripts are
/// byte-identical for a fixed seed.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

/// Ordered log of everything that happened in a round. Sender/receiver use
/// 0 for the coordinator, positive aggregator positions, and -1 for the
/// quantum source.
struct TranscriptEntry {
    Phase phase = Phase::Distribution;
    int network = 0;
    int sender = 0;
    int receiver = 0;
    std::uint64_t digest = 0;
    bool dropped = false;
};

struct Transcript {
    std::vector<TranscriptEntry> entries{};

    void append(Phase phase, int network, int sender, int receiver, std::uint64_t digest,
                bool dropped = false) {
        entries.push_back(TranscriptEntry{phase, network, sender, receiver, digest, dropped});
    }
};

struct Envelope {
    int sender = 0;
    int receiver = 0;
    OutcomeMessage message;
};

struct DeliveryPlan {
    std::vector<Envelope> deliveries{};
    std::vector<Envelope> dropped{};
};

/// Orders one phase's messages deterministically by (receiver, sender) and
/// drops anything sent by an actor the receiver has blacklisted. Duplicate
/// (sender, receiver) pairs indicate a harness bug.
inline DeliveryPlan deliver_phase(std::vector<Envelope> pending,
                                  const std::map<int, std::set<int>>& blocked_by_receiver) {
    std::sort(pending.begin(), pending.end(), [](const Envelope& a, const Envelope& b) {
        return std::pair(a.receiver, a.sender) < std::pair(b.receiver, b.sender);
    });
    for (std::size_t i = 1; i < pending.size(); ++i) {
        if (pending[i - 1].receiver == pending[i].receiver &&
            pending[i - 1].sender == pending[i].sender) {
            throw ProtocolError("deliver_phase: duplicate (sender, receiver) pair in one phase");
        }
    }
    DeliveryPlan plan;
    for (auto& envelope : pending) {
        const auto blocked = blocked_by_receiver.find(envelope.receiver);
        const bool drop = blocked != blocked_by_receiver.end() &&
                          blocked->second.count(envelope.sender) > 0;
        (drop ? plan.dropped : plan.deliveries).push_back(std::move(envelope));
    }
    return plan;
}

}  // namespace qnva

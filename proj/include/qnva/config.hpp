#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnva/errors.hpp"
#include "qnva/experiments.hpp"
#include "qnva/network.hpp"
#include "qnva/round.hpp"

namespace qnva {

/// Explicit actor behavior assignments; anything not listed acts honestly.
struct VerifierSpec {
    int network = 1;
    std::string kind = "honest";  // honest | inconsistent_proof | contradictory
    int outcome = 1;
    int victim = 1;
    std::vector<int> targets{};
};

struct AggregatorSpec {
    int network = 1;
    int id = 1;
    std::string kind = "honest";          // honest | forger
    std::string strategy = "exact_count";  // exact_count | uniform
    int attacked = 0;                      // 0 -> lowest peer position
};

struct BehaviorsSpec {
    std::vector<VerifierSpec> verifiers{};
    std::vector<AggregatorSpec> aggregators{};
};

/// A complete, reproducible experiment description. The seed is mandatory:
/// no run ever falls back to wall-clock randomness.
struct ScenarioConfig {
    std::string experiment = "round";  // round | detection | forge_success | expected_counts
    std::vector<int> networks{2};      // aggregators per active network; m = size
    int degree = 16;
    int validation_tuples = 0;  // 0 -> degree / 4
    double validation_threshold = 0.05;
    double epsilon = 0.0;

    double z_count = 4.0;
    std::optional<double> mismatch_budget{};
    std::optional<double> set_diff_budget{};
    bool strict_mode = false;

    std::string scenario = "honest";            // honest | s1 | s2 | s3
    std::string forge_strategy = "exact_count";  // exact_count | uniform
    std::string forge_pipeline = "pair_pinned";  // pair_pinned | pair_sampled | full_round
    std::optional<BehaviorsSpec> behaviors{};

    std::uint64_t trials = 1;
    std::optional<std::uint64_t> seed{};
    int workers = 1;

    std::string output_format = "json";  // json | csv
    std::string output_path = "";        // empty -> stdout

    void validate() const {
        static const std::vector<std::string> experiments{"round", "detection", "forge_success",
                                                          "expected_counts"};
        static const std::vector<std::string> scenarios{"honest", "s1", "s2", "s3"};
        static const std::vector<std::string> strategies{"exact_count", "uniform"};
        static const std::vector<std::string> pipelines{"pair_pinned", "pair_sampled",
                                                        "full_round"};
        const auto oneof = [](const std::string& v, const std::vector<std::string>& allowed,
                              const char* field) {
            for (const auto& a : allowed) {
                if (v == a) return;
            }
            throw ConfigError(std::string("config: unknown ") + field + " '" + v + "'");
        };
        oneof(experiment, experiments, "experiment");
        oneof(scenario, scenarios, "scenario");
        oneof(forge_strategy, strategies, "forge_strategy");
        oneof(forge_pipeline, pipelines, "forge_pipeline");
        if (output_format != "json" && output_format != "csv") {
            throw ConfigError("config: output format must be json or csv");
        }
        if (!seed) throw ConfigError("config: seed is required; experiments never self-seed");
        if (degree < 4 || degree % 4 != 0) {
            throw ConfigError("config: degree must be divisible by 4 and at least 4, got " +
                              std::to_string(degree));
        }
        if (networks.empty()) throw ConfigError("config: at least one network required");
        for (int n : networks) {
            if (n < 2) throw ConfigError("config: every network needs at least two aggregators");
        }
        if (!(epsilon >= 0.0 && epsilon < 1.0)) {
            throw ConfigError("config: epsilon must lie in [0, 1)");
        }
        if (!(validation_threshold >= 0.0 && validation_threshold < 1.0)) {
            throw ConfigError("config: validation threshold must lie in [0, 1)");
        }
        if (validation_tuples < 0) throw ConfigError("config: validation_tuples must be >= 0");
        if (trials < 1) throw ConfigError("config: trials must be >= 1");
        if (workers < 1) throw ConfigError("config: workers must be >= 1");
        if (z_count <= 0.0) throw ConfigError("config: z_count must be positive");
        if (behaviors) {
            const int m = static_cast<int>(networks.size());
            for (const auto& v : behaviors->verifiers) {
                if (v.network < 1 || v.network > m) {
                    throw ConfigError("config: verifier behavior references unknown network " +
                                      std::to_string(v.network));
                }
                const int n = networks[static_cast<std::size_t>(v.network - 1)];
                if (v.victim < 1 || v.victim > n) {
                    throw ConfigError("config: verifier victim id out of range");
                }
                for (int t : v.targets) {
                    if (t < 1 || t > n) throw ConfigError("config: verifier target id out of range");
                }
            }
            for (const auto& a : behaviors->aggregators) {
                if (a.network < 1 || a.network > m) {
                    throw ConfigError("config: aggregator behavior references unknown network " +
                                      std::to_string(a.network));
                }
                const int n = networks[static_cast<std::size_t>(a.network - 1)];
                if (a.id < 1 || a.id > n) {
                    throw ConfigError("config: aggregator behavior references unknown id " +
                                      std::to_string(a.id));
                }
                if (a.attacked != 0 && (a.attacked < 1 || a.attacked > n || a.attacked == a.id)) {
                    throw ConfigError("config: attacked position out of range");
                }
            }
        }
    }

    Topology topology() const {
        Topology t;
        for (int n : networks) {
            Topology::Network net;
            net.coordinator = 0;
            for (int k = 1; k <= n; ++k) net.aggregators.push_back(k);
            t.networks.push_back(std::move(net));
        }
        return t;
    }

    TolerancePolicy tolerance() const {
        TolerancePolicy tol;
        tol.z_count = z_count;
        tol.epsilon = epsilon;
        tol.mismatch_budget = mismatch_budget;
        tol.set_diff_budget = set_diff_budget;
        tol.strict_mode = strict_mode;
        return tol;
    }

    RoundParams round_params() const {
        RoundParams params;
        params.degree = degree;
        params.validation_tuples = validation_tuples;
        params.validation_threshold = validation_threshold;
        params.noise = NoiseModel{epsilon};
        params.tolerance = tolerance();
        return params;
    }

    ForgeStrategy strategy() const {
        return forge_strategy == "uniform" ? ForgeStrategy::UniformGuess
                                           : ForgeStrategy::ExactCountGuess;
    }

    ForgePipeline pipeline() const {
        if (forge_pipeline == "pair_sampled") return ForgePipeline::PairSampled;
        if (forge_pipeline == "full_round") return ForgePipeline::FullRound;
        return ForgePipeline::PairPinned;
    }

    Scenario scenario_value() const {
        if (scenario == "s1") return Scenario::S1;
        if (scenario == "s2") return Scenario::S2;
        if (scenario == "s3") return Scenario::S3;
        return Scenario::Honest;
    }

    /// One behavior assignment per network, from the scenario shorthand with
    /// explicit overrides applied on top.
    std::vector<NetworkBehaviors> network_behaviors() const {
        std::vector<NetworkBehaviors> all(networks.size());
        for (std::size_t i = 0; i < networks.size(); ++i) {
            NetworkBehaviors& b = all[i];
            switch (scenario_value()) {
                case Scenario::Honest:
                    b.verifier = VerifierBehavior::honest(true);
                    break;
                case Scenario::S1:
                    b.verifier = VerifierBehavior::inconsistent_proof(true, 1);
                    break;
                case Scenario::S2:
                    b.verifier = VerifierBehavior::honest(true);
                    b.aggregators[2] = AggregatorBehavior::forger(strategy(), 1);
                    break;
                case Scenario::S3:
                    b.verifier = VerifierBehavior::contradictory(true, {1});
                    break;
            }
        }
        if (behaviors) {
            for (const auto& v : behaviors->verifiers) {
                VerifierBehavior vb;
                vb.outcome = v.outcome != 0;
                if (v.kind == "honest") {
                    vb = VerifierBehavior::honest(vb.outcome);
                } else if (v.kind == "inconsistent_proof") {
                    vb = VerifierBehavior::inconsistent_proof(vb.outcome, v.victim);
                } else if (v.kind == "contradictory") {
                    vb = VerifierBehavior::contradictory(vb.outcome, v.targets);
                } else {
                    throw ConfigError("config: unknown verifier kind '" + v.kind + "'");
                }
                all[static_cast<std::size_t>(v.network - 1)].verifier = vb;
            }
            for (const auto& a : behaviors->aggregators) {
                AggregatorBehavior ab = AggregatorBehavior::honest();
                if (a.kind == "forger") {
                    const ForgeStrategy fs = a.strategy == "uniform"
                                                 ? ForgeStrategy::UniformGuess
                                                 : ForgeStrategy::ExactCountGuess;
                    ab = AggregatorBehavior::forger(fs, a.attacked);
                } else if (a.kind != "honest") {
                    throw ConfigError("config: unknown aggregator kind '" + a.kind + "'");
                }
                all[static_cast<std::size_t>(a.network - 1)].aggregators[a.id] = ab;
            }
        }
        return all;
    }
};

namespace detail {

template <typename T>
void read_field(const nlohmann::ordered_json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline void read_optional_double(const nlohmann::ordered_json& j, const char* key,
                                 std::optional<double>& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<double>();
}

}  // namespace detail

inline ScenarioConfig config_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw ConfigError("config: top-level JSON object expected");
    ScenarioConfig cfg;
    detail::read_field(j, "experiment", cfg.experiment);
    detail::read_field(j, "networks", cfg.networks);
    detail::read_field(j, "degree", cfg.degree);
    detail::read_field(j, "validation_tuples", cfg.validation_tuples);
    detail::read_field(j, "validation_threshold", cfg.validation_threshold);
    detail::read_field(j, "epsilon", cfg.epsilon);
    if (j.contains("tolerance")) {
        const auto& t = j.at("tolerance");
        detail::read_field(t, "z_count", cfg.z_count);
        detail::read_optional_double(t, "mismatch_budget", cfg.mismatch_budget);
        detail::read_optional_double(t, "set_diff_budget", cfg.set_diff_budget);
        detail::read_field(t, "strict_mode", cfg.strict_mode);
    }
    detail::read_field(j, "scenario", cfg.scenario);
    detail::read_field(j, "forge_strategy", cfg.forge_strategy);
    detail::read_field(j, "forge_pipeline", cfg.forge_pipeline);
    if (j.contains("behaviors") && !j.at("behaviors").is_null()) {
        BehaviorsSpec spec;
        const auto& b = j.at("behaviors");
        if (b.contains("verifiers")) {
            for (const auto& v : b.at("verifiers")) {
                VerifierSpec vs;
                detail::read_field(v, "network", vs.network);
                detail::read_field(v, "kind", vs.kind);
                detail::read_field(v, "outcome", vs.outcome);
                detail::read_field(v, "victim", vs.victim);
                detail::read_field(v, "targets", vs.targets);
                spec.verifiers.push_back(std::move(vs));
            }
        }
        if (b.contains("aggregators")) {
            for (const auto& a : b.at("aggregators")) {
                AggregatorSpec as;
                detail::read_field(a, "network", as.network);
                detail::read_field(a, "id", as.id);
                detail::read_field(a, "kind", as.kind);
               detail::read_field(a, "strategy", as.strategy);
                detail::read_field(a, "attacked", as.attacked);
                spec.aggregators.push_back(std::move(as));
            }
        }
        cfg.behaviors = std::move(spec);
    }
    detail::read_field(j, "trials", cfg.trials);
    if (j.contains("seed") && !j.at("seed").is_null()) {
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    detail::read_field(j, "workers", cfg.workers);
    if (j.contains("output")) {
        const auto& o = j.at("output");
        detail::read_field(o, "format", cfg.output_format);
        detail::read_field(o, "path", cfg.output_path);
    }
    return cfg;
}

inline nlohmann::ordered_json config_to_json(const ScenarioConfig& cfg) {
    nlohmann::ordered_json j;
    j["experiment"] = cfg.experiment;
    j["networks"] = cfg.networks;
    j["degree"] = cfg.degree;
    j["validation_tuples"] = cfg.validation_tuples;
    j["validation_threshold"] = cfg.validation_threshold;
    j["epsilon"] = cfg.epsilon;
    j["tolerance"] = {
        {"z_count", cfg.z_count},
        {"mismatch_budget", cfg.mismatch_budget ? nlohmann::ordered_json(*cfg.mismatch_budget)
                                                : nlohmann::ordered_json(nullptr)},
        {"set_diff_budget", cfg.set_diff_budget ? nlohmann::ordered_json(*cfg.set_diff_budget)
                                                : nlohmann::ordered_json(nullptr)},
        {"strict_mode", cfg.strict_mode},
    };
    j["scenario"] = cfg.scenario;
    j["forge_strategy"] = cfg.forge_strategy;
    j["forge_pipeline"] = cfg.forge_pipeline;
    if (cfg.behaviors) {
        nlohmann::ordered_json verifiers = nlohmann::ordered_json::array();
        for (const auto& v : cfg.behaviors->verifiers) {
            verifiers.push_back({{"network", v.network},
                                 {"kind", v.kind},
                                 {"outcome", v.outcome},
                                 {"victim", v.victim},
                                 {"targets", v.targets}});
        }
        nlohmann::ordered_json aggregators = nlohmann::ordered_json::array();
        for (const auto& a : cfg.behaviors->aggregators) {
            aggregators.push_back({{"network", a.network},
                                   {"id", a.id},
                                   {"kind", a.kind},
                                   {"strategy", a.strategy},
                                   {"attacked", a.attacked}});
        }
        j["behaviors"] = {{"verifiers", verifiers}, {"aggregators", aggregators}};
    } else {
        j["behaviors"] = nullptr;
    }
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed ? nlohmann::ordered_json(*cfg.seed) : nlohmann::ordered_json(nullptr);
    j["workers"] = cfg.workers;
    j["output"] = {{"format", cfg.output_format}, {"path", cfg.output_path}};
    return j;
}

inline ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    return config_from_json(j);
}

}  // namespace qnva

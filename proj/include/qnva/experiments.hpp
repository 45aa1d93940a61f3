#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qnva/consistency.hpp"
#include "qnva/proof.hpp"
#include "qnva/rng.hpp"
#include "qnva/round.hpp"
#include "qnva/source.hpp"

namespace qnva {

/// Exact binomial coefficient; every intermediate division is exact.
inline boost::multiprecision::cpp_int binomial_exact(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    boost::multiprecision::cpp_int result = 1;
    for (unsigned i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

/// Probability that a cheating aggregator guesses the one correct placement
/// of degree/4 bits among degree/2 revealed tuples: 1 / C(degree/2, degree/4).
/// Computed with exact big integers, converted to floating form last.
inline double analytic_cheat_probability(int degree) {
    if (degree < 4 || degree % 4 != 0) {
        throw std::invalid_argument(
            "analytic_cheat_probability: degree must be a multiple of 4 and at least 4");
    }
    const auto configurations = binomial_exact(static_cast<unsigned>(degree / 2),
                                               static_cast<unsigned>(degree / 4));
    return 1.0 / configurations.convert_to<double>();
}

struct Table1Row {
    int degree = 0;
    int half = 0;
    int quarter = 0;
    double cheat_probability = 0.0;
};

/// Forgery success probability for the reference degrees 4..64.
inline std::vector<Table1Row> table1() {
    std::vector<Table1Row> rows;
    for (int d : {4, 8, 16, 32, 64}) {
        rows.push_back(Table1Row{d, d / 2, d / 4, analytic_cheat_probability(d)});
    }
    return rows;
}

namespace detail {

/// Runs `trials` trials split across `workers` threads. Each trial derives
/// its randomness from (base, trial index) and accumulators are merged with
/// exact integer arithmetic, so results are identical for any worker count.
template <typename Accumulator, typename PerTrial>
Accumulator run_trials(std::uint64_t trials, int workers, const Rng& base,
                       const PerTrial& per_trial) {
    if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
    if (workers < 1) workers = 1;
    const std::uint64_t worker_count =
        std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), trials);

    std::vector<Accumulator> parts(static_cast<std::size_t>(worker_count));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(worker_count));
    const std::uint64_t chunk = trials / worker_count;
    const std::uint64_t remainder = trials % worker_count;
    std::uint64_t start = 0;
    for (std::uint64_t w = 0; w < worker_count; ++w) {
        const std::uint64_t count = chunk + (w < remainder ? 1 : 0);
        const std::uint64_t begin = start;
        const std::uint64_t end = start + count;
        start = end;
        threads.emplace_back([&, begin, end, w] {
            Accumulator& acc = parts[static_cast<std::size_t>(w)];
            for (std::uint64_t t = begin; t < end; ++t) {
                Rng trial_rng = base.derive(t + 1);
                per_trial(t, trial_rng, acc);
            }
        });
    }
    for (auto& thread : threads) thread.join();

    Accumulator total;
    for (const auto& part : parts) total.merge(part);
    return total;
}

/// Verifier bit layout whose victim/forger pair counts sit exactly at their
/// expectations: the forger's position splits degree/2 : degree/2 between
/// the outcome and its negation, and each half holds exactly degree/4
/// outcome bits at the victim's position. Every trial then realizes the
/// guessing game the analytic formula counts: one correct subset out of
/// C(degree/2, degree/4). Remaining positions are uniform.
inline TupleSequence pinned_pair_sequence(int degree, int width, int victim, int forger,
                                          bool outcome, Rng& rng) {
    TupleSequence alice(degree, width);
    std::vector<int> order(static_cast<std::size_t>(degree));
    for (int l = 1; l <= degree; ++l) order[static_cast<std::size_t>(l - 1)] = l;
    rng.shuffle(order);

    const int half = degree / 2;
    const int quarter = degree / 4;
    for (int i = 0; i < degree; ++i) {
        const int l = order[static_cast<std::size_t>(i)];
        const bool in_first_half = i < half;
        alice.set_bit(forger, l, in_first_half ? outcome : !outcome);
        const int offset = in_first_half ? i : i - half;
        alice.set_bit(victim, l, offset < quarter ? outcome : !outcome);
    }
    for (int k = 1; k <= width; ++k) {
        if (k == victim || k == forger) continue;
        for (int l = 1; l <= degree; ++l) alice.set_bit(k, l, rng.bit());
    }
    return alice;
}

}  // namespace detail

/// Rate estimate with a normal-approximation confidence interval; `analytic`
/// carries the closed-form reference when one exists.
struct EstimateReport {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double rate = 0.0;
    double ci95_halfwidth = 0.0;
    std::optional<double> analytic{};
    std::uint64_t seed = 0;
    std::uint64_t skipped = 0;

    static EstimateReport from_counts(std::uint64_t trials, std::uint64_t successes,
                                      std::optional<double> analytic, std::uint64_t seed,
                                      std::uint64_t skipped = 0) {
        EstimateReport r;
        r.trials = trials;
        r.successes = successes;
        r.rate = trials == 0 ? 0.0
                             : static_cast<double>(successes) / static_cast<double>(trials);
        r.ci95_halfwidth =
            trials == 0 ? 0.0
                        : 1.96 * std::sqrt(r.rate * (1.0 - r.rate) / static_cast<double>(trials));
        r.analytic = analytic;
        r.seed = seed;
        r.skipped = skipped;
        return r;
    }
};

/// How forge-success trials are generated.
///
/// PairPinned (default) isolates the victim/forger pair with the count
/// layout pinned at its expectations, so the estimate converges to the
/// analytic value. PairSampled keeps the isolated pair but draws raw
/// sequences, whose count fluctuations make forgeries strictly harder to
/// land. FullRound runs complete rounds and scores a success when the victim
/// wrongly blames the verifier.
enum class ForgePipeline { PairPinned, PairSampled, FullRound };

inline const char* forge_pipeline_name(ForgePipeline p) {
    switch (p) {
        case ForgePipeline::PairPinned: return "pair_pinned";
        case ForgePipeline::PairSampled: return "pair_sampled";
        default: return "full_round";
    }
}

/// Estimates the probability that a forged opposite-outcome proof passes the
/// victim's cross-check.
inline EstimateReport estimate_forge_success(int degree, int aggregators, std::uint64_t trials,
                                             ForgeStrategy strategy, const TolerancePolicy& tol,
                                             std::uint64_t seed,
                                             ForgePipeline pipeline = ForgePipeline::PairPinned,
                                             int workers = 1) {
    if (degree < 4 || degree % 4 != 0) {
        throw std::invalid_argument("estimate_forge_success: degree must be a multiple of 4");
    }
    if (aggregators < 2) {
        throw std::invalid_argument("estimate_forge_success: need at least two aggregators");
    }

    struct Counters {
        std::uint64_t successes = 0;
        std::uint64_t skipped = 0;
        void merge(const Counters& other) {
            successes += other.successes;
            skipped += other.skipped;
        }
    };

    const Rng base = Rng(seed).derive(0x464F52ULL);
    constexpr int kVictim = 1;
    constexpr int kForger = 2;

    Counters total;
    if (pipeline == ForgePipeline::FullRound) {
        const Topology topology = Topology::single(aggregators);
        NetworkBehaviors behaviors;
        behaviors.verifier = VerifierBehavior::honest(true);
        behaviors.aggregators[kForger] = AggregatorBehavior::forger(strategy, kVictim);
        RoundParams params;
        params.degree = degree;
        params.tolerance = tol;
        const std::vector<NetworkBehaviors> all{behaviors};
        total = detail::run_trials<Counters>(
            trials, workers, base, [&](std::uint64_t, Rng& rng, Counters& acc) {
                try {
                    const RoundOutcome outcome = run_round(topology, all, params, rng);
                    if (outcome.aborted) {
                        ++acc.skipped;
                        return;
                    }
                    const auto& victim = outcome.at(1, kVictim);
                    const bool fooled =
                        std::find(victim.malicious_verifiers.begin(),
                                  victim.malicious_verifiers.end(),
                                  0) != victim.malicious_verifiers.end();
                    if (fooled) ++acc.successes;
                } catch (const DegenerateInput&) {
                    ++acc.skipped;
                }
            });
    } else {
        const bool pinned = pipeline == ForgePipeline::PairPinned;
        total = detail::run_trials<Counters>(
            trials, workers, base, [&](std::uint64_t, Rng& rng, Counters& acc) {
                const bool outcome = rng.bit();
                TupleSequence alice =
                    pinned ? detail::pinned_pair_sequence(degree, aggregators, kVictim, kForger,
                                                          outcome, rng)
                           : TupleSequence(degree, aggregators);
                if (!pinned) {
                    for (int l = 1; l <= degree; ++l) {
                        for (int k = 1; k <= aggregators; ++k) alice.set_bit(k, l, rng.bit());
                    }
                }
                const TupleSequence victim_proof = build_proof(alice, kVictim, outcome);
                const TupleSequence forger_received = build_proof(alice, kForger, outcome);
                try {
                    const TupleSequence forged = forge_proof(forger_received, kForger, !outcome,
                                                             strategy, kVictim, rng);
                    const TestResult check = is_bob_proof_consistent(
                        kVictim, kForger, outcome, victim_proof, !outcome, forged, tol);
                    if (check.passed) ++acc.successes;
                } catch (const DegenerateInput&) {
                    ++acc.skipped;
                }
            });
    }

    return EstimateReport::from_counts(trials - total.skipped, total.successes,
                                       analytic_cheat_probability(degree), seed, total.skipped);
}

struct CountSummary {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Empirical means of the honest-proof count statistics.
struct CountStatistics {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    CountSummary revealed{};   // tuples carrying the outcome at the own position
    CountSummary cryptic{};    // withheld tuples
    CountSummary pair_same{};  // (outcome, outcome) pairs against a second position
    CountSummary pair_diff{};  // (outcome, !outcome) pairs
    bool sum_identity_held = false;  // revealed + cryptic == degree in every trial
};

/// Measures |revealed|, |cryptic| and the two pair counts over honest proofs
/// built from raw correlated draws; their expectations are degree/2,
/// degree/2, degree/4 and degree/4.
inline CountStatistics expected_counts_experiment(int degree, int aggregators,
                                                  std::uint64_t trials, std::uint64_t seed,
                                                  int workers = 1) {
    if (degree < 4 || degree % 4 != 0) {
        throw std::invalid_argument("expected_counts_experiment: degree must be a multiple of 4");
    }
    if (aggregators < 2) {
        throw std::invalid_argument("expected_counts_experiment: need at least two aggregators");
    }

    struct Sums {
        std::uint64_t sum[4] = {0, 0, 0, 0};
        std::uint64_t sum_sq[4] = {0, 0, 0, 0};
        std::uint64_t identity_violations = 0;
        void merge(const Sums& other) {
            for (int i = 0; i < 4; ++i) {
                sum[i] += other.sum[i];
                sum_sq[i] += other.sum_sq[i];
            }
            identity_violations += other.identity_violations;
        }
    };

    const Rng base = Rng(seed).derive(0x434E54ULL);
    const Sums sums = detail::run_trials<Sums>(
        trials, workers, base, [&](std::uint64_t, Rng& rng, Sums& acc) {
            const bool outcome = rng.bit();
            TupleSequence alice(degree, aggregators);
            for (int l = 1; l <= degree; ++l) {
                for (int k = 1; k <= aggregators; ++k) alice.set_bit(k, l, rng.bit());
            }
            const TupleSequence proof = build_proof(alice, 1, outcome);
            const std::uint64_t counts[4] = {
                positions_with(proof, 1, outcome).size(),
                cryptic_positions(proof).size(),
                positions_with_pair(proof, 1, 2, outcome, outcome).size(),
                positions_with_pair(proof, 1, 2, outcome, !outcome).size(),
            };
            for (int i = 0; i < 4; ++i) {
                acc.sum[i] += counts[i];
                acc.sum_sq[i] += counts[i] * counts[i];
            }
            if (counts[0] + counts[1] != static_cast<std::uint64_t>(degree)) {
                ++acc.identity_violations;
            }
        });

    CountStatistics stats;
    stats.trials = trials;
    stats.seed = seed;
    stats.sum_identity_held = sums.identity_violations == 0;
    CountSummary* summaries[4] = {&stats.revealed, &stats.cryptic, &stats.pair_same,
                                  &stats.pair_diff};
    const long double n = static_cast<long double>(trials);
    for (int i = 0; i < 4; ++i) {
        const long double mean = static_cast<long double>(sums.sum[i]) / n;
        long double variance = 0.0L;
        if (trials > 1) {
            variance = (static_cast<long double>(sums.sum_sq[i]) - n * mean * mean) / (n - 1.0L);
            if (variance < 0.0L) variance = 0.0L;
        }
        summaries[i]->mean = static_cast<double>(mean);
        summaries[i]->standard_error = static_cast<double>(std::sqrt(variance / n));
    }
    return stats;
}

enum class Scenario { Honest, S1, S2, S3 };

inline const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Honest: return "honest";
        case Scenario::S1: return "s1";
        case Scenario::S2: return "s2";
        default: return "s3";
    }
}

/// Per-scenario round outcomes over full protocol rounds.
///
/// true_detection: the scenario's designated check succeeded (see below);
/// false_alarm: an uninvolved honest actor was blamed or an honest round
/// produced any blacklist entry; misattribution: blame landed on the wrong
/// actor (for S2 this converges to the analytic cheat probability).
struct DetectionReport {
    Scenario scenario = Scenario::Honest;
    int degree = 0;
    int aggregators = 0;
    std::uint64_t trials = 0;
    double true_detection = 0.0;
    double false_alarm = 0.0;
    double misattribution = 0.0;
    std::uint64_t aborted = 0;
    std::uint64_t skipped = 0;
    std::optional<double> analytic{};
    std::uint64_t seed = 0;
};

inline DetectionReport detection_rate(Scenario scenario, int degree, int aggregators,
                                      std::uint64_t trials, const TolerancePolicy& tol,
                                      const NoiseModel& noise, std::uint64_t seed,
                                      int workers = 1) {
    if (aggregators < 2) {
        throw std::invalid_argument("detection_rate: need at least two aggregators");
    }

    struct Counters {
        std::uint64_t completed = 0;
        std::uint64_t detected = 0;
        std::uint64_t false_alarms = 0;
        std::uint64_t misattributions = 0;
        std::uint64_t aborted = 0;
        std::uint64_t skipped = 0;
        void merge(const Counters& other) {
            completed += other.completed;
            detected += other.detected;
            false_alarms += other.false_alarms;
            misattributions += other.misattributions;
            aborted += other.aborted;
            skipped += other.skipped;
        }
    };

    constexpr int kVictim = 1;
    constexpr int kForger = 2;
    const Topology topology = Topology::single(aggregators);
    RoundParams params;
    params.degree = degree;
    params.noise = noise;
    params.tolerance = tol;
    params.validate();

    const Rng base = Rng(seed).derive(0x444554ULL);
    const Counters counters = detail::run_trials<Counters>(
        trials, workers, base, [&](std::uint64_t, Rng& rng, Counters& acc) {
            const bool outcome = rng.bit();
            NetworkBehaviors behaviors;
            switch (scenario) {
                case Scenario::Honest:
                    behaviors.verifier = VerifierBehavior::honest(outcome);
                    break;
                case Scenario::S1:
                    behaviors.verifier = VerifierBehavior::inconsistent_proof(outcome, kVictim);
                    break;
                case Scenario::S2:
                    behaviors.verifier = VerifierBehavior::honest(outcome);
                    behaviors.aggregators[kForger] =
                        AggregatorBehavior::forger(ForgeStrategy::ExactCountGuess, kVictim);
                    break;
                case Scenario::S3:
                    behaviors.verifier = VerifierBehavior::contradictory(outcome, {kVictim});
                    break;
            }
            RoundOutcome round;
            try {
                round = run_round(topology, {behaviors}, params, rng);
            } catch (const DegenerateInput&) {
                ++acc.skipped;
                return;
            }
            if (round.aborted) {
                ++acc.aborted;
                return;
            }
            ++acc.completed;

            const auto blames_verifier = [](const RoundOutcome::PerAggregator& a) {
                return std::find(a.malicious_verifiers.begin(), a.malicious_verifiers.end(), 0) !=
                       a.malicious_verifiers.end();
            };
            const auto blames_aggregator = [](const RoundOutcome::PerAggregator& a, int id) {
                return std::find(a.malicious_aggregators.begin(), a.malicious_aggregators.end(),
                                 id) != a.malicious_aggregators.end();
            };

            switch (scenario) {
                case Scenario::Honest: {
                    bool any_blame = false;
                    for (const auto& a : round.aggregators) {
                        if (!a.malicious_aggregators.empty() || !a.malicious_verifiers.empty()) {
                            any_blame = true;
                        }
                    }
                    if (any_blame) {
                        ++acc.false_alarms;
                    } else {
                        ++acc.detected;  // clean honest round
                    }
                    break;
                }
                case Scenario::S1: {
                    const auto& victim = round.at(1, kVictim);
                    const bool flagged =
                        blames_verifier(victim) &&
                        victim.decision == Decision::RejectFakeBlameVerifier &&
                        (victim.coordinator_failure == FailureReason::BitMismatch ||
                         victim.coordinator_failure == FailureReason::CountOffK);
                    if (flagged) ++acc.detected;
                    if (!victim.malicious_aggregators.empty()) ++acc.misattributions;
                    for (const auto& a : round.aggregators) {
                        if (a.position != kVictim &&
                            (!a.malicious_aggregators.empty() || blames_verifier(a))) {
                            ++acc.false_alarms;
                            break;
                        }
                    }
                    break;
                }
                case Scenario::S2: {
                    const auto& victim = round.at(1, kVictim);
                    const bool kept_verdict =
                        victim.decision ==
                        (outcome ? Decision::AcceptTrue : Decision::AcceptFake);
                    if (blames_aggregator(victim, kForger) && kept_verdict) ++acc.detected;
                    if (blames_verifier(victim)) ++acc.misattributions;
                    for (const auto& a : round.aggregators) {
                        if (a.position != kVictim && a.position != kForger &&
                            blames_verifier(a)) {
                            ++acc.false_alarms;
                            break;
                        }
                    }
                    break;
                }
                case Scenario::S3: {
                    // Every aggregator that saw the opposite claim must blame
                    // the verifier; with the default pair this is both sides.
                    bool all_conflicted_blame = true;
                    bool any_misattribution = false;
                    for (const auto& a : round.aggregators) {
                        if (!blames_verifier(a)) all_conflicted_blame = false;
                        if (!a.malicious_aggregators.empty()) any_misattribution = true;
                    }
                    if (all_conflicted_blame) ++acc.detected;
                    if (any_misattribution) ++acc.misattributions;
                    break;
                }
            }
        });

    DetectionReport report;
    report.scenario = scenario;
    report.degree = degree;
    report.aggregators = aggregators;
    report.trials = counters.completed;
    report.aborted = counters.aborted;
    report.skipped = counters.skipped;
    report.seed = seed;
    if (counters.completed > 0) {
        const double n = static_cast<double>(counters.completed);
        report.true_detection = static_cast<double>(counters.detected) / n;
        report.false_alarm = static_cast<double>(counters.false_alarms) / n;
        report.misattribution = static_cast<double>(counters.misattributions) / n;
    }
    if (scenario == Scenario::S2) report.analytic = analytic_cheat_probability(degree);
    return report;
}

}  // namespace qnva

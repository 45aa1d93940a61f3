#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "qnva/consistency.hpp"
#include "qnva/experiments.hpp"
#include "qnva/network.hpp"
#include "qnva/round.hpp"
#include "qnva/source.hpp"

namespace qnva {

using Json = nlohmann::ordered_json;

/// Shortest-round-trip style formatting; stable across runs so reports can
/// be compared byte for byte.
inline std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

inline Json to_json(const TestResult& result) {
    Json observed = Json::object();
    for (const auto& [name, value] : result.observed) observed[name] = value;
    return Json{{"passed", result.passed},
                {"failure_reason", failure_reason_name(result.failure_reason)},
                {"observed", observed}};
}

inline Json to_json(const EstimateReport& report) {
    Json j{{"trials", report.trials},
           {"successes", report.successes},
           {"rate", report.rate},
           {"ci95_halfwidth", report.ci95_halfwidth},
           {"analytic", nullptr},
           {"seed", report.seed},
           {"skipped", report.skipped}};
    if (report.analytic) j["analytic"] = *report.analytic;
    return j;
}

inline Json to_json(const CountStatistics& stats) {
    const auto summary = [](const CountSummary& s) {
        return Json{{"mean", s.mean}, {"standard_error", s.standard_error}};
    };
    return Json{{"trials", stats.trials},
                {"seed", stats.seed},
                {"revealed", summary(stats.revealed)},
                {"cryptic", summary(stats.cryptic)},
                {"pair_same", summary(stats.pair_same)},
                {"pair_diff", summary(stats.pair_diff)},
                {"sum_identity_held", stats.sum_identity_held}};
}

inline Json to_json(const DetectionReport& report) {
    Json j{{"scenario", scenario_name(report.scenario)},
           {"d", report.degree},
           {"n", report.aggregators},
           {"trials", report.trials},
           {"true_detection", report.true_detection},
           {"false_alarm", report.false_alarm},
           {"misattribution", report.misattribution},
           {"aborted", report.aborted},
           {"skipped", report.skipped},
           {"analytic", nullptr},
           {"seed", report.seed}};
    if (report.analytic) j["analytic"] = *report.analytic;
    return j;
}

inline Json to_json(const RoundOutcome& outcome) {
    Json decisions = Json::array();
    Json m_a = Json::array();
    Json m_v = Json::array();
    Json messages = Json::array();
    for (const auto& aggregator : outcome.aggregators) {
        decisions.push_back(decision_name(aggregator.decision));
        m_a.push_back(aggregator.malicious_aggregators);
        m_v.push_back(aggregator.malicious_verifiers);
        messages.push_back(aggregator.messages_sent);
    }
    return Json{{"decisions", decisions},
                {"m_a", m_a},
                {"m_v", m_v},
                {"aborted", outcome.aborted},
                {"messages_sent", outcome.messages_sent},
                {"messages_per_aggregator", messages},
                {"phases", outcome.phases}};
}

/// One JSON object per transcript entry, newline separated.
inline std::string to_jsonl(const Transcript& transcript) {
    std::string out;
    for (const auto& entry : transcript.entries) {
        Json j{{"phase", phase_name(entry.phase)},
               {"network", entry.network},
               {"sender", entry.sender},
               {"receiver", entry.receiver},
               {"digest", entry.digest},
               {"dropped", entry.dropped}};
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

inline std::string table1_csv() {
    std::string out = "d,half,quarter,probability\n";
    for (const auto& row : table1()) {
        out += std::to_string(row.degree) + "," + std::to_string(row.half) + "," +
               std::to_string(row.quarter) + "," + format_double(row.cheat_probability) + "\n";
    }
    return out;
}

inline std::string estimate_csv_header() { return "scenario,d,n,trials,rate,ci95,analytic,seed\n"; }

inline std::string estimate_csv_row(const std::string& scenario, int degree, int aggregators,
                                    const EstimateReport& report) {
    return scenario + "," + std::to_string(degree) + "," + std::to_string(aggregators) + "," +
           std::to_string(report.trials) + "," + format_double(report.rate) + "," +
           format_double(report.ci95_halfwidth) + "," +
           (report.analytic ? format_double(*report.analytic) : std::string()) + "," +
           std::to_string(report.seed) + "\n";
}

/// One row per scenario metric, same column layout as the estimate rows.
inline std::string detection_csv_rows(const DetectionReport& report) {
    const auto row = [&](const std::string& metric, double rate,
                         std::optional<double> analytic) {
        const double ci = report.trials == 0
                              ? 0.0
                              : 1.96 * std::sqrt(rate * (1.0 - rate) /
                                                 static_cast<double>(report.trials));
        return std::string(scenario_name(report.scenario)) + "_" + metric + "," +
               std::to_string(report.degree) + "," + std::to_string(report.aggregators) + "," +
               std::to_string(report.trials) + "," + format_double(rate) + "," +
               format_double(ci) + "," + (analytic ? format_double(*analytic) : std::string()) +
               "," + std::to_string(report.seed) + "\n";
    };
    std::string out;
    out += row("detection", report.true_detection, std::nullopt);
    out += row("false_alarm", report.false_alarm, std::nullopt);
    out += row("misattribution", report.misattribution, report.analytic);
    return out;
}

inline std::string bell_histogram_csv(BellState state,
                                      const std::array<std::uint64_t, 4>& histogram) {
    static const char* outcomes[4] = {"00", "01", "10", "11"};
    std::string out = "state,outcome,count\n";
    for (std::size_t i = 0; i < 4; ++i) {
        out += std::string(bell_state_name(state)) + "," + outcomes[i] + "," +
               std::to_string(histogram[i]) + "\n";
    }
    return out;
}

inline std::string bell_analytic_csv(BellState state) {
    static const char* outcomes[4] = {"00", "01", "10", "11"};
    const auto probs = bell_probabilities(state);
    std::string out = "state,outcome,weight\n";
    for (std::size_t i = 0; i < 4; ++i) {
        out += std::string(bell_state_name(state)) + "," + outcomes[i] + "," +
               format_double(probs[i]) + "\n";
    }
    return out;
}

inline std::string plus_histogram_csv(const std::array<std::uint64_t, 2>& histogram) {
    std::string out = "state,outcome,count\n";
    out += "plus,0," + std::to_string(histogram[0]) + "\n";
    out += "plus,1," + std::to_string(histogram[1]) + "\n";
    return out;
}

inline std::string plus_analytic_csv() {
    const auto probs = plus_probabilities();
    std::string out = "state,outcome,weight\n";
    out += "plus,0," + format_double(probs[0]) + "\n";
    out += "plus,1," + format_double(probs[1]) + "\n";
    return out;
}

}  // namespace qnva

// Command-line front end for the QNVA simulator: analytic tables, seeded
// Monte Carlo experiments, single protocol rounds and the measurement
// oracle. Every experiment requires an explicit seed and produces
// byte-identical output for identical inputs, regardless of --workers.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qnva/qnva.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAborted = 3;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw qnva::ConfigError("cannot open output file '" + path + "'");
    out << content;
}

int run_simulate(const std::string& config_path, std::optional<int> workers_override) {
    qnva::ScenarioConfig cfg = qnva::load_config_file(config_path);
    if (workers_override) cfg.workers = *workers_override;
    cfg.validate();

    const std::uint64_t seed = *cfg.seed;
    std::string content;
    bool aborted = false;

    if (cfg.experiment == "round") {
        const qnva::RoundOutcome outcome =
            qnva::run_round(cfg.topology(), cfg.network_behaviors(), cfg.round_params(),
                            qnva::Rng(seed));
        aborted = outcome.aborted;
        if (cfg.output_format == "json") {
            content = qnva::to_json(outcome).dump(2) + "\n";
        } else {
            content = qnva::to_jsonl(outcome.transcript);
        }
    } else if (cfg.experiment == "forge_success") {
        const int n = cfg.networks.front();
        const qnva::EstimateReport report = qnva::estimate_forge_success(
            cfg.degree, n, cfg.trials, cfg.strategy(), cfg.tolerance(), seed, cfg.pipeline(),
            cfg.workers);
        content = cfg.output_format == "json"
                      ? qnva::to_json(report).dump(2) + "\n"
                      : qnva::estimate_csv_header() +
                            qnva::estimate_csv_row("s2", cfg.degree, n, report);
    } else if (cfg.experiment == "expected_counts") {
        const qnva::CountStatistics stats = qnva::expected_counts_experiment(
            cfg.degree, cfg.networks.front(), cfg.trials, seed, cfg.workers);
        if (cfg.output_format == "json") {
            content = qnva::to_json(stats).dump(2) + "\n";
        } else {
            content = "statistic,mean,standard_error\n";
            content += "revealed," + qnva::format_double(stats.revealed.mean) + "," +
                       qnva::format_double(stats.revealed.standard_error) + "\n";
            content += "cryptic," + qnva::format_double(stats.cryptic.mean) + "," +
                       qnva::format_double(stats.cryptic.standard_error) + "\n";
            content += "pair_same," + qnva::format_double(stats.pair_same.mean) + "," +
                       qnva::format_double(stats.pair_same.standard_error) + "\n";
            content += "pair_diff," + qnva::format_double(stats.pair_diff.mean) + "," +
                       qnva::format_double(stats.pair_diff.standard_error) + "\n";
        }
    } else {  // detection
        const qnva::DetectionReport report = qnva::detection_rate(
            cfg.scenario_value(), cfg.degree, cfg.networks.front(), cfg.trials, cfg.tolerance(),
            qnva::NoiseModel{cfg.epsilon}, seed, cfg.workers);
        content = cfg.output_format == "json"
                      ? qnva::to_json(report).dump(2) + "\n"
                      : qnva::estimate_csv_header() + qnva::detection_csv_rows(report);
    }

    write_output(cfg.output_path, content);
    return aborted ? kExitAborted : kExitOk;
}

std::vector<int> parse_degree_list(const std::string& list) {
    std::vector<int> degrees;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) degrees.push_back(std::stoi(item));
    }
    if (degrees.empty()) throw qnva::ConfigError("sweep: empty degree list");
    return degrees;
}

int run_sweep(const std::string& scenario, const std::string& degree_list, std::uint64_t trials,
              std::uint64_t seed, int aggregators, const std::string& strategy,
              const std::string& pipeline, int workers, const std::string& out_path) {
    std::string lowered = scenario;
    for (auto& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    std::string content = qnva::estimate_csv_header();
    for (int d : parse_degree_list(degree_list)) {
        if (lowered == "s2") {
            const qnva::ForgeStrategy fs = strategy == "uniform"
                                               ? qnva::ForgeStrategy::UniformGuess
                                               : qnva::ForgeStrategy::ExactCountGuess;
            qnva::ForgePipeline fp = qnva::ForgePipeline::PairPinned;
            if (pipeline == "pair_sampled") fp = qnva::ForgePipeline::PairSampled;
            if (pipeline == "full_round") fp = qnva::ForgePipeline::FullRound;
            const qnva::EstimateReport report = qnva::estimate_forge_success(
                d, aggregators, trials, fs, qnva::TolerancePolicy{}, seed, fp, workers);
            content += qnva::estimate_csv_row("s2", d, aggregators, report);
        } else {
            qnva::Scenario sc = qnva::Scenario::Honest;
            if (lowered == "s1") sc = qnva::Scenario::S1;
            else if (lowered == "s3") sc = qnva::Scenario::S3;
            else if (lowered != "honest") {
                throw qnva::ConfigError("sweep: unknown scenario '" + scenario + "'");
            }
            const qnva::DetectionReport report =
                qnva::detection_rate(sc, d, aggregators, trials, qnva::TolerancePolicy{},
                                     qnva::NoiseModel{}, seed, workers);
            content += qnva::detection_csv_rows(report);
        }
    }
    write_output(out_path, content);
    return kExitOk;
}

int run_oracle(const std::string& state, std::uint64_t shots, std::uint64_t seed, bool analytic,
               const std::string& out_path) {
    std::string content;
    if (state == "plus") {
        if (analytic) {
            content = qnva::plus_analytic_csv();
        } else {
            qnva::Rng rng(seed);
            content = qnva::plus_histogram_csv(qnva::oracle_measure_plus(shots, rng));
        }
    } else {
        qnva::BellState bell;
        if (state == "phi+") bell = qnva::BellState::PhiPlus;
        else if (state == "phi-") bell = qnva::BellState::PhiMinus;
        else if (state == "psi+") bell = qnva::BellState::PsiPlus;
        else if (state == "psi-") bell = qnva::BellState::PsiMinus;
        else throw qnva::ConfigError("oracle: unknown state '" + state +
                                     "' (expected phi+, phi-, psi+, psi- or plus)");
        if (analytic) {
            content = qnva::bell_analytic_csv(bell);
        } else {
            qnva::Rng rng(seed);
            content = qnva::bell_histogram_csv(bell, qnva::oracle_measure_bell(bell, shots, rng));
        }
    }
    write_output(out_path, content);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QNVA simulator: entanglement-correlated sequences, proof checks and "
                 "Monte Carlo experiments"};
    app.require_subcommand(1);

    auto* table_cmd = app.add_subcommand(
        "table1", "Print the analytic forgery success probability per degree of accuracy");

    std::string config_path;
    std::optional<int> workers_override;
    auto* simulate_cmd =
        app.add_subcommand("simulate", "Run the experiment described by a JSON config file");
    simulate_cmd->add_option("--config", config_path, "Path to the scenario config")->required();
    int workers_flag = 0;
    auto* workers_opt = simulate_cmd->add_option(
        "--workers", workers_flag, "Override the config worker count (output is unaffected)");

    std::string sweep_scenario = "S2";
    std::string sweep_degrees;
    std::uint64_t sweep_trials = 0;
    std::uint64_t sweep_seed = 0;
    int sweep_n = 2;
    std::string sweep_strategy = "exact_count";
    std::string sweep_pipeline = "pair_pinned";
    int sweep_workers = 1;
    std::string sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "Rate estimates over a list of degrees (CSV)");
    sweep_cmd->add_option("--scenario", sweep_scenario, "honest, S1, S2 or S3")
        ->default_val("S2");
    sweep_cmd->add_option("--d", sweep_degrees, "Comma-separated degrees, e.g. 8,16")->required();
    sweep_cmd->add_option("--trials", sweep_trials, "Trials per degree")->required();
    sweep_cmd->add_option("--seed", sweep_seed, "Base seed (required)")->required();
    sweep_cmd->add_option("--n", sweep_n, "Aggregators per network");
    sweep_cmd->add_option("--strategy", sweep_strategy, "exact_count or uniform");
    sweep_cmd->add_option("--pipeline", sweep_pipeline,
                          "pair_pinned, pair_sampled or full_round");
    sweep_cmd->add_option("--workers", sweep_workers, "Worker threads");
    sweep_cmd->add_option("--out", sweep_out, "Output file (default stdout)");

    std::string oracle_state;
    std::uint64_t oracle_shots = 0;
    std::uint64_t oracle_seed = 0;
    bool oracle_analytic = false;
    std::string oracle_out;
    auto* oracle_cmd =
        app.add_subcommand("oracle", "Sample or print measurement distributions (CSV)");
    oracle_cmd->add_option("state", oracle_state, "phi+, phi-, psi+, psi- or plus")->required();
    auto* shots_opt = oracle_cmd->add_option("--shots", oracle_shots, "Number of shots");
    auto* seed_opt = oracle_cmd->add_option("--seed", oracle_seed, "Seed (required for sampling)");
    oracle_cmd->add_flag("--analytic", oracle_analytic, "Print exact weights instead of sampling");
    oracle_cmd->add_option("--out", oracle_out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (table_cmd->parsed()) {
            std::cout << qnva::table1_csv();
            return kExitOk;
        }
        if (simulate_cmd->parsed()) {
            if (workers_opt->count() > 0) workers_override = workers_flag;
            return run_simulate(config_path, workers_override);
        }
        if (sweep_cmd->parsed()) {
            return run_sweep(sweep_scenario, sweep_degrees, sweep_trials, sweep_seed, sweep_n,
                             sweep_strategy, sweep_pipeline, sweep_workers, sweep_out);
        }
        if (oracle_cmd->parsed()) {
            if (!oracle_analytic) {
                if (seed_opt->count() == 0) {
                    throw qnva::ConfigError("oracle: --seed is required when sampling");
                }
                if (shots_opt->count() == 0 || oracle_shots < 1) {
                    throw qnva::ConfigError("oracle: --shots must be at least 1");
                }
            }
            return run_oracle(oracle_state, oracle_shots, oracle_seed, oracle_analytic,
                              oracle_out);
        }
    } catch (const qnva::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef QNVA_CLI_PATH
#error "QNVA_CLI_PATH must point at the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
    std::string stderr_text;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path();
    const fs::path out = dir / ("qnva_cli_out_" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("qnva_cli_err_" + std::to_string(counter) + ".txt");
    ++counter;

    const std::string command = std::string(QNVA_CLI_PATH) + " " + args + " > " + out.string() +
                                " 2> " + err.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.stdout_text = slurp(out);
    result.stderr_text = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return result;
}

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

int count_lines(const std::string& text) {
    int lines = 0;
    for (char c : text) {
        if (c == '\n') ++lines;
    }
    return lines;
}

}  // namespace

TEST_CASE("table1 prints the five reference rows") {
    const RunResult result = run_cli("table1");
    REQUIRE(result.exit_code == 0);
    REQUIRE(count_lines(result.stdout_text) == 6);  // header + 5 rows
    REQUIRE(result.stdout_text.find("d,half,quarter,probability") == 0);
    REQUIRE(result.stdout_text.find("4,2,1,0.5") != std::string::npos);
    REQUIRE(result.stdout_text.find("8,4,2,0.1666666667") != std::string::npos);
    REQUIRE(result.stdout_text.find("64,32,16,1.663669") != std::string::npos);
}

TEST_CASE("oracle sampling suppresses unsupported outcomes") {
    const RunResult result = run_cli("oracle phi+ --shots 100000 --seed 7");
    REQUIRE(result.exit_code == 0);
    REQUIRE(result.stdout_text.find("phi+,01,0\n") != std::string::npos);
    REQUIRE(result.stdout_text.find("phi+,10,0\n") != std::string::npos);
}

TEST_CASE("oracle analytic weights") {
    const RunResult result = run_cli("oracle psi- --analytic");
    REQUIRE(result.exit_code == 0);
    REQUIRE(result.stdout_text.find("psi-,01,0.5") != std::string::npos);
    REQUIRE(result.stdout_text.find("psi-,10,0.5") != std::string::npos);
    REQUIRE(result.stdout_text.find("psi-,00,0\n") != std::string::npos);

    const RunResult plus = run_cli("oracle plus --shots 100000 --seed 9");
    REQUIRE(plus.exit_code == 0);
}

TEST_CASE("oracle rejects unknown states and missing seeds") {
    REQUIRE(run_cli("oracle bogus --shots 10 --seed 1").exit_code == 2);
    REQUIRE(run_cli("oracle phi+ --shots 10").exit_code == 2);
    REQUIRE(run_cli("oracle phi+ --seed 3").exit_code == 2);
}

TEST_CASE("simulate produces byte-identical output regardless of workers") {
    const fs::path out1 = fs::temp_directory_path() / "qnva_sim_a.json";
    const fs::path out2 = fs::temp_directory_path() / "qnva_sim_b.json";
    const std::string config = R"({
        "experiment": "detection",
        "networks": [4],
        "degree": 16,
        "scenario": "s3",
        "trials": 200,
        "seed": 20240601,
        "output": {"format": "json", "path": "OUTPATH"}
    })";
    std::string cfg1 = config;
    cfg1.replace(cfg1.find("OUTPATH"), 7, out1.string());
    std::string cfg2 = config;
    cfg2.replace(cfg2.find("OUTPATH"), 7, out2.string());
    const fs::path cfg1_path = write_temp("qnva_cfg_a.json", cfg1);
    const fs::path cfg2_path = write_temp("qnva_cfg_b.json", cfg2);

    REQUIRE(run_cli("simulate --config " + cfg1_path.string() + " --workers 1").exit_code == 0);
    REQUIRE(run_cli("simulate --config " + cfg2_path.string() + " --workers 3").exit_code == 0);
    const std::string first = slurp(out1);
    REQUIRE_FALSE(first.empty());
    REQUIRE(first == slurp(out2));

    fs::remove(out1);
    fs::remove(out2);
    fs::remove(cfg1_path);
    fs::remove(cfg2_path);
}

TEST_CASE("simulate rejects invalid configs with exit code 2") {
    const fs::path cfg = write_temp("qnva_cfg_bad.json", R"({
        "experiment": "round",
        "networks": [2],
        "degree": 10,
        "trials": 1,
        "seed": 1
    })");
    const RunResult result = run_cli("simulate --config " + cfg.string());
    REQUIRE(result.exit_code == 2);
    REQUIRE(result.stderr_text.find("divisible by 4") != std::string::npos);
    fs::remove(cfg);

    REQUIRE(run_cli("simulate --config /nonexistent/qnva.json").exit_code == 2);
}

TEST_CASE("simulate reports an aborted round with exit code 3") {
    const fs::path cfg = write_temp("qnva_cfg_abort.json", R"({
        "experiment": "round",
        "networks": [2],
        "degree": 16,
        "validation_tuples": 1000,
        "validation_threshold": 0.05,
        "epsilon": 0.5,
        "trials": 1,
        "seed": 5
    })");
    const RunResult result = run_cli("simulate --config " + cfg.string());
    REQUIRE(result.exit_code == 3);
    REQUIRE(result.stdout_text.find("\"aborted\": true") != std::string::npos);
    fs::remove(cfg);
}

TEST_CASE("sweep emits one estimate row per degree") {
    const RunResult result =
        run_cli("sweep --scenario S2 --d 8,16 --trials 2000 --seed 11 --workers 2");
    REQUIRE(result.exit_code == 0);
    REQUIRE(result.stdout_text.find("scenario,d,n,trials,rate,ci95,analytic,seed") == 0);
    REQUIRE(count_lines(result.stdout_text) == 3);
    REQUIRE(result.stdout_text.find("s2,8,2,2000,") != std::string::npos);
    REQUIRE(result.stdout_text.find("s2,16,2,2000,") != std::string::npos);

    REQUIRE(run_cli("sweep --scenario S2 --d 8 --trials 10").exit_code == 2);  // seed missing
}

TEST_CASE("single honest round summarizes decisions") {
    const fs::path cfg = write_temp("qnva_cfg_round.json", R"({
        "experiment": "round",
        "networks": [3],
        "degree": 16,
        "scenario": "honest",
        "trials": 1,
        "seed": 99
    })");
    const RunResult result = run_cli("simulate --config " + cfg.string());
    REQUIRE(result.exit_code == 0);
    REQUIRE(result.stdout_text.find("\"decisions\"") != std::string::npos);
    REQUIRE(result.stdout_text.find("accept_true") != std::string::npos);
    REQUIRE(result.stdout_text.find("\"phases\": 3") != std::string::npos);
    fs::remove(cfg);
}

// End-to-end checks of the command-line surface: exit codes, file outputs,
// and resilience, driven through the real binary.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string output; // stdout + stderr
};

const fs::path& work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "smoothcast_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    const fs::path log = work_dir() / "run.log";
    const std::string cmd =
        std::string(SMOOTHCAST_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::string output((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return {WEXITSTATUS(status), std::move(output)};
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path p = work_dir() / name;
    std::ofstream out(p, std::ios::trunc);
    out << content;
    return p;
}

fs::path write_series(const std::string& name, int n, double base, double slope,
                      double season_amp, int period) {
    std::ostringstream csv;
    csv << "ds,y\n";
    for (int t = 0; t < n; ++t) {
        const double season =
            period > 1 ? season_amp * std::sin(6.2831853 * (t % period) / period) : 0.0;
        csv << t << ',' << base + slope * t + season + 0.31 * ((t * 97) % 7) << '\n';
    }
    return write_file(name, csv.str());
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

} // namespace

TEST_CASE("fit writes an artifact and prints a summary") {
    const auto csv = write_series("fit_ok.csv", 60, 40.0, 0.5, 3.0, 12);
    const auto artifact = work_dir() / "fit_ok.bin";
    const auto r = run_cli("fit --model lgt --input " + csv.string() +
                           " --period 12 --seed 7 --restarts 2 --output " + artifact.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(artifact));
    CHECK(r.output.find("log-posterior") != std::string::npos);
    CHECK(r.output.find("rho_l") != std::string::npos);
}

TEST_CASE("multiplicative fit on a series containing zero exits 1 with the row") {
    const auto csv = write_file("zeros.csv", "ds,y\n1,2.0\n2,0.0\n3,1.5\n");
    const auto r = run_cli("fit --model lgt --input " + csv.string() +
                           " --mode multiplicative --output " +
                           (work_dir() / "never.bin").string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("NonPositiveValue") != std::string::npos);
    CHECK(r.output.find("row 3") != std::string::npos);
}

TEST_CASE("missing input file exits 1") {
    const auto r = run_cli("fit --input /nonexistent/x.csv --output " +
                           (work_dir() / "no.bin").string());
    CHECK(r.exit_code == 1);
}

TEST_CASE("predict emits h rows with monotone quantile columns") {
    const auto csv = write_series("pred.csv", 72, 120.0, 0.8, 10.0, 12);
    const auto artifact = work_dir() / "pred.bin";
    REQUIRE(run_cli("fit --model dlt --global-trend linear --input " + csv.string() +
                    " --period 12 --seed 3 --restarts 2 --output " + artifact.string())
                .exit_code == 0);

    const auto table = work_dir() / "pred_table.csv";
    const auto r = run_cli("predict --model " + artifact.string() +
                           " --horizon 13 --quantiles 0.05,0.5,0.95 --paths 400 --output " +
                           table.string());
    CHECK(r.exit_code == 0);

    std::ifstream in(table);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto rows = parse_csv(text);
    REQUIRE(rows.size() == 14); // header + 13 steps
    CHECK(rows[0] == std::vector<std::string>{"step", "forecast", "q0.05", "q0.5", "q0.95"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 5);
        const double lo = std::stod(rows[i][2]);
        const double mid = std::stod(rows[i][3]);
        const double hi = std::stod(rows[i][4]);
        CHECK(lo <= mid);
        CHECK(mid <= hi);
    }
}

TEST_CASE("multiplicative artifacts forecast strictly positive values") {
    const auto csv = write_series("mult.csv", 72, 200.0, 1.0, 15.0, 12);
    const auto artifact = work_dir() / "mult.bin";
    REQUIRE(run_cli("fit --model lgt --mode multiplicative --input " + csv.string() +
                    " --period 12 --seed 5 --restarts 2 --output " + artifact.string())
                .exit_code == 0);
    const auto table = work_dir() / "mult_table.csv";
    REQUIRE(run_cli("predict --model " + artifact.string() +
                    " --horizon 18 --paths 300 --output " + table.string())
                .exit_code == 0);
    std::ifstream in(table);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto rows = parse_csv(text);
    REQUIRE(rows.size() == 19);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        for (std::size_t cc = 1; cc < rows[i].size(); ++cc) {
            CHECK(std::stod(rows[i][cc]) > 0.0);
        }
    }
}

TEST_CASE("predict on an unknown artifact version exits 1") {
    const auto bogus = write_file("bogus.bin", "not-an-artifact v0\n\x01\x02\x03");
    const auto r = run_cli("predict --model " + bogus.string() + " --horizon 5");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("VersionMismatch") != std::string::npos);
}

TEST_CASE("predict demands future regressors when the artifact has them") {
    std::ostringstream csv;
    csv << "ds,y,promo\n";
    for (int t = 0; t < 40; ++t) {
        csv << t << ',' << 20.0 + 0.3 * t + ((t % 9 == 0) ? 2.0 : 0.0) << ','
            << ((t % 9 == 0) ? 1 : 0) << '\n';
    }
    const auto data = write_file("reg.csv", csv.str());
    const auto artifact = work_dir() / "reg.bin";
    REQUIRE(run_cli("fit --model dlt --input " + data.string() + " --seed 2 --restarts 1" +
                    " --output " + artifact.string())
                .exit_code == 0);

    const auto r = run_cli("predict --model " + artifact.string() + " --horizon 6");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("RegressorMissing") != std::string::npos);

    const auto future = write_file("future.csv", "promo\n1\n0\n0\n1\n0\n0\n");
    const auto table = work_dir() / "reg_table.csv";
    CHECK(run_cli("predict --model " + artifact.string() + " --horizon 6 --paths 200" +
                  " --future-regressors " + future.string() + " --output " + table.string())
              .exit_code == 0);
}

TEST_CASE("backtest over a directory tolerates unreadable series") {
    const fs::path dir = work_dir() / "corpus";
    fs::create_directories(dir);
    for (int s = 0; s < 4; ++s) {
        std::ostringstream csv;
        csv << "ds,y\n";
        for (int t = 0; t < 104; ++t) {
            csv << t << ',' << 50.0 + 0.2 * t + 4.0 * std::sin(6.2831853 * (t % 4) / 4.0)
                << '\n';
        }
        std::ofstream out(dir / ("w" + std::to_string(s) + ".csv"));
        out << csv.str();
    }
    {
        std::ofstream out(dir / "broken.csv");
        out << "ds,y\n1,1.0\n1,2.0\n"; // duplicate timestamp
    }

    const auto report = work_dir() / "report.json";
    const auto r = run_cli("backtest --model lgt --input " + dir.string() +
                           " --period 4 --h 13 --splits 3 --step 26 --seed 4 --restarts 1" +
                           " --report " + report.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("aggregate smape") != std::string::npos);
    CHECK(r.output.find("UNREADABLE") != std::string::npos);

    std::ifstream in(report);
    const auto doc = nlohmann::json::parse(in);
    CHECK(doc["aggregate"]["n_ok"].get<int>() == 4);
    CHECK(doc["aggregate"]["n_failed"].get<int>() == 1);
    int with_three_splits = 0;
    for (const auto& series : doc["series"]) {
        if (series["ok"].get<bool>()) {
            CHECK(series["smape"].size() == 3);
            CHECK(series["train_ends"] == nlohmann::json({39, 65, 91}));
            ++with_three_splits;
        }
    }
    CHECK(with_three_splits == 4);
}

TEST_CASE("backtest runs the seasonal-naive baseline") {
    const auto csv = write_series("naive.csv", 60, 30.0, 0.0, 6.0, 12);
    const auto r = run_cli("backtest --model naive --input " + csv.string() +
                           " --period 12 --h 12 --splits 2 --step 6");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("aggregate smape") != std::string::npos);
}

TEST_CASE("all-failing backtest exits nonzero") {
    const auto csv = write_file("short.csv", "ds,y\n1,1\n2,2\n3,3\n");
    const auto r = run_cli("backtest --model lgt --input " + csv.string() + " --h 13");
    CHECK(r.exit_code == 1);
}

TEST_CASE("config files mirror flags, and flags take precedence") {
    const auto csv = write_series("cfg.csv", 60, 40.0, 0.5, 3.0, 12);
    const auto a1 = work_dir() / "cfg1.bin";
    const auto a2 = work_dir() / "cfg2.bin";

    const auto config = write_file("run.cfg", "model=lgt\nperiod=12\nseed=19\nrestarts=2\n");
    const auto r1 = run_cli("fit --config " + config.string() + " --input " + csv.string() +
                            " --output " + a1.string());
    CHECK(r1.exit_code == 0);
    const auto r2 = run_cli("fit --model lgt --period 12 --seed 19 --restarts 2 --input " +
                            csv.string() + " --output " + a2.string());
    CHECK(r2.exit_code == 0);

    std::ifstream f1(a1, std::ios::binary), f2(a2, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);

    // a flag overrides the same key in the config file
    const auto a3 = work_dir() / "cfg3.bin";
    const auto r3 = run_cli("fit --config " + config.string() + " --seed 77 --input " +
                            csv.string() + " --output " + a3.string());
    CHECK(r3.exit_code == 0);
    std::ifstream f3(a3, std::ios::binary);
    const std::string b3((std::istreambuf_iterator<char>(f3)), std::istreambuf_iterator<char>());
    CHECK(b1 != b3);
}

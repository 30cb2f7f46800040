#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "smoothcast/artifact.hpp"
#include "smoothcast/backtest.hpp"
#include "smoothcast/csv.hpp"
#include "smoothcast/engine.hpp"
#include "smoothcast/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInference = 2;

int exit_code_for(const smoothcast::Error& e) {
    switch (e.code()) {
        case smoothcast::Errc::all_restarts_infeasible:
        case smoothcast::Errc::chain_stuck:
        case smoothcast::Errc::path_infeasible:
            return kExitInference;
        default:
            return kExitInput;
    }
}

struct CommonOptions {
    std::string model = "lgt";
    std::string mode = "additive";
    std::string trend = "flat";
    std::string method = "map";
    std::uint64_t seed = 0;
    int period = 1;
    int restarts = 4;
    int chains = 4;
    int warmup = 1000;
    int draws = 1000;
    int threads = 1;
    double reg_prior_scale = 1.0;
};

void add_model_flags(CLI::App& cmd, CommonOptions& opt, const std::vector<std::string>& models) {
    cmd.add_option("--config", "Flat key=value config file; flags override it");
    cmd.add_option("--model", opt.model, "Model kind")->check(CLI::IsMember(models));
    cmd.add_option("--mode", opt.mode, "Additive or multiplicative (log-space) fit")
        ->check(CLI::IsMember({"additive", "multiplicative"}));
    cmd.add_option("--period", opt.period, "Seasonal cycle length (1 = none)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--global-trend", opt.trend, "DLT deterministic global trend")
        ->check(CLI::IsMember({"flat", "linear", "loglinear", "logistic"}));
    cmd.add_option("--method", opt.method, "Inference method")
        ->check(CLI::IsMember({"map", "mcmc"}));
    cmd.add_option("--seed", opt.seed, "Random seed");
    cmd.add_option("--restarts", opt.restarts, "MAP restarts")->check(CLI::PositiveNumber);
    cmd.add_option("--chains", opt.chains, "MCMC chains")->check(CLI::PositiveNumber);
    cmd.add_option("--warmup", opt.warmup, "MCMC warmup iterations")
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--draws", opt.draws, "MCMC post-warmup draws")->check(CLI::PositiveNumber);
    cmd.add_option("--threads", opt.threads, "Worker threads (results are thread-count free)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--reg-prior-scale", opt.reg_prior_scale,
                   "Normal prior scale on regression coefficients");
}

smoothcast::FitConfig to_config(const CommonOptions& opt) {
    smoothcast::FitConfig cfg;
    cfg.model = opt.model == "lgt" ? smoothcast::ModelKind::lgt : smoothcast::ModelKind::dlt;
    cfg.mode = opt.mode == "additive" ? smoothcast::FitMode::additive
                                      : smoothcast::FitMode::multiplicative;
    if (opt.trend == "flat") cfg.trend = smoothcast::GlobalTrendKind::flat;
    if (opt.trend == "linear") cfg.trend = smoothcast::GlobalTrendKind::linear;
    if (opt.trend == "loglinear") cfg.trend = smoothcast::GlobalTrendKind::log_linear;
    if (opt.trend == "logistic") cfg.trend = smoothcast::GlobalTrendKind::logistic;
    cfg.method = opt.method == "map" ? smoothcast::InferenceMethod::map
                                     : smoothcast::InferenceMethod::mcmc;
    cfg.seed = opt.seed;
    cfg.restarts = opt.restarts;
    cfg.chains = opt.chains;
    cfg.warmup = opt.warmup;
    cfg.draws = opt.draws;
    cfg.threads = opt.threads;
    cfg.reg_prior_scale = opt.reg_prior_scale;
    return cfg;
}

std::vector<double> parse_quantiles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        out.push_back(std::stod(field));
        if (!(out.back() > 0.0 && out.back() < 1.0)) {
            throw smoothcast::Error(smoothcast::Errc::invalid_parameter,
                                    "quantile levels must lie in (0, 1)");
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void print_fit_summary(const smoothcast::FittedModel& model) {
    using namespace smoothcast;
    const int m = model.train.period();
    const std::size_t n_reg =
        model.config.model == ModelKind::dlt ? model.train.regressor_count() : 0;
    const ParamSpecList spec = model_param_spec(model.config, m, n_reg);

    std::cout << "model: " << (model.config.model == ModelKind::lgt ? "lgt" : "dlt")
              << "  mode: "
              << (model.config.mode == FitMode::additive ? "additive" : "multiplicative")
              << "  period: " << m << "  seed: " << model.config.seed << '\n';
    std::cout << "log-posterior: " << format_double(model.map.log_posterior)
              << (model.map.converged ? "" : "  (not converged)")
              << "  evaluations: " << model.map.n_evaluations
              << "  restart: " << model.map.restart_index << '\n';
    for (std::size_t i = 0; i < spec.size(); ++i) {
        std::cout << "  " << spec[i].name << " = " << format_double(model.map.point[i]) << '\n';
    }
    if (model.draws) {
        const PosteriorDraws& draws = *model.draws;
        std::cout << "mcmc: " << draws.n_chains() << " chains x " << draws.n_iterations()
                  << " draws (warmup " << draws.warmup << ")\n";
        std::cout << "acceptance:";
        for (double a : draws.acceptance_rate) std::cout << ' ' << format_double(a);
        std::cout << '\n';
        std::cout << "  parameter        mean        rhat    ess\n";
        for (std::size_t p = 0; p < spec.size(); ++p) {
            const auto chains = draws.parameter(p);
            double mean = 0.0;
            std::size_t count = 0;
            for (const auto& chain : chains) {
                for (double v : chain) {
                    mean += v;
                    ++count;
                }
            }
            mean /= static_cast<double>(count);
            char line[128];
            std::snprintf(line, sizeof(line), "  %-12s %11.5g %9.4f %6.0f", spec[p].name.c_str(),
                          mean, split_rhat(chains), effective_sample_size(chains));
            std::cout << line << '\n';
        }
    }
}

int cmd_fit(const CommonOptions& opt, const std::string& input, const std::string& output) {
    using namespace smoothcast;
    const TimeSeries series = read_series_csv(input, opt.period);
    FittedModel model;
    try {
        model = fit_model(series, to_config(opt));
    } catch (const Error& e) {
        // observation-indexed failures get their file row (header is row 1)
        if (e.code() == Errc::non_positive_value && e.index()) {
            throw Error(e.code(), input + " row " + std::to_string(*e.index() + 2) +
                                      ": multiplicative mode requires strictly positive values");
        }
        throw;
    }
    save_artifact(model, output);
    print_fit_summary(model);
    std::cout << "artifact written: " << output << '\n';
    return kExitOk;
}

int cmd_predict(const std::string& artifact_path, int horizon, const std::string& quantiles,
                int n_paths, const std::string& future_regressors, const std::string& output,
                int threads) {
    using namespace smoothcast;
    FittedModel model = load_artifact(artifact_path);
    model.config.threads = threads;

    std::optional<Matrix> future_x;
    if (model.config.model == ModelKind::dlt && model.train.has_regressors()) {
        if (future_regressors.empty()) {
            throw Error(Errc::regressor_missing,
                        "artifact carries regressors; pass --future-regressors");
        }
        future_x = read_future_regressors_csv(future_regressors,
                                              model.train.regressor_names());
        if (future_x->rows < static_cast<std::size_t>(horizon)) {
            throw Error(Errc::regressor_missing,
                        "future regressor file has fewer than h rows");
        }
    }

    const auto levels = parse_quantiles(quantiles);
    const ForecastDistribution dist =
        forecast_model(model, horizon, n_paths, levels, future_x, ForecastMode::stochastic);

    if (output.empty()) {
        write_forecast_table(std::cout, dist);
    } else {
        std::ofstream out(output, std::ios::trunc);
        if (!out) {
            throw Error(Errc::io_failure, "cannot write " + output);
        }
        write_forecast_table(out, dist);
    }
    return kExitOk;
}

// Flat key=value config support: expand `--config FILE` into `--key value`
// tokens spliced in right after the subcommand name, so that explicitly
// passed flags (which come later and win under TakeLast) override the file.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw smoothcast::Error(smoothcast::Errc::io_failure, "cannot open config " + path);
    }
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos || line[begin] == '#') continue;
        const auto end = line.find_last_not_of(" \t\r");
        const std::string entry = line.substr(begin, end - begin + 1);
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw smoothcast::Error(smoothcast::Errc::io_failure,
                                    "config line without '=': " + entry);
        }
        tokens.push_back("--" + entry.substr(0, eq));
        tokens.push_back(entry.substr(eq + 1));
    }
    return tokens;
}

std::vector<std::string> expand_config(std::vector<std::string> args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        std::size_t erase_count = 0;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            erase_count = 2;
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            erase_count = 1;
        }
        if (erase_count == 0) continue;
        const auto tokens = config_tokens(path);
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                   args.begin() + static_cast<std::ptrdiff_t>(i + erase_count));
        // insert after the subcommand name so the keys bind to its options
        const std::size_t at = args.empty() ? 0 : 1;
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), tokens.begin(),
                    tokens.end());
        break;
    }
    return args;
}

std::vector<std::pair<std::string, fs::path>> collect_inputs(const std::string& input) {
    std::vector<std::pair<std::string, fs::path>> files;
    const fs::path p(input);
    if (fs::is_directory(p)) {
        for (const auto& entry : fs::directory_iterator(p)) {
            if (entry.is_regular_file() && entry.path().extension() == ".csv") {
                files.emplace_back(entry.path().stem().string(), entry.path());
            }
        }
        std::sort(files.begin(), files.end());
    } else {
        files.emplace_back(p.stem().string(), p);
    }
    return files;
}

int cmd_backtest(const CommonOptions& opt, const std::string& model_name,
                 const std::string& input, const smoothcast::SplitScheme& scheme_in,
                 bool min_train_set, const std::string& report_path) {
    using namespace smoothcast;

    SplitScheme scheme = scheme_in;
    if (!min_train_set) {
        scheme.min_train_length = std::max(2 * opt.period, 8);
    }

    std::vector<std::pair<std::string, TimeSeries>> data;
    std::vector<std::pair<std::string, std::string>> unreadable;
    for (const auto& [name, path] : collect_inputs(input)) {
        try {
            data.emplace_back(name, read_series_csv(path.string(), opt.period));
        } catch (const std::exception& e) {
            unreadable.emplace_back(name, e.what());
        }
    }
    if (data.empty() && unreadable.empty()) {
        throw Error(Errc::empty_input, "no .csv inputs under " + input);
    }

    const ForecastFn forecaster =
        model_name == "naive" ? make_naive_forecaster() : make_model_forecaster(to_config(opt));
    const RandomSource rs(opt.seed);
    const BacktestReport report = run_backtest(data, forecaster, scheme, rs, opt.threads);

    std::cout << "series                            splits  mean smape  std smape\n";
    for (const auto& s : report.series) {
        if (s.ok) {
            char line[160];
            std::snprintf(line, sizeof(line), "%-32s %7zu  %10.4f %10.4f", s.name.c_str(),
                          s.split_smape.size(), s.mean_smape, s.std_smape);
            std::cout << line << '\n';
        } else {
            std::cout << s.name << "  FAILED: " << s.error << '\n';
        }
    }
    for (const auto& [name, why] : unreadable) {
        std::cout << name << "  UNREADABLE: " << why << '\n';
    }
    char agg[128];
    std::snprintf(agg, sizeof(agg), "aggregate smape: %.3f (%.3f) over %zu series, %zu failed",
                  report.aggregate_mean, report.aggregate_std, report.n_ok,
                  report.n_failed + unreadable.size());
    std::cout << agg << '\n';

    if (!report_path.empty()) {
        json doc;
        doc["model"] = model_name;
        doc["scheme"] = {{"h", scheme.horizon},
                         {"splits", scheme.n_splits},
                         {"step", scheme.step},
                         {"min_train", scheme.min_train_length}};
        doc["series"] = json::array();
        for (const auto& s : report.series) {
            json entry;
            entry["name"] = s.name;
            entry["ok"] = s.ok;
            if (s.ok) {
                entry["smape"] = s.split_smape;
                entry["train_ends"] = s.train_ends;
                entry["mean"] = s.mean_smape;
                entry["std"] = s.std_smape;
            } else {
                entry["error"] = s.error;
            }
            doc["series"].push_back(entry);
        }
        for (const auto& [name, why] : unreadable) {
            doc["series"].push_back({{"name", name}, {"ok", false}, {"error", why}});
        }
        doc["aggregate"] = {{"mean", report.aggregate_mean},
                            {"std", report.aggregate_std},
                            {"n_ok", report.n_ok},
                            {"n_failed", report.n_failed + unreadable.size()}};
        std::ofstream out(report_path, std::ios::trunc);
        if (!out) {
            throw Error(Errc::io_failure, "cannot write " + report_path);
        }
        out << doc.dump(2) << '\n';
    }

    return report.n_ok == 0 && (report.n_failed + unreadable.size()) > 0 ? kExitInput : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic time-series forecasting with Bayesian exponential smoothing"};
    app.set_help_flag("--help", "Print help and exit"); // keeps --h free for the horizon flag
    app.require_subcommand(1);

    CommonOptions fit_opt;
    std::string fit_input, fit_output;
    CLI::App* fit = app.add_subcommand("fit", "Fit a model and write its artifact");
    add_model_flags(*fit, fit_opt, {"lgt", "dlt"});
    fit->add_option("--input", fit_input, "Series CSV (columns ds, y, regressors...)")
        ->required();
    fit->add_option("--output", fit_output, "Artifact output path")->required();

    std::string pred_artifact, pred_quantiles = "0.05,0.5,0.95";
    std::string pred_future, pred_output;
    int pred_horizon = 1, pred_paths = 2000, pred_threads = 1;
    CLI::App* predict = app.add_subcommand("predict", "Forecast from a saved artifact");
    predict->add_option("--config", "Flat key=value config file; flags override it");
    predict->add_option("--model", pred_artifact, "Artifact path")->required();
    predict->add_option("--horizon,--h", pred_horizon, "Forecast horizon")
        ->required()
        ->check(CLI::PositiveNumber);
    predict->add_option("--quantiles", pred_quantiles, "Comma-separated quantile levels");
    predict->add_option("--paths", pred_paths, "Simulated forecast paths")
        ->check(CLI::PositiveNumber);
    predict->add_option("--future-regressors", pred_future,
                        "CSV with h rows of future regressor values");
    predict->add_option("--output", pred_output, "Write the table here instead of stdout");
    predict->add_option("--threads", pred_threads, "Worker threads")->check(CLI::PositiveNumber);

    CommonOptions bt_opt;
    std::string bt_model = "lgt", bt_input, bt_report;
    smoothcast::SplitScheme bt_scheme;
    CLI::App* backtest = app.add_subcommand("backtest", "Expanding-window SMAPE backtest");
    // backtest also accepts the naive seasonal baseline
    add_model_flags(*backtest, bt_opt, {"lgt", "dlt", "naive"});
    backtest->add_option("--input", bt_input, "Series CSV or directory of CSVs")->required();
    backtest->add_option("--h", bt_scheme.horizon, "Forecast horizon per split")
        ->required()
        ->check(CLI::PositiveNumber);
    backtest->add_option("--splits", bt_scheme.n_splits, "Number of splits")
        ->check(CLI::PositiveNumber);
    backtest->add_option("--step", bt_scheme.step, "Incremental steps between split origins")
        ->check(CLI::PositiveNumber);
    CLI::Option* min_train_opt =
        backtest->add_option("--min-train", bt_scheme.min_train_length,
                             "Minimum training length (default max(2*period, 8))");
    backtest->add_option("--report", bt_report, "Machine-readable JSON report path");

    // config tokens precede the explicitly passed flags; the last value wins
    for (CLI::App* sub : {fit, predict, backtest}) {
        for (CLI::Option* option : sub->get_options()) {
            option->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        }
    }

    try {
        std::vector<std::string> args =
            expand_config(std::vector<std::string>(argv + 1, argv + argc));
        std::reverse(args.begin(), args.end()); // CLI11 consumes tokens back to front
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const smoothcast::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }

    try {
        if (app.got_subcommand(fit)) {
            return cmd_fit(fit_opt, fit_input, fit_output);
        }
        if (app.got_subcommand(predict)) {
            return cmd_predict(pred_artifact, pred_horizon, pred_quantiles, pred_paths,
                               pred_future, pred_output, pred_threads);
        }
        if (app.got_subcommand(backtest)) {
            bt_model = bt_opt.model;
            return cmd_backtest(bt_opt, bt_model, bt_input, bt_scheme,
                                min_train_opt->count() > 0, bt_report);
        }
    } catch (const smoothcast::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitOk;
}

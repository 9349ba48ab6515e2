// crossflow: command-line front end for simulation, ingestion and forecasting.

#include "crossflow/common/error.hpp"
#include "crossflow/common/numfmt.hpp"
#include "crossflow/forecast/artifact.hpp"
#include "crossflow/forecast/model.hpp"
#include "crossflow/ingest/registry.hpp"
#include "crossflow/service/codec.hpp"
#include "crossflow/service/config.hpp"
#include "crossflow/service/server.hpp"
#include "crossflow/service/store.hpp"
#include "crossflow/sim/scenario_io.hpp"
#include "crossflow/sim/sensitivity.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace crossflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 2;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const fs::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string(), std::string("malformed JSON: ") + e.what());
    }
}

// Writes to `out` when given, stdout otherwise.
void emit(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
    } else {
        service::write_file_atomic(out, text);
    }
}

std::vector<sim::ContingencyRule> load_rules(const std::string& path) {
    if (path.empty()) return {};
    return service::rules_from_json(read_json_file(path), "rules");
}

std::vector<ingest::IndicatorSeries> load_indicators(const std::string& panel_dir, const std::string& registry) {
    if (!panel_dir.empty()) {
        std::ifstream values(fs::path(panel_dir) / "panel.csv");
        std::ifstream mask(fs::path(panel_dir) / "panel_mask.csv");
        if (!values || !mask) throw NotFoundError("panel directory needs panel.csv and panel_mask.csv: " + panel_dir);
        return ingest::read_panel_csv(values, mask).series();
    }
    if (!registry.empty()) return ingest::ingest_all(ingest::load_registry(registry)).panel.panel.series();
    return {};
}

struct Options {
    std::string scenario, out, format = "csv", rules, flows;
    std::string param, grid;
    int snapshot_day = -1;
    std::string registry, panel, arrivals, column, config, artifact, forecast_out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string pred, truth, pred_column = "point", truth_column;
    std::string host, data_dir;
    int port = -1;
};

int cmd_simulate(const Options& o) {
    const auto scenario = sim::load_scenario(o.scenario);
    const service::SimulateRequest req{scenario.params, scenario.initial, load_rules(o.rules)};
    if (o.format == "json") {
        emit(o.out, service::simulate_response(req).dump() + "\n");
        return 0;
    }
    const auto trace = sim::simulate(req.initial, req.params);
    std::ostringstream csv;
    sim::write_occupancy_csv(csv, trace);
    emit(o.out, csv.str());
    if (!o.flows.empty()) {
        std::ostringstream flows;
        sim::write_flows_csv(flows, trace);
        service::write_file_atomic(o.flows, flows.str());
    }
    if (!o.out.empty()) {
        // CSV went to a file; summarize the analysis on stderr.
        const auto result = service::simulate_response(req);
        for (const auto& b : result["bottlenecks"]) {
            std::cerr << "bottleneck " << b["stage"].get<std::string>() << " +"
                      << format_number(b["growth_per_day"].get<double>()) << "/day\n";
        }
        if (!result["overflow"].is_null()) {
            std::cerr << "shelter overflow from day " << result["overflow"]["first_day"] << '\n';
        }
        for (const auto& t : result["triggers"]) {
            std::cerr << "trigger " << t["rule_id"].get<std::string>() << " on day " << t["first_day"] << '\n';
        }
    }
    return 0;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("grid[" + std::to_string(i) + "]", "not a number: '" + item + "'");
        }
        ++i;
    }
    return grid;
}

int cmd_sweep(const Options& o) {
    const auto scenario = sim::load_scenario(o.scenario);
    service::SensitivityRequest req{scenario.params, scenario.initial, o.param, parse_grid(o.grid), std::nullopt};
    if (o.snapshot_day >= 0) req.snapshot_day = o.snapshot_day;
    if (!sim::is_planner_parameter(req.param)) throw ValidationError("param", "unknown parameter '" + req.param + "'");
    const auto response = service::sensitivity_response(req);
    if (o.format == "json") {
        emit(o.out, response.dump() + "\n");
        return 0;
    }
    // Wide table: one sheltered column per grid value.
    std::ostringstream csv;
    csv << "day";
    for (const auto& s : response["series"]) csv << ',' << o.param << '=' << format_number(s["value"].get<double>());
    csv << '\n';
    for (int day = 0; day <= scenario.params.horizon; ++day) {
        csv << day;
        for (const auto& s : response["series"]) csv << ',' << format_number(s["sheltered"][day].get<double>());
        csv << '\n';
    }
    emit(o.out, csv.str());
    return 0;
}

int cmd_ingest(const Options& o) {
    service::Api api({o.out, {}});
    const auto summary = api.ingest(ingest::load_registry(o.registry));
    if (o.format == "json") {
        std::cout << summary.dump() << '\n';
    } else {
        std::cout << "range " << summary["range"]["start"].get<std::string>() << " .. "
                  << summary["range"]["end"].get<std::string>() << ", " << summary["coverage"]["days"] << " days, "
                  << summary["coverage"]["flagged_rows"] << " flagged rows\n";
        for (const auto& r : summary["reports"]) {
            std::cout << r["source_id"].get<std::string>() << ": read " << r["rows_read"] << ", accepted "
                      << r["rows_accepted"] << ", rejected " << r["rejected"].size() << ", filled " << r["fill_count"]
                      << '\n';
        }
    }
    return 0;
}

int cmd_train(const Options& o) {
    const auto arrivals = forecast::read_daily_csv(o.arrivals, o.column);
    const auto indicators = load_indicators(o.panel, o.registry);
    forecast::ForecastConfig cfg;
    if (!o.config.empty()) cfg = forecast::config_from_json(read_json_file(o.config));
    if (o.seed_set) cfg.seed = cfg.bootstrap.seed = o.seed;
    const auto result = forecast::train_ensemble(arrivals, indicators, cfg);
    forecast::save_artifact(result.artifact, o.out);
    if (!o.forecast_out.empty()) {
        std::ostringstream csv;
        forecast::write_forecast_csv(csv, result.forecast);
        service::write_file_atomic(o.forecast_out, csv.str());
    }
    if (o.format == "json") {
        json reports = json::array();
        for (const auto& r : result.artifact.reports) reports.push_back(forecast::to_json(r));
        std::cout << json{{"models", reports},
                          {"ensemble",
                           {{"rmse", result.artifact.ensemble_test.rmse}, {"mae", result.artifact.ensemble_test.mae}}}}
                         .dump()
                  << '\n';
    } else {
        std::cout << "model,cv_mse,test_rmse,test_mae,weight\n";
        for (const auto& r : result.artifact.reports) {
            std::cout << r.name << ',' << format_number(r.cv_mse) << ',' << format_number(r.test_rmse) << ','
                      << format_number(r.test_mae) << ',' << format_number(r.weight) << '\n';
        }
        std::cout << "ensemble,," << format_number(result.artifact.ensemble_test.rmse) << ','
                  << format_number(result.artifact.ensemble_test.mae) << ",1\n";
    }
    return 0;
}

int cmd_predict(const Options& o) {
    const auto artifact = forecast::load_artifact(o.artifact);
    const auto arrivals = forecast::read_daily_csv(o.arrivals, o.column);
    const auto forecast = forecast::forecast_ahead(artifact, arrivals, load_indicators(o.panel, o.registry));
    if (o.format == "json") {
        emit(o.out, forecast::to_json(forecast).dump() + "\n");
    } else {
        std::ostringstream csv;
        forecast::write_forecast_csv(csv, forecast);
        emit(o.out, csv.str());
    }
    return 0;
}

int cmd_evaluate(const Options& o) {
    const auto pred = forecast::read_daily_csv(o.pred, o.pred_column);
    const auto truth = forecast::read_daily_csv(o.truth, o.truth_column);
    std::vector<double> p, t;
    for (Date d = pred.start; d <= pred.range().last; d = add_days(d, 1)) {
        const auto pv = pred.at(d);
        const auto tv = truth.at(d);
        if (pv && tv) {
            p.push_back(*pv);
            t.push_back(*tv);
        }
    }
    if (p.empty()) throw ValidationError("truth", "prediction and truth share no dated values");
    const auto m = forecast::evaluate(p, t);
    if (o.format == "json") {
        std::cout << json{{"rmse", m.rmse}, {"mae", m.mae}, {"n", p.size()}}.dump() << '\n';
    } else {
        std::cout << "rmse=" << format_number(m.rmse) << " mae=" << format_number(m.mae) << '\n';
    }
    return 0;
}

int cmd_serve(const Options& o) {
    service::ServiceConfig cfg;
    if (!o.config.empty()) cfg = service::load_service_config(o.config);
    service::apply_env_overrides(cfg);
    if (!o.host.empty()) cfg.host = o.host;
    if (o.port >= 0) cfg.port = o.port;
    if (!o.data_dir.empty()) cfg.data_dir = o.data_dir;
    if (!o.registry.empty()) cfg.registry = o.registry;
    return service::serve(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crossflow: border-crossing simulation, indicator ingestion and arrivals forecasting"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::string> formats{"csv", "json"};

    auto* simulate = app.add_subcommand("simulate", "Run the stage pipeline for one scenario");
    simulate->add_option("--scenario", o.scenario, "Scenario file (key = value)")->required();
    simulate->add_option("--rules", o.rules, "Contingency rules JSON array");
    simulate->add_option("--out", o.out, "Output file (stdout when omitted)");
    simulate->add_option("--flows", o.flows, "Also write per-day flows CSV here");
    simulate->add_option("--format", o.format, "csv or json")->check(CLI::IsMember(formats));

    auto* sweep = app.add_subcommand("sweep", "One-at-a-time sensitivity sweep of Sheltered occupancy");
    sweep->add_option("--scenario", o.scenario, "Base scenario file")->required();
    sweep->add_option("--param", o.param, "Parameter to vary")->required();
    sweep->add_option("--grid", o.grid, "Comma-separated values")->required();
    sweep->add_option("--snapshot-day", o.snapshot_day, "Cross-section day (default: horizon)");
    sweep->add_option("--out", o.out, "Output file");
    sweep->add_option("--format", o.format, "csv or json")->check(CLI::IsMember(formats));

    auto* ingest_cmd = app.add_subcommand("ingest", "Parse and align indicator files into a panel");
    ingest_cmd->add_option("--registry", o.registry, "Source registry JSON")->required();
    ingest_cmd->add_option("--out", o.out, "Directory for panel.csv, panel_mask.csv, ingest_report.json")->required();
    ingest_cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember(formats));

    auto* train = app.add_subcommand("train", "Fit the model registry and the weighted ensemble");
    train->add_option("--arrivals", o.arrivals, "Daily arrivals CSV (date,<value>)")->required();
    train->add_option("--column", o.column, "Arrivals value column (default: first)");
    train->add_option("--panel", o.panel, "Directory written by `ingest`");
    train->add_option("--registry", o.registry, "Ingest this registry instead of reading a panel");
    train->add_option("--config", o.config, "Forecast config JSON");
    train->add_option("--seed", o.seed, "Seed for CV, randomized models and bootstrap")
        ->each([&o](const std::string&) { o.seed_set = true; });
    train->add_option("--out", o.out, "Artifact output path")->required();
    train->add_option("--forecast-out", o.forecast_out, "Forecast CSV for test and future dates");
    train->add_option("--format", o.format, "csv or json")->check(CLI::IsMember(formats));

    auto* predict = app.add_subcommand("predict", "Forecast beyond the data with a saved artifact");
    predict->add_option("--artifact", o.artifact, "Artifact written by `train`")->required();
    predict->add_option("--arrivals", o.arrivals, "Daily arrivals CSV")->required();
    predict->add_option("--column", o.column, "Arrivals value column");
    predict->add_option("--panel", o.panel, "Directory written by `ingest`");
    predict->add_option("--registry", o.registry, "Source registry JSON");
    predict->add_option("--out", o.out, "Output file");
    predict->add_option("--format", o.format, "csv or json")->check(CLI::IsMember(formats));

    auto* evaluate = app.add_subcommand("evaluate", "RMSE and MAE of predictions against truth");
    evaluate->add_option("--pred", o.pred, "Prediction CSV")->required();
    evaluate->add_option("--truth", o.truth, "Truth CSV")->required();
    evaluate->add_option("--pred-column", o.pred_column, "Prediction column (default: point)");
    evaluate->add_option("--truth-column", o.truth_column, "Truth column (default: first)");
    evaluate->add_option("--format", o.format, "csv or json")->check(CLI::IsMember(formats));

    auto* serve = app.add_subcommand("serve", "Serve the /v1 HTTP API");
    serve->add_option("--config", o.config, "Service config JSON");
    serve->add_option("--host", o.host, "Bind address");
    serve->add_option("--port", o.port, "Port (0 picks a free one)");
    serve->add_option("--data-dir", o.data_dir, "Directory for persisted state");
    serve->add_option("--registry", o.registry, "Ingest this registry at startup");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*simulate) return cmd_simulate(o);
        if (*sweep) return cmd_sweep(o);
        if (*ingest_cmd) return cmd_ingest(o);
        if (*train) return cmd_train(o);
        if (*predict) return cmd_predict(o);
        if (*evaluate) return cmd_evaluate(o);
        if (*serve) return cmd_serve(o);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << (e.field().empty() ? "" : e.field() + ": ") << e.what() << '\n';
        return kExitValidation;
    } catch (const NotFoundError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

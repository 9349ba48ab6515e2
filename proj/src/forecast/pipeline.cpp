#include "crossflow/forecast/pipeline.hpp"

#include "crossflow/common/error.hpp"
#include "crossflow/common/rng.hpp"

#include <algorithm>
#include <cmath>

namespace crossflow::forecast {

using nlohmann::json;

namespace {

constexpr std::uint64_t kBootstrapStream = 1u << 20;

std::vector<DateRange> ranges_from_json(const json& arr, const std::string& field) {
    std::vector<DateRange> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        out.push_back({parse_date_or_throw(arr[i].at("start").get<std::string>(), f + ".start"),
                       parse_date_or_throw(arr[i].at("end").get<std::string>(), f + ".end")});
    }
    return out;
}

std::vector<Date> dates_from_json(const json& arr, const std::string& field) {
    std::vector<Date> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(parse_date_or_throw(arr[i].get<std::string>(), field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

json ranges_to_json(const std::vector<DateRange>& ranges) {
    auto arr = json::array();
    for (const auto& r : ranges) arr.push_back({{"start", format_date(r.first)}, {"end", format_date(r.last)}});
    return arr;
}

json dates_to_json(const std::vector<Date>& dates) {
    auto arr = json::array();
    for (const auto& d : dates) arr.push_back(format_date(d));
    return arr;
}

// Component and ensemble predictions plus intervals for `rows`, with each
// model's interval drawn from its stored residuals.
std::vector<ForecastRow> forecast_rows(const std::vector<TrainedModel>& models, const Weights& weights,
                                       const FeatureMatrix& rows, int horizon, const BootstrapConfig& bootstrap,
                                       bool with_truth) {
    std::map<std::string, std::vector<double>> preds;
    std::map<std::string, Interval> intervals;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const auto& m = models[i];
        preds[m.name] = predict(m, rows);
        BootstrapConfig cfg = bootstrap;
        cfg.seed = derive_seed(bootstrap.seed, kBootstrapStream + i);
        if (m.residuals.size() < 10) {
            throw ValidationError("matrix", "need at least 10 residuals for the bootstrap of '" + m.name + "'");
        }
        intervals[m.name] = residual_bootstrap(preds[m.name], m.residuals, cfg);
    }
    const auto point = ensemble_predict(preds, weights);
    const auto band = ensemble_intervals(intervals, weights);

    std::vector<ForecastRow> out(rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        auto& row = out[r];
        row.date = add_days(rows.dates[r], horizon);
        if (with_truth) row.truth = rows.y(static_cast<Eigen::Index>(r));
        for (const auto& [name, p] : preds) row.per_model[name] = p[r];
        row.point = point[r];
        row.lower = std::min(band.lower[r], row.point);
        row.upper = std::max(band.upper[r], row.point);
    }
    return out;
}

}  // namespace

ForecastConfig config_from_json(const json& doc) {
    ForecastConfig cfg;
    try {
        if (doc.contains("target")) {
            cfg.features.target.window = doc["target"].value("window", cfg.features.target.window);
            cfg.features.target.horizon = doc["target"].value("horizon", cfg.features.target.horizon);
        }
        if (doc.contains("features")) {
            const auto& f = doc["features"];
            if (f.contains("target_lags")) cfg.features.target_lags = f["target_lags"].get<std::vector<int>>();
            if (f.contains("indicators")) cfg.features.indicators = f["indicators"].get<std::vector<std::string>>();
            if (f.contains("calendar_flags")) {
                for (const auto& name : f["calendar_flags"]) {
                    cfg.features.calendar_flags.push_back(parse_calendar_flag(name.get<std::string>()));
                }
            }
            if (f.contains("calendar")) {
                const auto& c = f["calendar"];
                auto& cal = cfg.features.calendar;
                cal.christmas_first_day = c.value("christmas_first_day", cal.christmas_first_day);
                if (c.contains("school_holidays")) cal.school_holidays = ranges_from_json(c["school_holidays"], "features.calendar.school_holidays");
                if (c.contains("bus_days")) cal.bus_days = dates_from_json(c["bus_days"], "features.calendar.bus_days");
                if (c.contains("border_closed")) cal.border_closed = ranges_from_json(c["border_closed"], "features.calendar.border_closed");
                if (c.contains("notable_dates")) cal.notable_dates = dates_from_json(c["notable_dates"], "features.calendar.notable_dates");
            }
        }
        if (doc.contains("cv")) cfg.cv.folds = doc["cv"].value("folds", cfg.cv.folds);
        if (doc.contains("bootstrap")) {
            cfg.bootstrap.replicates = doc["bootstrap"].value("replicates", cfg.bootstrap.replicates);
            cfg.bootstrap.level = doc["bootstrap"].value("level", cfg.bootstrap.level);
        }
        if (doc.contains("models")) {
            cfg.models.clear();
            for (const auto& m : doc["models"]) {
                ModelSpec spec;
                spec.kind = m.at("kind").get<std::string>();
                spec.name = m.value("name", spec.kind);
                for (const auto& g : m.at("grid")) spec.grid.push_back(g.get<Hyperparameters>());
                cfg.models.push_back(std::move(spec));
            }
        }
        if (doc.contains("test_start")) cfg.test_start = parse_date_or_throw(doc["test_start"].get<std::string>(), "test_start");
        cfg.test_fraction = doc.value("test_fraction", cfg.test_fraction);
        cfg.seed = doc.value("seed", cfg.seed);
    } catch (const json::exception& e) {
        throw ValidationError("config", std::string("malformed forecast config: ") + e.what());
    }
    cfg.bootstrap.seed = cfg.seed;
    validate(cfg.features);
    validate(cfg.bootstrap);
    if (cfg.cv.folds < 2) throw ValidationError("cv.folds", "need at least 2 folds");
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
        throw ValidationError("test_fraction", "test_fraction must lie in (0, 1)");
    }
    return cfg;
}

json to_json(const ForecastConfig& cfg) {
    json flags = json::array();
    for (auto f : cfg.features.calendar_flags) flags.push_back(to_string(f));
    json models = json::array();
    for (const auto& m : cfg.models) models.push_back({{"name", m.name}, {"kind", m.kind}, {"grid", m.grid}});
    const auto& cal = cfg.features.calendar;
    json doc = {
        {"target", {{"window", cfg.features.target.window}, {"horizon", cfg.features.target.horizon}}},
        {"features",
         {{"target_lags", cfg.features.target_lags},
          {"indicators", cfg.features.indicators},
          {"calendar_flags", flags},
          {"calendar",
           {{"christmas_first_day", cal.christmas_first_day},
            {"school_holidays", ranges_to_json(cal.school_holidays)},
            {"bus_days", dates_to_json(cal.bus_days)},
            {"border_closed", ranges_to_json(cal.border_closed)},
            {"notable_dates", dates_to_json(cal.notable_dates)}}}}},
        {"cv", {{"folds", cfg.cv.folds}}},
        {"bootstrap", {{"replicates", cfg.bootstrap.replicates}, {"level", cfg.bootstrap.level}}},
        {"models", models},
        {"test_fraction", cfg.test_fraction},
        {"seed", cfg.seed},
    };
    if (cfg.test_start) doc["test_start"] = format_date(*cfg.test_start);
    return doc;
}

TrainingResult train_ensemble(const DailySeries& arrivals, const std::vector<ingest::IndicatorSeries>& indicators,
                              const ForecastConfig& config) {
    validate(config.bootstrap);
    if (config.models.empty()) throw ValidationError("models", "model registry is empty");
    const FeatureMatrix matrix = build_features(arrivals, indicators, config.features);

    std::size_t split = 0;
    if (config.test_start) {
        while (split < matrix.rows() && matrix.dates[split] < *config.test_start) ++split;
    } else {
        split = matrix.rows() - static_cast<std::size_t>(std::lround(config.test_fraction * matrix.rows()));
    }
    if (split == 0 || split >= matrix.rows()) {
        throw ValidationError("test_start", "train/test split leaves one side empty");
    }
    const FeatureMatrix train = matrix.head(split);
    const FeatureMatrix test = matrix.tail_from(split);
    const auto truth = to_vector(test.y);

    TrainingResult result;
    auto& art = result.artifact;
    art.config = config;
    art.train_rows = {train.dates.front(), train.dates.back()};
    art.test_rows = {test.dates.front(), test.dates.back()};

    std::vector<TrainedModel> on_train;
    std::vector<NamedRmse> scores;
    for (std::size_t i = 0; i < config.models.size(); ++i) {
        auto m = fit_model(config.models[i], train, config.cv, derive_seed(config.seed, i));
        const auto metrics = evaluate(predict(m, test), truth);
        m.test_rmse = metrics.rmse;
        m.test_mae = metrics.mae;
        scores.push_back({m.name, metrics.rmse});
        on_train.push_back(std::move(m));
    }
    art.weights = ensemble_weights(scores);

    art.baseline = baseline_historical_mean(train.y);
    const auto base_metrics = evaluate(predict(art.baseline, test), truth);
    art.baseline.test_rmse = base_metrics.rmse;
    art.baseline.test_mae = base_metrics.mae;
    art.baseline.trained_on = art.train_rows;

    const auto test_rows = forecast_rows(on_train, art.weights, test, config.features.target.horizon,
                                         config.bootstrap, true);
    std::vector<double> ensemble_test(test_rows.size());
    std::transform(test_rows.begin(), test_rows.end(), ensemble_test.begin(), [](const auto& r) { return r.point; });
    art.ensemble_test = evaluate(ensemble_test, truth);

    for (const auto& m : on_train) {
        art.reports.push_back({m.name, m.kind, m.hyperparameters, m.cv_mse, *m.test_rmse, *m.test_mae,
                               art.weights.at(m.name)});
        art.models.push_back(refit(m, matrix));
    }
    art.reports.push_back({art.baseline.name, art.baseline.kind, {}, 0.0, base_metrics.rmse, base_metrics.mae, 0.0});

    auto& fc = result.forecast;
    fc.weights = art.weights;
    fc.level = config.bootstrap.level;
    for (const auto& m : art.models) fc.models.push_back(m.name);
    fc.rows = test_rows;
    const auto ahead = forecast_ahead(art, arrivals, indicators);
    fc.rows.insert(fc.rows.end(), ahead.rows.begin(), ahead.rows.end());
    return result;
}

EnsembleForecast forecast_ahead(const EnsembleArtifact& artifact, const DailySeries& arrivals,
                                const std::vector<ingest::IndicatorSeries>& indicators) {
    const auto& cfg = artifact.config;
    const FeatureMatrix rows = build_forecast_rows(arrivals, indicators, cfg.features);
    EnsembleForecast fc;
    fc.weights = artifact.weights;
    fc.level = cfg.bootstrap.level;
    for (const auto& m : artifact.models) fc.models.push_back(m.name);
    if (rows.rows() == 0) return fc;
    fc.rows = forecast_rows(artifact.models, artifact.weights, rows, cfg.features.target.horizon, cfg.bootstrap, false);
    return fc;
}

}  // namespace crossflow::forecast

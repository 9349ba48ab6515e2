#include "crossflow/forecast/artifact.hpp"

#include "crossflow/common/error.hpp"
#include "crossflow/common/numfmt.hpp"

#include <fstream>
#include <ostream>

namespace crossflow::forecast {

using nlohmann::json;

namespace {

json range_json(const std::optional<DateRange>& r) {
    if (!r) return nullptr;
    return {{"start", format_date(r->first)}, {"end", format_date(r->last)}};
}

std::optional<DateRange> range_from(const json& j, const std::string& field) {
    if (j.is_null()) return std::nullopt;
    return DateRange{parse_date_or_throw(j.at("start").get<std::string>(), field + ".start"),
                     parse_date_or_throw(j.at("end").get<std::string>(), field + ".end")};
}

json optional_number(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

}  // namespace

json to_json(const TrainedModel& m) {
    if (!m.regressor) throw ValidationError("model", "cannot serialize unfitted model '" + m.name + "'");
    return {
        {"name", m.name},
        {"kind", m.kind},
        {"hyperparameters", m.hyperparameters},
        {"columns", m.columns},
        {"parameters", m.regressor->parameters()},
        {"metrics", {{"cv_mse", m.cv_mse}, {"test_rmse", optional_number(m.test_rmse)}, {"test_mae", optional_number(m.test_mae)}}},
        {"seed", m.seed},
        {"trained_on", range_json(m.trained_on)},
        {"residuals", m.residuals},
    };
}

TrainedModel trained_model_from_json(const json& doc) {
    TrainedModel m;
    try {
        m.name = doc.at("name").get<std::string>();
        m.kind = doc.at("kind").get<std::string>();
        m.hyperparameters = doc.at("hyperparameters").get<Hyperparameters>();
        m.columns = doc.at("columns").get<std::vector<std::string>>();
        auto reg = make_regressor(m.kind);
        reg->load_parameters(doc.at("parameters"));
        m.regressor = std::move(reg);
        const auto& metrics = doc.at("metrics");
        m.cv_mse = metrics.at("cv_mse").get<double>();
        if (!metrics.at("test_rmse").is_null()) m.test_rmse = metrics["test_rmse"].get<double>();
        if (!metrics.at("test_mae").is_null()) m.test_mae = metrics["test_mae"].get<double>();
        m.seed = doc.at("seed").get<std::uint64_t>();
        m.trained_on = range_from(doc.at("trained_on"), "trained_on");
        m.residuals = doc.at("residuals").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ValidationError("model", std::string("malformed model document: ") + e.what());
    }
    return m;
}

json to_json(const ModelReport& r) {
    return {{"name", r.name},       {"kind", r.kind},         {"hyperparameters", r.hyperparameters},
            {"cv_mse", r.cv_mse},   {"test_rmse", r.test_rmse}, {"test_mae", r.test_mae},
            {"weight", r.weight}};
}

json to_json(const EnsembleArtifact& a) {
    json models = json::array();
    for (const auto& m : a.models) models.push_back(to_json(m));
    json reports = json::array();
    for (const auto& r : a.reports) reports.push_back(to_json(r));
    return {
        {"version", kArtifactVersion},
        {"config", to_json(a.config)},
        {"seed", a.config.seed},
        {"models", models},
        {"baseline", to_json(a.baseline)},
        {"weights", a.weights},
        {"reports", reports},
        {"ensemble_test", {{"rmse", a.ensemble_test.rmse}, {"mae", a.ensemble_test.mae}}},
        {"train_rows", range_json(a.train_rows)},
        {"test_rows", range_json(a.test_rows)},
        {"model_card",
         {{"weighting", "inverse test RMSE, normalized to sum to 1"},
          {"intervals", "residual bootstrap around point predictions, aggregated by the ensemble weights"},
          {"selection", "grid search, blocked time-series cross-validation, minimum mean validation MSE"},
          {"clipping", "predictions and lower bounds clipped at 0"}}},
    };
}

EnsembleArtifact artifact_from_json(const json& doc) {
    try {
        const int version = doc.at("version").get<int>();
        if (version != kArtifactVersion) {
            throw ValidationError("version", "unsupported artifact version " + std::to_string(version));
        }
        EnsembleArtifact a;
        a.config = config_from_json(doc.at("config"));
        for (const auto& m : doc.at("models")) a.models.push_back(trained_model_from_json(m));
        a.baseline = trained_model_from_json(doc.at("baseline"));
        a.weights = doc.at("weights").get<Weights>();
        for (const auto& r : doc.at("reports")) {
            a.reports.push_back({r.at("name").get<std::string>(), r.at("kind").get<std::string>(),
                                 r.at("hyperparameters").get<Hyperparameters>(), r.at("cv_mse").get<double>(),
                                 r.at("test_rmse").get<double>(), r.at("test_mae").get<double>(),
                                 r.at("weight").get<double>()});
        }
        a.ensemble_test = {doc.at("ensemble_test").at("rmse").get<double>(), doc["ensemble_test"].at("mae").get<double>()};
        a.train_rows = *range_from(doc.at("train_rows"), "train_rows");
        a.test_rows = *range_from(doc.at("test_rows"), "test_rows");
        return a;
    } catch (const json::exception& e) {
        throw ValidationError("artifact", std::string("malformed artifact: ") + e.what());
    }
}

void save_artifact(const EnsembleArtifact& artifact, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw NotFoundError("cannot write artifact " + path.string());
        out << to_json(artifact).dump(1) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

EnsembleArtifact load_artifact(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open artifact " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("artifact", std::string("artifact is not valid JSON: ") + e.what());
    }
    return artifact_from_json(doc);
}

json to_json(const EnsembleForecast& f) {
    json rows = json::array();
    for (const auto& r : f.rows) {
        rows.push_back({{"date", format_date(r.date)},
                        {"truth", optional_number(r.truth)},
                        {"per_model", r.per_model},
                        {"point", r.point},
                        {"lower", r.lower},
                        {"upper", r.upper}});
    }
    return {{"models", f.models}, {"weights", f.weights}, {"level", f.level}, {"rows", rows}};
}

void write_forecast_csv(std::ostream& out, const EnsembleForecast& f) {
    out << "date,truth";
    for (const auto& m : f.models) out << ',' << m;
    out << ",point,lower,upper\n";
    for (const auto& r : f.rows) {
        out << format_date(r.date) << ',';
        if (r.truth) out << format_number(*r.truth);
        for (const auto& m : f.models) out << ',' << format_number(r.per_model.at(m));
        out << ',' << format_number(r.point) << ',' << format_number(r.lower) << ',' << format_number(r.upper) << '\n';
    }
}

}  // namespace crossflow::forecast

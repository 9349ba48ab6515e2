#include "crossflow/service/api.hpp"

#include "crossflow/common/error.hpp"
#include "crossflow/forecast/artifact.hpp"
#include "crossflow/service/codec.hpp"
#include "crossflow/service/scenarios.hpp"

#include <ctime>
#include <sstream>

namespace crossflow::service {

using nlohmann::json;

namespace {

constexpr const char* kPanelValues = "panel.csv";
constexpr const char* kPanelMask = "panel_mask.csv";
constexpr const char* kIngestReport = "ingest_report.json";
constexpr const char* kArtifact = "forecast_artifact.json";
constexpr const char* kLatest = "forecast_latest.json";

Response error(int status, const std::string& field, const std::string& message) {
    return {status, {{"error", message}, {"field", field}}};
}

json parse_body(const std::string& body) {
    if (body.empty()) throw json::parse_error::create(101, 0, "empty request body", nullptr);
    return json::parse(body);
}

// Splits "/v1/scenarios/abc" into {"v1", "scenarios", "abc"}.
std::vector<std::string> segments(const std::string& path) {
    std::vector<std::string> out;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '/')) {
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

class TrainingSlot {
public:
    explicit TrainingSlot(std::atomic<bool>& flag) : flag_(flag) {
        bool expected = false;
        acquired_ = flag_.compare_exchange_strong(expected, true);
    }
    ~TrainingSlot() {
        if (acquired_) flag_.store(false);
    }
    bool acquired() const { return acquired_; }

private:
    std::atomic<bool>& flag_;
    bool acquired_ = false;
};

json report_to_json(const ingest::IngestReport& r) {
    json rejected = json::array();
    for (const auto& row : r.rejected) rejected.push_back({{"line", row.line}, {"reason", row.reason}});
    return {{"source_id", r.source_id},     {"rows_read", r.rows_read},     {"rows_accepted", r.rows_accepted},
            {"rejected", rejected},         {"gap_count", r.gap_count},     {"longest_gap", r.longest_gap},
            {"fill_count", r.fill_count}};
}

json range_json(const DateRange& r) { return {{"start", format_date(r.first)}, {"end", format_date(r.last)}}; }

forecast::DailySeries arrivals_from_json(const json& body) {
    if (body.contains("arrivals_csv")) {
        if (!body["arrivals_csv"].is_string()) throw ValidationError("arrivals_csv", "arrivals_csv must be a string");
        try {
            return forecast::parse_daily_csv(body["arrivals_csv"].get<std::string>(), "", "arrivals");
        } catch (const ValidationError& e) {
            throw ValidationError("arrivals_csv." + e.field(), e.what());
        }
    }
    if (!body.contains("arrivals")) throw ValidationError("arrivals", "arrivals or arrivals_csv is required");
    const auto& a = body["arrivals"];
    require_object(a, "arrivals");
    reject_unknown_keys(a, {"start", "values", "name", "units"}, "arrivals");
    forecast::DailySeries s;
    s.start = parse_date_or_throw(string_at(a, "start", "arrivals"), "arrivals.start");
    if (!a.contains("values") || !a["values"].is_array()) throw ValidationError("arrivals.values", "values must be an array");
    for (std::size_t i = 0; i < a["values"].size(); ++i) {
        const auto& v = a["values"][i];
        if (v.is_null()) {
            s.values.push_back(std::nan(""));
        } else if (v.is_number()) {
            s.values.push_back(v.get<double>());
        } else {
            throw ValidationError("arrivals.values[" + std::to_string(i) + "]", "value must be a number or null");
        }
    }
    s.name = a.value("name", std::string("arrivals"));
    s.units = a.value("units", std::string());
    return s;
}

std::vector<ingest::IndicatorSeries> indicators_from_json(const json& doc) {
    if (!doc.is_array()) throw ValidationError("indicators", "indicators must be an array");
    std::vector<ingest::IndicatorSeries> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto path = "indicators[" + std::to_string(i) + "]";
        const auto& item = doc[i];
        require_object(item, path);
        reject_unknown_keys(item, {"id", "units", "start", "values"}, path);
        ingest::IndicatorSeries s;
        s.source_id = string_at(item, "id", path);
        if (item.contains("units")) s.units = string_at(item, "units", path);
        s.start = parse_date_or_throw(string_at(item, "start", path), path + ".start");
        if (!item.contains("values") || !item["values"].is_array()) {
            throw ValidationError(path + ".values", "values must be an array");
        }
        for (std::size_t k = 0; k < item["values"].size(); ++k) {
            const auto& v = item["values"][k];
            if (v.is_null()) {
                s.values.push_back(std::nan(""));
                s.mask.push_back(ingest::FillFlag::Missing);
            } else if (v.is_number()) {
                s.values.push_back(v.get<double>());
                s.mask.push_back(ingest::FillFlag::Observed);
            } else {
                throw ValidationError(path + ".values[" + std::to_string(k) + "]", "value must be a number or null");
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

// Parses "START/END" (or "START,END") into a range.
DateRange parse_window(const Query& query, const DateRange& fallback) {
    DateRange r = fallback;
    if (auto it = query.find("window"); it != query.end()) {
        const auto& w = it->second;
        const auto sep = w.find_first_of("/,");
        if (sep == std::string::npos) throw ValidationError("window", "window must be START/END");
        r.first = parse_date_or_throw(w.substr(0, sep), "window");
        r.last = parse_date_or_throw(w.substr(sep + 1), "window");
    }
    if (auto it = query.find("start"); it != query.end()) r.first = parse_date_or_throw(it->second, "start");
    if (auto it = query.find("end"); it != query.end()) r.last = parse_date_or_throw(it->second, "end");
    if (r.last < r.first) throw ValidationError("window", "window end precedes its start");
    return r;
}

}  // namespace

std::string utc_now_iso() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Api::Api(Options options) : options_(std::move(options)), store_(options_.data_dir) {
    if (!options_.clock) options_.clock = utc_now_iso;
    // Restore state persisted by an earlier process.
    const auto values = store_.read_text(kPanelValues);
    const auto mask = store_.read_text(kPanelMask);
    if (values && mask) {
        std::istringstream v(*values), m(*mask);
        panel_ = std::make_shared<const ingest::Panel>(ingest::read_panel_csv(v, m));
    }
    if (auto latest = store_.read_document(kLatest)) latest_ = std::make_shared<const json>(std::move(*latest));
}

std::shared_ptr<const ingest::Panel> Api::panel() const { return std::atomic_load(&panel_); }

Response Api::handle(const std::string& method, const std::string& path, const std::string& body,
                     const Query& query) {
    try {
        return route(method, path, body, query);
    } catch (const json::parse_error& e) {
        return error(400, "body", std::string("malformed JSON: ") + e.what());
    } catch (const ValidationError& e) {
        return error(422, e.field(), e.what());
    } catch (const NotFoundError& e) {
        return error(404, "path", e.what());
    } catch (const StateError& e) {
        return error(422, "initial", e.what());
    } catch (const json::exception& e) {
        return error(422, "body", e.what());
    } catch (const std::exception& e) {
        return error(500, "", e.what());
    }
}

Response Api::route(const std::string& method, const std::string& path, const std::string& body,
                    const Query& query) {
    const auto parts = segments(path);
    auto only = [&](const char* allowed) -> std::optional<Response> {
        if (method == allowed) return std::nullopt;
        return error(405, "method", "method " + method + " not allowed on " + path);
    };

    if (parts.size() == 1 && parts[0] == "healthz") {
        if (auto r = only("GET")) return *r;
        return {200, {{"status", "ok"}}};
    }
    if (parts.empty() || parts[0] != "v1") return error(404, "path", "no route for " + path);

    const std::string resource = parts.size() > 1 ? parts[1] : "";
    if (parts.size() == 2 && resource == "parameters") {
        if (auto r = only("GET")) return *r;
        return {200, {{"parameters", sim::kPlannerParameters}, {"sliders", to_json(default_slider_ranges())}}};
    }
    if (parts.size() == 2 && resource == "simulate") {
        if (auto r = only("POST")) return *r;
        return post_simulate(parse_body(body));
    }
    if (parts.size() == 2 && resource == "sensitivity") {
        if (auto r = only("POST")) return *r;
        return post_sensitivity(parse_body(body));
    }
    if (resource == "scenarios" && parts.size() <= 3) return scenarios(method, parts.size() == 3 ? parts[2] : "", body);
    if (resource == "runs" && parts.size() <= 3) return runs(method, parts.size() == 3 ? parts[2] : "", body);
    if (parts.size() == 2 && resource == "ingest") {
        if (auto r = only("POST")) return *r;
        return post_ingest(parse_body(body));
    }
    if (parts.size() == 2 && resource == "indicators") {
        if (auto r = only("GET")) return *r;
        return get_indicators(query);
    }
    if (parts.size() == 3 && resource == "forecast" && parts[2] == "train") {
        if (auto r = only("POST")) return *r;
        return post_train(parse_body(body));
    }
    if (parts.size() == 3 && resource == "forecast" && parts[2] == "latest") {
        if (auto r = only("GET")) return *r;
        return get_latest();
    }
    return error(404, "path", "no route for " + path);
}

Response Api::post_simulate(const json& body) { return {200, simulate_response(simulate_request_from_json(body))}; }

Response Api::post_sensitivity(const json& body) {
    return {200, sensitivity_response(sensitivity_request_from_json(body))};
}

Response Api::scenarios(const std::string& method, const std::string& id, const std::string& body) {
    if (id.empty()) {
        if (method == "GET") {
            json items = json::array();
            for (auto& doc : store_.list("scenarios")) items.push_back(std::move(doc));
            return {200, {{"scenarios", items}}};
        }
        if (method == "POST") {
            auto doc = scenario_from_request(parse_body(body));
            doc.created_at = doc.updated_at = options_.clock();
            doc.id = store_.insert("scenarios", "scn", to_json(doc));
            return {201, to_json(doc)};
        }
        return error(405, "method", "method " + method + " not allowed on /v1/scenarios");
    }
    auto existing = store_.get("scenarios", id);
    if (!existing) return error(404, "id", "no scenario '" + id + "'");
    if (method == "GET") return {200, *existing};
    if (method == "PUT") {
        auto doc = scenario_from_request(parse_body(body));
        doc.id = id;
        doc.created_at = existing->value("created_at", std::string());
        doc.updated_at = options_.clock();
        store_.replace("scenarios", id, to_json(doc));
        return {200, to_json(doc)};
    }
    if (method == "DELETE") {
        // Runs cannot outlive the scenario they reference.
        for (const auto& run : store_.list("runs")) {
            if (run.value("scenario_id", std::string()) == id) {
                const auto run_id = run.at("id").get<std::string>();
                store_.erase("runs", run_id);
                store_.erase_document("run_" + run_id + ".json");
            }
        }
        store_.erase("scenarios", id);
        return {200, {{"deleted", id}}};
    }
    return error(405, "method", "method " + method + " not allowed on /v1/scenarios/{id}");
}

Response Api::runs(const std::string& method, const std::string& id, const std::string& body) {
    if (id.empty()) {
        if (method == "GET") {
            json items = json::array();
            for (auto& doc : store_.list("runs")) items.push_back(std::move(doc));
            return {200, {{"runs", items}}};
        }
        if (method != "POST") return error(405, "method", "method " + method + " not allowed on /v1/runs");
        const auto req_body = parse_body(body);
        require_object(req_body, "");
        reject_unknown_keys(req_body, {"scenario_id", "rules"}, "");
        const auto scenario_id = string_at(req_body, "scenario_id", "");
        const auto stored = store_.get("scenarios", scenario_id);
        if (!stored) return error(404, "scenario_id", "no scenario '" + scenario_id + "'");
        const auto scenario = scenario_document_from_json(*stored);
        SimulateRequest req{scenario.params, scenario.initial, {}};
        if (req_body.contains("rules")) req.rules = rules_from_json(req_body["rules"], "rules");
        auto result = simulate_response(req);

        json record = {{"scenario_id", scenario_id},
                       {"created_at", options_.clock()},
                       {"rules", req_body.value("rules", json::array())},
                       {"overflow", result["overflow"]},
                       {"bottlenecks", result["bottlenecks"]},
                       {"triggers", result["triggers"]}};
        const auto run_id = store_.insert("runs", "run", record);
        record["id"] = run_id;
        record["trace_ref"] = "run_" + run_id + ".json";
        store_.replace("runs", run_id, record);
        store_.write_document(record["trace_ref"].get<std::string>(), result["trace"]);
        return {201, record};
    }
    if (method != "GET") return error(405, "method", "method " + method + " not allowed on /v1/runs/{id}");
    auto record = store_.get("runs", id);
    if (!record) return error(404, "id", "no run '" + id + "'");
    auto trace = store_.read_document(record->at("trace_ref").get<std::string>());
    if (!trace) return error(404, "trace_ref", "trace for run '" + id + "' is missing");
    (*record)["trace"] = std::move(*trace);
    return {200, *record};
}

json Api::ingest(const ingest::Registry& registry) {
    auto result = ingest::ingest_all(registry);
    auto panel = std::make_shared<const ingest::Panel>(std::move(result.panel.panel));

    std::ostringstream values, mask;
    ingest::write_panel_csv(values, *panel);
    ingest::write_mask_csv(mask, *panel);
    json reports = json::array();
    for (const auto& r : result.reports) reports.push_back(report_to_json(r));
    const auto& cov = result.panel.coverage;
    json coverage = {{"days", cov.days},
                     {"flagged_rows", cov.flagged_rows},
                     {"missing_per_indicator", cov.missing_per_indicator},
                     {"filled_per_indicator", cov.filled_per_indicator}};
    json summary = {{"range", range_json(panel->range)},
                    {"indicators", panel->ids},
                    {"reports", reports},
                    {"coverage", coverage}};
    store_.write_text(kPanelValues, values.str());
    store_.write_text(kPanelMask, mask.str());
    store_.write_document(kIngestReport, summary);
    std::atomic_store(&panel_, std::shared_ptr<const ingest::Panel>(panel));
    return summary;
}

Response Api::post_ingest(const json& body) {
    require_object(body, "");
    reject_unknown_keys(body, {"registry"}, "");
    if (!body.contains("registry")) throw ValidationError("registry", "registry is required");
    const auto& reg = body["registry"];
    ingest::Registry registry;
    try {
        registry = reg.is_string() ? ingest::load_registry(reg.get<std::string>())
                                   : ingest::registry_from_json(reg);
    } catch (const ValidationError& e) {
        throw ValidationError("registry." + e.field(), e.what());
    }
    try {
        return {200, ingest(registry)};
    } catch (const ValidationError& e) {
        throw ValidationError("registry." + e.field(), e.what());
    }
}

Response Api::get_indicators(const Query& query) {
    const auto p = panel();
    if (!p) return error(404, "indicators", "no indicator panel has been ingested");
    const DateRange window = parse_window(query, p->range);
    const Date first = std::max(window.first, p->range.first);
    const Date last = std::min(window.last, p->range.last);

    json items = json::array();
    for (std::size_t i = 0; i < p->ids.size(); ++i) {
        const auto norm = ingest::normalize_for_display(p->column(i));
        json values = json::array();
        std::string mask;
        if (first <= last) {
            const auto from = static_cast<std::size_t>(days_between(p->range.first, first));
            const auto to = static_cast<std::size_t>(days_between(p->range.first, last));
            for (std::size_t k = from; k <= to; ++k) {
                values.push_back(std::isnan(norm.values[k]) ? json(nullptr) : json(norm.values[k]));
                mask.push_back(ingest::to_char(norm.mask[k]));
            }
        }
        items.push_back({{"id", p->ids[i]},
                         {"units", p->units.size() > i ? p->units[i] : std::string()},
                         {"degenerate", norm.degenerate},
                         {"start", first <= last ? json(format_date(first)) : json(nullptr)},
                         {"values", values},
                         {"mask", mask}});
    }
    return {200, {{"range", range_json(window)}, {"data_range", range_json(p->range)}, {"indicators", items}}};
}

Response Api::post_train(const json& body) {
    TrainingSlot slot(training_);
    if (!slot.acquired()) return error(409, "forecast", "a training run is already in progress");

    require_object(body, "");
    reject_unknown_keys(body, {"arrivals", "arrivals_csv", "indicators", "config"}, "");
    const auto arrivals = arrivals_from_json(body);
    std::vector<ingest::IndicatorSeries> indicators;
    if (body.contains("indicators")) {
        indicators = indicators_from_json(body["indicators"]);
    } else if (const auto p = panel()) {
        indicators = p->series();
    }
    forecast::ForecastConfig cfg;
    if (body.contains("config")) {
        require_object(body["config"], "config");
        try {
            cfg = forecast::config_from_json(body["config"]);
        } catch (const ValidationError& e) {
            throw ValidationError(e.field() == "config" ? "config" : "config." + e.field(), e.what());
        }
    }

    const auto result = forecast::train_ensemble(arrivals, indicators, cfg);
    json reports = json::array();
    for (const auto& r : result.artifact.reports) reports.push_back(forecast::to_json(r));
    json summary = {{"models", reports},
                    {"ensemble", {{"rmse", result.artifact.ensemble_test.rmse}, {"mae", result.artifact.ensemble_test.mae}}},
                    {"weights", result.artifact.weights},
                    {"train_rows", range_json(result.artifact.train_rows)},
                    {"test_rows", range_json(result.artifact.test_rows)},
                    {"trained_at", options_.clock()}};
    json latest = forecast::to_json(result.forecast);
    latest["summary"] = summary;

    store_.write_document(kArtifact, forecast::to_json(result.artifact));
    store_.write_document(kLatest, latest);
    std::atomic_store(&latest_, std::make_shared<const json>(std::move(latest)));
    return {200, summary};
}

Response Api::get_latest() {
    const auto latest = std::atomic_load(&latest_);
    if (!latest) return error(404, "forecast", "no ensemble has been trained yet");
    return {200, *latest};
}

}  // namespace crossflow::service

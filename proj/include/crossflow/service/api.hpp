#pragma once

#include "crossflow/forecast/pipeline.hpp"
#include "crossflow/ingest/registry.hpp"
#include "crossflow/service/store.hpp"

#include <json.hpp>

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <string>

namespace crossflow::service {

struct Response {
    int status = 200;
    nlohmann::json body;
};

using Query = std::map<std::string, std::string>;

// Transport-independent /v1 API. Every error body is
// {"error": message, "field": path}; bad input yields 400/404/409/422.
//
//   GET    /healthz
//   GET    /v1/parameters
//   POST   /v1/simulate
//   POST   /v1/sensitivity
//   GET    /v1/scenarios                 POST /v1/scenarios
//   GET    /v1/scenarios/{id}            PUT|DELETE /v1/scenarios/{id}
//   GET    /v1/runs                      POST /v1/runs
//   GET    /v1/runs/{id}
//   POST   /v1/ingest
//   GET    /v1/indicators?window=START/END
//   POST   /v1/forecast/train
//   GET    /v1/forecast/latest
//
// Safe to call from many threads at once.
class Api {
public:
    struct Options {
        std::filesystem::path data_dir;  // empty: in-memory only
        std::function<std::string()> clock;  // ISO-8601 timestamps; defaults to UTC now
    };

    explicit Api(Options options = {});

    Response handle(const std::string& method, const std::string& path, const std::string& body,
                    const Query& query = {});

    // Ingests a registry and replaces the indicator panel.
    nlohmann::json ingest(const ingest::Registry& registry);

    // True while a training request holds the single training slot.
    bool training_in_progress() const { return training_.load(); }

private:
    Response route(const std::string& method, const std::string& path, const std::string& body, const Query& query);

    Response post_simulate(const nlohmann::json& body);
    Response post_sensitivity(const nlohmann::json& body);
    Response scenarios(const std::string& method, const std::string& id, const std::string& body);
    Response runs(const std::string& method, const std::string& id, const std::string& body);
    Response post_ingest(const nlohmann::json& body);
    Response get_indicators(const Query& query);
    Response post_train(const nlohmann::json& body);
    Response get_latest();

    std::shared_ptr<const ingest::Panel> panel() const;

    Options options_;
    JsonStore store_;
    std::atomic<bool> training_{false};
    std::shared_ptr<const ingest::Panel> panel_;
    std::shared_ptr<const nlohmann::json> latest_;
};

// UTC timestamp with second precision.
std::string utc_now_iso();

}  // namespace crossflow::service

#include "crossflow/service/config.hpp"

#include "crossflow/common/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>

namespace crossflow::service {

namespace {

int parse_port(const std::string& text, const std::string& field) {
    int port = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), port);
    if (ec != std::errc() || ptr != text.data() + text.size() || port < 0 || port > 65535) {
        throw ValidationError(field, "port must be an integer in 0..65535");
    }
    return port;
}

}  // namespace

ServiceConfig load_service_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open config " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config", std::string("malformed config: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config", "config must be a JSON object");
    ServiceConfig cfg;
    const auto base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp = p;
        return fp.is_absolute() ? fp : base / fp;
    };
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "host") {
                cfg.host = value.get<std::string>();
            } else if (key == "port") {
                cfg.port = parse_port(std::to_string(value.get<long>()), "port");
            } else if (key == "data_dir") {
                cfg.data_dir = resolve(value.get<std::string>());
            } else if (key == "registry") {
                cfg.registry = resolve(value.get<std::string>());
            } else if (key == "threads") {
                cfg.threads = value.get<int>();
                if (cfg.threads < 1) throw ValidationError("threads", "threads must be >= 1");
            } else {
                throw ValidationError(key, "unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config", std::string("bad config value: ") + e.what());
    }
    return cfg;
}

std::optional<std::string> process_env(const std::string& name) {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
}

void apply_env_overrides(ServiceConfig& cfg, const EnvLookup& env) {
    if (auto port = env("CROSSFLOW_PORT")) cfg.port = parse_port(*port, "CROSSFLOW_PORT");
    if (auto dir = env("CROSSFLOW_DATA_DIR")) cfg.data_dir = *dir;
}

}  // namespace crossflow::service

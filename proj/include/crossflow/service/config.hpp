#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace crossflow::service {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path data_dir = "data";
    // Registry ingested at startup when set.
    std::optional<std::filesystem::path> registry;
    int threads = 8;
};

// JSON file with any subset of {"host", "port", "data_dir", "registry",
// "threads"}. Relative paths resolve against the file's directory.
ServiceConfig load_service_config(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> process_env(const std::string& name);

// CROSSFLOW_PORT and CROSSFLOW_DATA_DIR take precedence over the file.
void apply_env_overrides(ServiceConfig& cfg, const EnvLookup& env = process_env);

}  // namespace crossflow::service

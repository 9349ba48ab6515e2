#pragma once

#include <json.hpp>

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace crossflow::service {

// Small JSON document store. Collections live in `<dir>/<name>.json` and
// loose documents in `<dir>/<name>`; every write goes through a temporary
// file and a rename. An empty directory keeps everything in memory.
class JsonStore {
public:
    explicit JsonStore(std::filesystem::path dir = {});

    const std::filesystem::path& dir() const { return dir_; }
    bool persistent() const { return !dir_.empty(); }

    // Assigns "<prefix>-NNNNNN", stores the document with its "id" and
    // returns the id.
    std::string insert(const std::string& collection, const std::string& prefix, nlohmann::json doc);
    std::optional<nlohmann::json> get(const std::string& collection, const std::string& id) const;
    std::vector<nlohmann::json> list(const std::string& collection) const;
    // False when the id does not exist.
    bool replace(const std::string& collection, const std::string& id, nlohmann::json doc);
    bool erase(const std::string& collection, const std::string& id);

    std::optional<nlohmann::json> read_document(const std::string& name) const;
    void write_document(const std::string& name, const nlohmann::json& doc);
    void erase_document(const std::string& name);

    std::optional<std::string> read_text(const std::string& name) const;
    void write_text(const std::string& name, const std::string& text);

private:
    struct Collection {
        long next_id = 1;
        std::map<std::string, nlohmann::json> items;
    };

    Collection& load(const std::string& collection) const;
    void flush(const std::string& collection, const Collection& c);

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, Collection> collections_;
    std::map<std::string, std::string> memory_;  // loose documents when not persistent
};

// Writes `text` to `path` via `path.tmp` and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace crossflow::service

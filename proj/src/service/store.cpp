#include "crossflow/service/store.hpp"

#include "crossflow/common/error.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace crossflow::service {

using nlohmann::json;

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::optional<std::string> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

JsonStore::JsonStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (persistent()) std::filesystem::create_directories(dir_);
}

JsonStore::Collection& JsonStore::load(const std::string& collection) const {
    auto it = collections_.find(collection);
    if (it != collections_.end()) return it->second;
    Collection c;
    if (persistent()) {
        if (auto text = slurp(dir_ / (collection + ".json"))) {
            const auto doc = json::parse(*text);
            c.next_id = doc.at("next_id").get<long>();
            for (const auto& [id, item] : doc.at("items").items()) c.items[id] = item;
        }
    }
    return collections_.emplace(collection, std::move(c)).first->second;
}

void JsonStore::flush(const std::string& collection, const Collection& c) {
    if (!persistent()) return;
    json items = json::object();
    for (const auto& [id, item] : c.items) items[id] = item;
    write_file_atomic(dir_ / (collection + ".json"), json{{"next_id", c.next_id}, {"items", items}}.dump(1));
}

std::string JsonStore::insert(const std::string& collection, const std::string& prefix, json doc) {
    std::lock_guard lock(mutex_);
    auto& c = load(collection);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s-%06ld", prefix.c_str(), c.next_id++);
    const std::string id = buf;
    doc["id"] = id;
    c.items[id] = std::move(doc);
    flush(collection, c);
    return id;
}

std::optional<json> JsonStore::get(const std::string& collection, const std::string& id) const {
    std::lock_guard lock(mutex_);
    const auto& c = load(collection);
    auto it = c.items.find(id);
    if (it == c.items.end()) return std::nullopt;
    return it->second;
}

std::vector<json> JsonStore::list(const std::string& collection) const {
    std::lock_guard lock(mutex_);
    std::vector<json> out;
    for (const auto& [_, item] : load(collection).items) out.push_back(item);
    return out;
}

bool JsonStore::replace(const std::string& collection, const std::string& id, json doc) {
    std::lock_guard lock(mutex_);
    auto& c = load(collection);
    auto it = c.items.find(id);
    if (it == c.items.end()) return false;
    doc["id"] = id;
    it->second = std::move(doc);
    flush(collection, c);
    return true;
}

bool JsonStore::erase(const std::string& collection, const std::string& id) {
    std::lock_guard lock(mutex_);
    auto& c = load(collection);
    if (c.items.erase(id) == 0) return false;
    flush(collection, c);
    return true;
}

std::optional<json> JsonStore::read_document(const std::string& name) const {
    auto text = read_text(name);
    if (!text) return std::nullopt;
    return json::parse(*text);
}

void JsonStore::write_document(const std::string& name, const json& doc) { write_text(name, doc.dump()); }

void JsonStore::erase_document(const std::string& name) {
    std::lock_guard lock(mutex_);
    if (persistent()) {
        std::error_code ec;
        std::filesystem::remove(dir_ / name, ec);
    } else {
        memory_.erase(name);
    }
}

std::optional<std::string> JsonStore::read_text(const std::string& name) const {
    std::lock_guard lock(mutex_);
    if (!persistent()) {
        auto it = memory_.find(name);
        if (it == memory_.end()) return std::nullopt;
        return it->second;
    }
    return slurp(dir_ / name);
}

void JsonStore::write_text(const std::string& name, const std::string& text) {
    std::lock_guard lock(mutex_);
    if (!persistent()) {
        memory_[name] = text;
        return;
    }
    write_file_atomic(dir_ / name, text);
}

}  // namespace crossflow::service

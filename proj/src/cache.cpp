#include "reviewrank/cache.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reviewrank/digest.hpp"
#include "reviewrank/report.hpp"

namespace reviewrank {

std::string CacheKey::str() const {
    return repo_digest + '\x1f' + head_commit + '\x1f' + config_digest + '\x1f' + request;
}

RecommendationCache::RecommendationCache(std::size_t capacity, std::optional<std::filesystem::path> directory)
    : capacity_(std::max<std::size_t>(1, capacity)), directory_(std::move(directory)) {
    if (directory_) std::filesystem::create_directories(*directory_);
}

std::filesystem::path RecommendationCache::file_for(const std::string& key) const {
    return *directory_ / (hex_digest(key) + ".json");
}

void RecommendationCache::insert_locked(const std::string& key, std::string document) {
    if (auto it = index_.find(key); it != index_.end()) {
        lru_.erase(it->second);
        index_.erase(it);
    }
    lru_.emplace_front(key, std::move(document));
    index_[key] = lru_.begin();
    while (lru_.size() > capacity_) {
        index_.erase(lru_.back().first);
        lru_.pop_back();
    }
}

std::optional<std::string> RecommendationCache::get(const CacheKey& key) {
    const auto k = key.str();
    std::lock_guard lock(mutex_);
    if (auto it = index_.find(k); it != index_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second);
        return it->second->second;
    }
    if (!directory_) return std::nullopt;
    auto path = file_for(k);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        auto j = nlohmann::json::parse(buf.str());
        if (j.at("key").get<std::string>() != k) return std::nullopt; // digest collision
        auto document = j.at("document").get<std::string>();
        recommendation_from_json(document);
        insert_locked(k, document);
        return document;
    } catch (const std::exception& e) {
        warnings_.push_back("corrupt cache entry " + path.string() + " ignored: " + e.what());
        return std::nullopt;
    }
}

void RecommendationCache::put(const CacheKey& key, std::string document) {
    const auto k = key.str();
    std::lock_guard lock(mutex_);
    if (directory_) {
        nlohmann::ordered_json j;
        j["key"] = k;
        j["document"] = document;
        auto path = file_for(k);
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << j.dump();
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
    }
    insert_locked(k, std::move(document));
}

void RecommendationCache::invalidate(const CacheKey& key) {
    const auto k = key.str();
    std::lock_guard lock(mutex_);
    if (auto it = index_.find(k); it != index_.end()) {
        lru_.erase(it->second);
        index_.erase(it);
    }
    if (directory_) {
        std::error_code ec;
        std::filesystem::remove(file_for(k), ec);
    }
}

std::size_t RecommendationCache::size() const {
    std::lock_guard lock(mutex_);
    return lru_.size();
}

std::vector<std::string> RecommendationCache::warnings() const {
    std::lock_guard lock(mutex_);
    return warnings_;
}

} // namespace reviewrank

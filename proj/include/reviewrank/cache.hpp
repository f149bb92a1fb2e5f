#pragma once

#include <filesystem>
#include <list>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace reviewrank {

struct CacheKey {
    std::string repo_digest;
    std::string head_commit;
    std::string config_digest;
    /// Identifies the request itself (strategy plus PR id or changed files).
    std::string request;

    std::string str() const;
    bool operator==(const CacheKey&) const = default;
};

/// Bounded most-recently-used store of machine-form recommendation
/// documents, optionally mirrored to one file per key under `directory`.
/// Entries are returned byte-for-byte as stored.
class RecommendationCache {
public:
    explicit RecommendationCache(std::size_t capacity = 64,
                                 std::optional<std::filesystem::path> directory = std::nullopt);

    std::optional<std::string> get(const CacheKey& key);
    void put(const CacheKey& key, std::string document);
    void invalidate(const CacheKey& key);

    std::size_t size() const;
    std::size_t capacity() const { return capacity_; }

    /// Corrupt on-disk entries encountered so far (each treated as a miss).
    std::vector<std::string> warnings() const;

private:
    std::filesystem::path file_for(const std::string& key) const;
    void insert_locked(const std::string& key, std::string document);

    std::size_t capacity_;
    std::optional<std::filesystem::path> directory_;
    mutable std::mutex mutex_;
    std::list<std::pair<std::string, std::string>> lru_;
    std::unordered_map<std::string, std::list<std::pair<std::string, std::string>>::iterator> index_;
    std::vector<std::string> warnings_;
};

} // namespace reviewrank

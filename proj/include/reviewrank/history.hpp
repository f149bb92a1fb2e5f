#pragma once

#include <iosfwd>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "reviewrank/model.hpp"

namespace reviewrank {

/// Malformed PR metadata; the message names the record index and field.
class HistoryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pull requests of one project in (created_at, id) order.
class ProjectHistory {
public:
    ProjectHistory() = default;
    /// Sorts, validates every PR and rejects duplicate ids.
    ProjectHistory(std::vector<PullRequest> prs, std::string repo_path = {});

    const std::vector<PullRequest>& prs() const { return prs_; }
    const std::string& repo_path() const { return repo_path_; }
    std::size_t size() const { return prs_.size(); }
    bool empty() const { return prs_.empty(); }

    const PullRequest* find(const PrId& id) const;

private:
    std::vector<PullRequest> prs_;
    std::string repo_path_;
    std::unordered_map<PrId, std::size_t> by_id_;
};

constexpr Timestamp kNoReference = std::numeric_limits<Timestamp>::max();

/// Parses newline-delimited PR records. Blank lines are ignored.
ProjectHistory parse_history(std::istream& in, const std::string& repo_path = {});

/// Reads the metadata file and checks the repository; throws HistoryError for
/// malformed records and RepositoryError for an unusable repository.
ProjectHistory load_history(const std::string& metadata_path, const std::string& repo_path);

/// One record per line, canonical field order; parse_history inverts it.
std::string serialize_history(const ProjectHistory& history);

std::string serialize_pr(const PullRequest& pr);

/// Up to `w` CLOSED PRs with closed_at < reference, most recent first
/// (ties by id descending). `exclude` is never returned.
std::vector<PullRequest> select_window(const ProjectHistory& history, Timestamp reference, int w,
                                       const std::optional<PrId>& exclude = std::nullopt);

/// Parses "2023-04-01T12:00:00Z" style UTC timestamps.
std::optional<Timestamp> parse_iso8601(const std::string& text);

/// Thread-safe memo of per-PR token bags; entries are never replaced.
class TokenCache {
public:
    std::optional<TokenBag> get(const PrId& id) const;
    /// Inserts if absent and returns the stored bag.
    TokenBag put(const PrId& id, TokenBag bag);
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::unordered_map<PrId, TokenBag> bags_;
};

} // namespace reviewrank

#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reviewrank/cache.hpp"
#include "reviewrank/engine.hpp"
#include "reviewrank/git_repository.hpp"
#include "reviewrank/history.hpp"

namespace reviewrank {

/// Request-level failure. `status` follows HTTP semantics (400, 404).
class RequestError : public std::runtime_error {
public:
    RequestError(int status, std::string field, const std::string& message)
        : std::runtime_error(message), status_(status), field_(std::move(field)) {}

    int status() const { return status_; }
    const std::string& field() const { return field_; }

private:
    int status_;
    std::string field_;
};

struct WorkspaceOptions {
    std::string repo_path;
    std::string history_path;
    Config config = Config::defaults();
    unsigned threads = 1;
    std::size_t cache_capacity = 64;
    std::optional<std::string> cache_dir;
};

/// A changed file in a new-PR request; the revision defaults to HEAD.
struct FileSpec {
    std::string path;
    std::string rev = "HEAD";
};

/// Parses "path" or "path@rev".
FileSpec parse_file_spec(const std::string& text);

struct RecommendRequest {
    std::optional<PrId> pr_id;
    std::vector<FileSpec> files;
    std::optional<Identity> author;
    std::optional<int> k;
    std::optional<int> window;
    StrategyKind strategy = StrategyKind::Correct;
    bool refresh = false;
};

struct RecommendResult {
    Recommendation recommendation;
    /// Machine form, identical on the CLI, over HTTP and from the cache.
    std::string document;
    bool cache_hit = false;
};

/// History, repository and engine of one project, loaded once and shared
/// read-only by every request. `recommend` is safe to call concurrently.
class Workspace {
public:
    /// Throws HistoryError / RepositoryError on unusable inputs.
    explicit Workspace(const WorkspaceOptions& options);

    const ProjectHistory& history() const { return *history_; }
    const Recommender& engine() const { return *engine_; }
    const GitRepository& repository() const { return *repo_; }
    RecommendationCache& cache() { return cache_; }
    const Config& config() const { return engine_->config(); }
    const std::string& repo_digest() const { return repo_digest_; }
    const std::string& head_commit() const { return head_commit_; }

    /// Builds the PR under review: the history PR for `pr_id`, or a new PR
    /// from the listed files and author. Throws RequestError.
    PullRequest resolve_request(const RecommendRequest& request) const;

    RecommendResult recommend(const RecommendRequest& request);

    CacheKey cache_key(const RecommendRequest& request, const PullRequest& pr, const Config& cfg) const;

private:
    std::unique_ptr<ProjectHistory> history_;
    std::shared_ptr<GitRepository> repo_;
    std::unique_ptr<Recommender> engine_;
    RecommendationCache cache_;
    std::string repo_digest_;
    std::string head_commit_;
};

/// File reader bound to a repository.
FileReader git_file_reader(std::shared_ptr<const GitRepository> repo);

/// Module index of the tree at `rev` (HEAD by default); an empty index when
/// the repository has no commits.
ProjectModuleIndex module_index_at(const GitRepository& repo, const Config& cfg, const std::string& rev = "HEAD");

} // namespace reviewrank

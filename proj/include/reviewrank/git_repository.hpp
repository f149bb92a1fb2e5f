#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace reviewrank {

class RepositoryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Read-only view of a local Git repository (bare or with a work tree).
///
/// Blob lookups go through one long-lived `git cat-file --batch` child
/// process; calls are serialized internally so a single instance may be
/// shared by concurrent workers. Results are memoized per (commit, path).
class GitRepository {
public:
    /// Throws RepositoryError("repository snapshot unavailable") when `path`
    /// is not a readable Git repository.
    static std::shared_ptr<GitRepository> open(const std::string& path);

    static bool is_repository(const std::string& path);

    ~GitRepository();
    GitRepository(const GitRepository&) = delete;
    GitRepository& operator=(const GitRepository&) = delete;

    const std::string& path() const { return path_; }

    /// Content of `path` as recorded at `commit`; nullopt when the commit or
    /// path does not exist or does not name a file.
    std::optional<std::string> read_file_at(const std::string& commit, const std::string& path) const;

    /// Full commit id for a revision expression, or nullopt.
    std::optional<std::string> resolve(const std::string& rev) const;

    /// Every file path in the tree of `rev`. Throws RepositoryError when the
    /// revision cannot be listed.
    std::vector<std::string> list_files(const std::string& rev) const;

private:
    explicit GitRepository(std::string path);

    struct BatchProcess;

    std::optional<std::string> query_blob(const std::string& spec) const;

    std::string path_;
    mutable std::mutex mutex_;
    mutable std::unique_ptr<BatchProcess> batch_;
    mutable std::map<std::string, std::optional<std::string>> memo_;
};

struct CommandResult {
    int exit_code = -1;
    std::string out;
};

/// Runs argv[0] (looked up on PATH) without a shell; stderr is discarded.
CommandResult run_command(const std::vector<std::string>& argv);

} // namespace reviewrank

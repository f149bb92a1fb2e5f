#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reviewrank/eval.hpp"
#include "reviewrank/extract.hpp"
#include "reviewrank/history.hpp"
#include "reviewrank/rank.hpp"

namespace reviewrank {

enum class StrategyKind { Correct, Fps, Frequency };

std::string_view to_string(StrategyKind kind);
StrategyKind strategy_from_name(std::string_view name);

/// Recommendation pipeline over one loaded project history.
///
/// Token bags of history PRs are computed once and memoized; window
/// tokenization fans out over `threads` workers. Output does not depend on
/// the thread count.
class Recommender {
public:
    Recommender(const ProjectHistory& history, FileReader reader, ProjectModuleIndex index, Config cfg,
                unsigned threads = 1);

    const Config& config() const { return cfg_; }
    const ProjectHistory& history() const { return history_; }
    const ProjectModuleIndex& module_index() const { return index_; }

    /// Closed PRs strictly before the reference instant of `pr`: its own
    /// closed_at when it is a CLOSED member of the history, otherwise every
    /// closed PR. `pr` itself is never included.
    std::vector<PullRequest> window_for(const PullRequest& pr) const;

    Recommendation recommend(const PullRequest& pr, StrategyKind kind = StrategyKind::Correct) const;
    Recommendation recommend(const PullRequest& pr, StrategyKind kind, const Config& cfg) const;

    /// Ranks against a caller-chosen window.
    Recommendation recommend_in_window(const PullRequest& pr, std::span<const PullRequest> window, StrategyKind kind,
                                       const Config& cfg) const;

    /// Raw per-candidate scores before exclusion and truncation.
    CandidateScores score(const PullRequest& pr, std::span<const PullRequest> window, StrategyKind kind,
                          const Config& cfg) const;

    /// Token bag of a PR (memoized for PRs that belong to the history).
    TokenBag tokens_of(const PullRequest& pr) const;

    /// Strategy adapter for retrospective evaluation; rankings are not
    /// truncated so reciprocal ranks see the full list.
    Strategy strategy(StrategyKind kind) const;

    /// Per-file warnings collected so far, in the order they were raised.
    std::vector<std::string> warnings() const;

private:
    Timestamp reference_for(const PullRequest& pr) const;
    std::vector<TokenBag> window_bags(std::span<const PullRequest> window) const;
    PrTokens compute_tokens(const PullRequest& pr) const;
    void record(const std::vector<std::string>& warnings) const;

    const ProjectHistory& history_;
    FileReader reader_;
    ProjectModuleIndex index_;
    Config cfg_;
    unsigned threads_;
    mutable TokenCache cache_;
    mutable std::mutex warnings_mutex_;
    mutable std::vector<std::string> warnings_;
};

/// One-shot convenience: window selection, tokenization and ranking.
Recommendation recommend(const PullRequest& pr, const ProjectHistory& history, const Config& cfg,
                         const FileReader& reader, const ProjectModuleIndex& index);

} // namespace reviewrank

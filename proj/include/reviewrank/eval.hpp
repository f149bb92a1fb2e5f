#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reviewrank/history.hpp"
#include "reviewrank/model.hpp"

namespace reviewrank {

class MetricError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Ranking = std::vector<Identity>;
using Truth = std::set<Identity>;

/// Fraction of instances whose top-K contains a ground-truth reviewer;
/// nullopt for an empty instance list.
std::optional<double> top_k_accuracy(std::span<const Ranking> rankings, std::span<const Truth> truths, int k);

/// Mean reciprocal rank of the first hit in the full ranking (0 for no hit).
std::optional<double> mean_reciprocal_rank(std::span<const Ranking> rankings, std::span<const Truth> truths);

/// Per instance |top-K ∩ truth| / min(K, |ranking|), 0 for an empty ranking.
/// Throws MetricError on an instance with empty truth.
std::optional<double> mean_precision(std::span<const Ranking> rankings, std::span<const Truth> truths, int k);

/// Per instance |top-K ∩ truth| / |truth|. Throws MetricError on empty truth.
std::optional<double> mean_recall(std::span<const Ranking> rankings, std::span<const Truth> truths, int k);

/// 1-based rank of the first ranked identity in `truth`, 0 when none.
std::size_t first_hit_rank(const Ranking& ranking, const Truth& truth);

/// Mean over all cross pairs of the shared leading path-component count
/// divided by the longer path's component count; 0 if either list is empty.
double fps_similarity(std::span<const std::string> files_a, std::span<const std::string> files_b);

/// Ranked recommendation for `pr` given its already selected window.
using Strategy = std::function<Recommendation(const PullRequest& pr, std::span<const PullRequest> window)>;

struct KMetrics {
    std::optional<double> top_k_accuracy;
    std::optional<double> mean_precision;
    std::optional<double> mean_recall;
};

struct EvaluatedInstance {
    PrId pr;
    Truth truth;
    Ranking ranking;
    std::size_t first_hit_rank = 0;

    double reciprocal_rank() const { return first_hit_rank == 0 ? 0.0 : 1.0 / static_cast<double>(first_hit_rank); }
};

struct SkippedPr {
    PrId pr;
    std::string reason;
};

struct EvaluationReport {
    std::string strategy;
    int window_size = 0;
    std::map<int, KMetrics> per_k;
    std::optional<double> mrr;
    std::size_t replayed = 0;
    std::vector<EvaluatedInstance> instances;
    std::vector<SkippedPr> skipped;

    std::size_t evaluated_prs() const { return instances.size(); }
    std::size_t skipped_prs() const { return skipped.size(); }
    std::vector<double> reciprocal_ranks() const;
};

inline constexpr const char* kSkipEmptyWindow = "empty window";
inline constexpr const char* kSkipEmptyTruth = "empty ground truth";

/// Replays every CLOSED PR in chronological order against the window of PRs
/// closed strictly before it. `threads` > 1 runs the replays concurrently;
/// the report is identical either way.
EvaluationReport retrospective_evaluate(const ProjectHistory& history, const std::string& strategy_name,
                                        const Strategy& strategy, const Config& cfg, const std::vector<int>& k_values,
                                        unsigned threads = 1);

/// Metrics from already collected instances.
void aggregate_metrics(EvaluationReport& report, const std::vector<int>& k_values);

} // namespace reviewrank

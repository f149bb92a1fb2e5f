#pragma once

#include <map>
#include <span>
#include <vector>

#include "reviewrank/model.hpp"

namespace reviewrank {

/// Cosine of the angle between two count vectors over their union
/// vocabulary; 0 when either side is empty.
double cosine_similarity(const TokenCounts& a, const TokenCounts& b);

/// Similarity of one past PR to the request under review.
struct PrSimilarity {
    const PullRequest* pr = nullptr;
    double lib = 0.0;
    double tech = 0.0;
    /// Contribution to the reviewer total.
    double total = 0.0;
};

using CandidateScores = std::map<Identity, CandidateScore>;

/// Adds every past PR's similarity to each of its ground-truth reviewers.
/// Per-reviewer sums are taken over sorted contributions so the result does
/// not depend on window order.
CandidateScores propagate(std::span<const PrSimilarity> similarities);

struct WindowPr {
    const PullRequest* pr = nullptr;
    TokenBag bag;
};

std::vector<PrSimilarity> correct_similarities(const TokenBag& current, std::span<const WindowPr> window,
                                               double lib_weight = 1.0, double tech_weight = 1.0);

CandidateScores score_candidates(const TokenBag& current, std::span<const WindowPr> window,
                                 double lib_weight = 1.0, double tech_weight = 1.0);

/// Review counts over the window: total = number of window PRs whose ground
/// truth contains the reviewer.
CandidateScores frequency_scores(std::span<const PullRequest> window);

/// Rounds each dimension against its maximum across `entries` (half-up to
/// whole percent); a dimension whose maximum is 0 maps to 0.
void normalize_scores(std::vector<RecommendationEntry>& entries);

/// Drops the requester and zero totals, orders by total desc, then latest
/// supporting review desc, then identity asc, truncates to cfg.k and attaches
/// percentages. Falls back to review-count ranking (0% scores) when nothing
/// scores above zero and cfg.fallback_enabled.
Recommendation rank_reviewers(const CandidateScores& scores, const Identity& requester,
                              std::span<const PullRequest> window, const Config& cfg);

/// Orders candidates with the ranking tie-breaks, keeping zero totals. Totals
/// within 1e-9 of each other count as equal.
std::vector<CandidateScore> order_candidates(const CandidateScores& scores, std::span<const PullRequest> window);

} // namespace reviewrank

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reviewrank/eval.hpp"
#include "reviewrank/extract.hpp"
#include "reviewrank/model.hpp"

namespace reviewrank {

/// Machine-readable recommendation: pretty-printed JSON with a fixed key
/// order and a trailing newline. The CLI, the HTTP service and the cache
/// all emit exactly this text.
std::string recommendation_to_json(const Recommendation& rec);

/// Inverse of recommendation_to_json; throws std::runtime_error on malformed input.
Recommendation recommendation_from_json(const std::string& text);

/// Reviewer / Total / Library / Technology percentage table.
std::string render_recommendation_table(const Recommendation& rec);

/// `ranking_depth` bounds how many ranked reviewers each instance lists.
std::string evaluation_report_to_json(const EvaluationReport& report, std::size_t ranking_depth = 5);

std::string render_evaluation_table(const std::vector<EvaluationReport>& reports);

struct StrategyComparison {
    std::string strategy_a;
    std::string strategy_b;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    std::optional<double> u_a;
    std::optional<double> u_b;
    std::optional<double> p_value;
    bool exact = false;
    std::optional<double> cohens_d;
    std::optional<double> glass_delta;
    std::vector<std::string> notes;
};

/// MWU, Cohen's d and Glass's delta over the per-PR reciprocal ranks.
StrategyComparison compare_strategies(const EvaluationReport& a, const EvaluationReport& b);

std::string comparison_to_json(const StrategyComparison& cmp);
std::string render_comparison(const StrategyComparison& cmp);

struct TokenListing {
    std::string source;
    Language language = Language::Other;
    std::vector<std::pair<ImportRef, Classification>> imports;
    std::vector<std::string> notes;
};

/// Libraries and technologies with per-import provenance.
std::string render_token_listing(const std::vector<TokenListing>& files, const TokenBag& bag);

} // namespace reviewrank

#include "reviewrank/rank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace reviewrank {

double cosine_similarity(const TokenCounts& a, const TokenCounts& b) {
    if (a.empty() || b.empty()) return 0.0;
    // Counts are integers, so the dot product and squared norms are exact.
    std::uint64_t dot = 0, na = 0, nb = 0;
    for (const auto& [_, c] : a) na += std::uint64_t{c} * c;
    for (const auto& [_, c] : b) nb += std::uint64_t{c} * c;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            dot += std::uint64_t{ia->second} * ib->second;
            ++ia;
            ++ib;
        }
    }
    if (dot == 0) return 0.0;
    double sim = static_cast<double>(dot) / std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
    return std::clamp(sim, 0.0, 1.0);
}

namespace {

// Totals closer than this are ranked as ties, so accumulated rounding error
// cannot override the documented tie-breaks.
constexpr double kTieResolution = 1e-9;

double tie_key(double total) { return std::round(total / kTieResolution); }

double sorted_sum(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
}

} // namespace

CandidateScores propagate(std::span<const PrSimilarity> similarities) {
    struct Parts {
        std::vector<double> lib, tech, total;
        std::set<PrId> supporting;
    };
    std::map<Identity, Parts> parts;
    for (const auto& s : similarities) {
        for (const auto& reviewer : ground_truth(*s.pr)) {
            auto& p = parts[reviewer];
            p.lib.push_back(s.lib);
            p.tech.push_back(s.tech);
            p.total.push_back(s.total);
            if (s.lib + s.tech > 0.0 || s.total > 0.0) p.supporting.insert(s.pr->id);
        }
    }
    CandidateScores scores;
    for (auto& [reviewer, p] : parts) {
        CandidateScore c;
        c.reviewer = reviewer;
        c.lib_score = sorted_sum(p.lib);
        c.tech_score = sorted_sum(p.tech);
        c.total = sorted_sum(p.total);
        c.supporting_prs = std::move(p.supporting);
        scores.emplace(reviewer, std::move(c));
    }
    return scores;
}

std::vector<PrSimilarity> correct_similarities(const TokenBag& current, std::span<const WindowPr> window,
                                               double lib_weight, double tech_weight) {
    std::vector<PrSimilarity> sims;
    sims.reserve(window.size());
    for (const auto& w : window) {
        PrSimilarity s;
        s.pr = w.pr;
        s.lib = cosine_similarity(current.libraries(), w.bag.libraries());
        s.tech = cosine_similarity(current.technologies(), w.bag.technologies());
        s.total = lib_weight * s.lib + tech_weight * s.tech;
        sims.push_back(s);
    }
    return sims;
}

CandidateScores score_candidates(const TokenBag& current, std::span<const WindowPr> window, double lib_weight,
                                 double tech_weight) {
    auto sims = correct_similarities(current, window, lib_weight, tech_weight);
    return propagate(sims);
}

CandidateScores frequency_scores(std::span<const PullRequest> window) {
    CandidateScores scores;
    for (const auto& pr : window) {
        for (const auto& reviewer : ground_truth(pr)) {
            auto& c = scores[reviewer];
            c.reviewer = reviewer;
            c.total += 1.0;
            c.supporting_prs.insert(pr.id);
        }
    }
    return scores;
}

void normalize_scores(std::vector<RecommendationEntry>& entries) {
    double max_total = 0.0, max_lib = 0.0, max_tech = 0.0;
    for (const auto& e : entries) {
        max_total = std::max(max_total, e.total);
        max_lib = std::max(max_lib, e.lib_score);
        max_tech = std::max(max_tech, e.tech_score);
    }
    auto pct = [](double v, double max) {
        if (max <= 0.0) return 0;
        // The epsilon absorbs representation error at exact .5 boundaries.
        double scaled = std::floor(v / max * 100.0 + 0.5 + 1e-9);
        return static_cast<int>(std::clamp(scaled, 0.0, 100.0));
    };
    for (auto& e : entries) {
        e.total_pct = pct(e.total, max_total);
        e.lib_pct = pct(e.lib_score, max_lib);
        e.tech_pct = pct(e.tech_score, max_tech);
    }
}

std::vector<CandidateScore> order_candidates(const CandidateScores& scores, std::span<const PullRequest> window) {
    std::unordered_map<PrId, Timestamp> closed;
    for (const auto& pr : window) closed[pr.id] = pr.closed_at.value_or(std::numeric_limits<Timestamp>::min());

    struct Keyed {
        CandidateScore score;
        Timestamp latest;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(scores.size());
    for (const auto& [_, c] : scores) {
        Timestamp latest = std::numeric_limits<Timestamp>::min();
        for (const auto& id : c.supporting_prs) {
            if (auto it = closed.find(id); it != closed.end()) latest = std::max(latest, it->second);
        }
        keyed.push_back({c, latest});
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (tie_key(a.score.total) != tie_key(b.score.total))
            return tie_key(a.score.total) > tie_key(b.score.total);
        if (a.latest != b.latest) return a.latest > b.latest;
        return a.score.reviewer < b.score.reviewer;
    });
    std::vector<CandidateScore> out;
    out.reserve(keyed.size());
    for (auto& k : keyed) out.push_back(std::move(k.score));
    return out;
}

Recommendation rank_reviewers(const CandidateScores& scores, const Identity& requester,
                              std::span<const PullRequest> window, const Config& cfg) {
    Recommendation rec;
    rec.k = cfg.k;
    const auto limit = static_cast<std::size_t>(std::max(cfg.k, 0));

    CandidateScores eligible;
    for (const auto& [reviewer, c] : scores) {
        if (reviewer != requester && c.total > 0.0) eligible.emplace(reviewer, c);
    }

    if (eligible.empty()) {
        if (!cfg.fallback_enabled) return rec;
        auto counts = frequency_scores(window);
        counts.erase(requester);
        auto ordered = order_candidates(counts, window);
        if (ordered.size() > limit) ordered.resize(limit);
        rec.fallback = true;
        for (const auto& c : ordered) rec.entries.push_back({c.reviewer, 0, 0, 0, 0.0, 0.0, 0.0});
        return rec;
    }

    auto ordered = order_candidates(eligible, window);
    if (ordered.size() > limit) ordered.resize(limit);
    for (const auto& c : ordered) rec.entries.push_back({c.reviewer, 0, 0, 0, c.total, c.lib_score, c.tech_score});
    normalize_scores(rec.entries);
    return rec;
}

} // namespace reviewrank

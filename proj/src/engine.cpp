#include "reviewrank/engine.hpp"

#include <future>
#include <limits>

namespace reviewrank {

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::Correct: return "correct";
    case StrategyKind::Fps: return "fps";
    case StrategyKind::Frequency: return "frequency";
    }
    return "correct";
}

StrategyKind strategy_from_name(std::string_view name) {
    if (name == "correct") return StrategyKind::Correct;
    if (name == "fps") return StrategyKind::Fps;
    if (name == "frequency") return StrategyKind::Frequency;
    throw ValidationError("unknown strategy '" + std::string(name) + "' (expected correct, fps or frequency)");
}

Recommender::Recommender(const ProjectHistory& history, FileReader reader, ProjectModuleIndex index, Config cfg,
                         unsigned threads)
    : history_(history), reader_(std::move(reader)), index_(std::move(index)), cfg_(std::move(cfg)),
      threads_(std::max(1u, threads)) {
    cfg_.validate();
}

Timestamp Recommender::reference_for(const PullRequest& pr) const {
    if (const auto* known = history_.find(pr.id); known && known->closed() && known->closed_at)
        return *known->closed_at;
    return kNoReference;
}

std::vector<PullRequest> Recommender::window_for(const PullRequest& pr) const {
    return select_window(history_, reference_for(pr), cfg_.window_size, pr.id);
}

void Recommender::record(const std::vector<std::string>& warnings) const {
    if (warnings.empty()) return;
    std::lock_guard lock(warnings_mutex_);
    warnings_.insert(warnings_.end(), warnings.begin(), warnings.end());
}

std::vector<std::string> Recommender::warnings() const {
    std::lock_guard lock(warnings_mutex_);
    return warnings_;
}

PrTokens Recommender::compute_tokens(const PullRequest& pr) const {
    return tokenbag_of_pr(pr, reader_, index_, cfg_);
}

TokenBag Recommender::tokens_of(const PullRequest& pr) const {
    const auto* known = history_.find(pr.id);
    const bool cacheable = known && *known == pr;
    if (cacheable) {
        if (auto hit = cache_.get(pr.id)) return *hit;
    }
    auto computed = compute_tokens(pr);
    record(computed.warnings);
    if (cacheable) return cache_.put(pr.id, std::move(computed.bag));
    return computed.bag;
}

std::vector<TokenBag> Recommender::window_bags(std::span<const PullRequest> window) const {
    std::vector<TokenBag> bags(window.size());
    const std::size_t workers = std::min<std::size_t>(threads_, window.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < window.size(); ++i) bags[i] = tokens_of(window[i]);
        return bags;
    }
    std::vector<std::future<void>> jobs;
    for (std::size_t t = 0; t < workers; ++t) {
        jobs.push_back(std::async(std::launch::async, [&, t] {
            for (std::size_t i = t; i < window.size(); i += workers) bags[i] = tokens_of(window[i]);
        }));
    }
    for (auto& j : jobs) j.get();
    return bags;
}

CandidateScores Recommender::score(const PullRequest& pr, std::span<const PullRequest> window, StrategyKind kind,
                                   const Config& cfg) const {
    switch (kind) {
    case StrategyKind::Frequency: return frequency_scores(window);
    case StrategyKind::Fps: {
        std::vector<std::string> current;
        for (const auto& f : pr.changed_files) current.push_back(f.path);
        std::vector<PrSimilarity> sims;
        for (const auto& past : window) {
            std::vector<std::string> paths;
            for (const auto& f : past.changed_files) paths.push_back(f.path);
            double s = fps_similarity(current, paths);
            sims.push_back({&past, 0.0, 0.0, s});
        }
        return propagate(sims);
    }
    case StrategyKind::Correct: break;
    }
    auto current = tokens_of(pr);
    auto bags = window_bags(window);
    if (cfg.weighting == TokenWeighting::Binary) {
        current = current.binarized();
        for (auto& b : bags) b = b.binarized();
    }
    std::vector<WindowPr> scored;
    scored.reserve(window.size());
    for (std::size_t i = 0; i < window.size(); ++i) scored.push_back({&window[i], std::move(bags[i])});
    return score_candidates(current, scored, cfg.lib_weight, cfg.tech_weight);
}

Recommendation Recommender::recommend_in_window(const PullRequest& pr, std::span<const PullRequest> window,
                                                StrategyKind kind, const Config& cfg) const {
    cfg.validate();
    if (cfg.tech_lexicon != cfg_.tech_lexicon || cfg.stdlib_stoplists != cfg_.stdlib_stoplists ||
        cfg.languages_enabled != cfg_.languages_enabled || cfg.source_roots != cfg_.source_roots)
        throw ValidationError("tokenization settings are fixed for the lifetime of a recommender");
    auto scores = score(pr, window, kind, cfg);
    Recommendation rec = rank_reviewers(scores, pr.author, window, cfg);
    rec.generated_for = pr.id;
    rec.config_digest = cfg.digest();
    rec.strategy = std::string(to_string(kind));
    return rec;
}

Recommendation Recommender::recommend(const PullRequest& pr, StrategyKind kind) const {
    return recommend(pr, kind, cfg_);
}

Recommendation Recommender::recommend(const PullRequest& pr, StrategyKind kind, const Config& cfg) const {
    auto window = select_window(history_, reference_for(pr), cfg.window_size, pr.id);
    return recommend_in_window(pr, window, kind, cfg);
}

Strategy Recommender::strategy(StrategyKind kind) const {
    Config full = cfg_;
    full.k = std::numeric_limits<int>::max();
    return [this, kind, full](const PullRequest& pr, std::span<const PullRequest> window) {
        return recommend_in_window(pr, window, kind, full);
    };
}

Recommendation recommend(const PullRequest& pr, const ProjectHistory& history, const Config& cfg,
                         const FileReader& reader, const ProjectModuleIndex& index) {
    Recommender engine(history, reader, index, cfg);
    return engine.recommend(pr);
}

} // namespace reviewrank

#include "reviewrank/eval.hpp"

#include <algorithm>
#include <future>

namespace reviewrank {

namespace {

void check_shapes(std::span<const Ranking> rankings, std::span<const Truth> truths) {
    if (rankings.size() != truths.size()) throw MetricError("rankings and truths differ in length");
}

void check_k(int k) {
    if (k < 1) throw MetricError("K must be >= 1");
}

std::size_t hits_in_top(const Ranking& ranking, const Truth& truth, int k) {
    std::size_t n = std::min(ranking.size(), static_cast<std::size_t>(k));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += truth.count(ranking[i]);
    return hits;
}

std::vector<std::string> components(const std::string& path) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto end = path.find('/', start);
        if (end == std::string::npos) end = path.size();
        if (end > start) out.push_back(path.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

} // namespace

std::optional<double> top_k_accuracy(std::span<const Ranking> rankings, std::span<const Truth> truths, int k) {
    check_shapes(rankings, truths);
    check_k(k);
    if (rankings.empty()) return std::nullopt;
    std::size_t hit = 0;
    for (std::size_t i = 0; i < rankings.size(); ++i) hit += hits_in_top(rankings[i], truths[i], k) > 0 ? 1 : 0;
    return static_cast<double>(hit) / static_cast<double>(rankings.size());
}

std::size_t first_hit_rank(const Ranking& ranking, const Truth& truth) {
    for (std::size_t i = 0; i < ranking.size(); ++i)
        if (truth.count(ranking[i])) return i + 1;
    return 0;
}

std::optional<double> mean_reciprocal_rank(std::span<const Ranking> rankings, std::span<const Truth> truths) {
    check_shapes(rankings, truths);
    if (rankings.empty()) return std::nullopt;
    double sum = 0.0;
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        auto rank = first_hit_rank(rankings[i], truths[i]);
        if (rank) sum += 1.0 / static_cast<double>(rank);
    }
    return sum / static_cast<double>(rankings.size());
}

std::optional<double> mean_precision(std::span<const Ranking> rankings, std::span<const Truth> truths, int k) {
    check_shapes(rankings, truths);
    check_k(k);
    if (rankings.empty()) return std::nullopt;
    double sum = 0.0;
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        if (truths[i].empty()) throw MetricError("instance " + std::to_string(i) + " has empty ground truth");
        if (rankings[i].empty()) continue;
        auto denom = std::min(rankings[i].size(), static_cast<std::size_t>(k));
        sum += static_cast<double>(hits_in_top(rankings[i], truths[i], k)) / static_cast<double>(denom);
    }
    return sum / static_cast<double>(rankings.size());
}

std::optional<double> mean_recall(std::span<const Ranking> rankings, std::span<const Truth> truths, int k) {
    check_shapes(rankings, truths);
    check_k(k);
    if (rankings.empty()) return std::nullopt;
    double sum = 0.0;
    for (std::size_t i = 0; i < rankings.size(); ++i) {
        if (truths[i].empty()) throw MetricError("instance " + std::to_string(i) + " has empty ground truth");
        sum += static_cast<double>(hits_in_top(rankings[i], truths[i], k)) / static_cast<double>(truths[i].size());
    }
    return sum / static_cast<double>(rankings.size());
}

double fps_similarity(std::span<const std::string> files_a, std::span<const std::string> files_b) {
    if (files_a.empty() || files_b.empty()) return 0.0;
    std::vector<std::vector<std::string>> split_b;
    split_b.reserve(files_b.size());
    for (const auto& f : files_b) split_b.push_back(components(f));
    double sum = 0.0;
    for (const auto& fa : files_a) {
        auto ca = components(fa);
        for (const auto& cb : split_b) {
            auto longest = std::max(ca.size(), cb.size());
            if (longest == 0) continue;
            std::size_t common = 0;
            while (common < ca.size() && common < cb.size() && ca[common] == cb[common]) ++common;
            sum += static_cast<double>(common) / static_cast<double>(longest);
        }
    }
    return sum / static_cast<double>(files_a.size() * files_b.size());
}

std::vector<double> EvaluationReport::reciprocal_ranks() const {
    std::vector<double> out;
    out.reserve(instances.size());
    for (const auto& i : instances) out.push_back(i.reciprocal_rank());
    return out;
}

void aggregate_metrics(EvaluationReport& report, const std::vector<int>& k_values) {
    std::vector<Ranking> rankings;
    std::vector<Truth> truths;
    for (const auto& inst : report.instances) {
        rankings.push_back(inst.ranking);
        truths.push_back(inst.truth);
    }
    report.per_k.clear();
    for (int k : k_values) {
        report.per_k[k] = {top_k_accuracy(rankings, truths, k), mean_precision(rankings, truths, k),
                           mean_recall(rankings, truths, k)};
    }
    report.mrr = mean_reciprocal_rank(rankings, truths);
}

EvaluationReport retrospective_evaluate(const ProjectHistory& history, const std::string& strategy_name,
                                        const Strategy& strategy, const Config& cfg, const std::vector<int>& k_values,
                                        unsigned threads) {
    cfg.validate();
    for (int k : k_values) check_k(k);

    EvaluationReport report;
    report.strategy = strategy_name;
    report.window_size = cfg.window_size;

    struct Job {
        const PullRequest* pr;
        std::vector<PullRequest> window;
        Truth truth;
    };
    std::vector<Job> jobs;
    for (const auto& pr : history.prs()) {
        if (!pr.closed()) continue;
        ++report.replayed;
        auto window = select_window(history, *pr.closed_at, cfg.window_size, pr.id);
        auto truth = ground_truth(pr);
        if (window.empty()) {
            report.skipped.push_back({pr.id, kSkipEmptyWindow});
        } else if (truth.empty()) {
            report.skipped.push_back({pr.id, kSkipEmptyTruth});
        } else {
            jobs.push_back({&pr, std::move(window), std::move(truth)});
        }
    }

    std::vector<EvaluatedInstance> instances(jobs.size());
    auto run = [&](std::size_t i) {
        const auto& job = jobs[i];
        auto rec = strategy(*job.pr, job.window);
        auto& inst = instances[i];
        inst.pr = job.pr->id;
        inst.truth = job.truth;
        inst.ranking = rec.reviewers();
        inst.first_hit_rank = first_hit_rank(inst.ranking, inst.truth);
    };

    if (threads <= 1 || jobs.size() < 2) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run(i);
    } else {
        std::vector<std::future<void>> workers;
        const std::size_t n = std::min<std::size_t>(threads, jobs.size());
        for (std::size_t t = 0; t < n; ++t) {
            workers.push_back(std::async(std::launch::async, [&, t] {
                for (std::size_t i = t; i < jobs.size(); i += n) run(i);
            }));
        }
        for (auto& w : workers) w.get();
    }

    report.instances = std::move(instances);
    aggregate_metrics(report, k_values);
    return report;
}

} // namespace reviewrank

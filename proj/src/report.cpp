#include "reviewrank/report.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "reviewrank/stats.hpp"

namespace reviewrank {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json optional_number(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string pct_or_dash(const std::optional<double>& v) {
    return v ? fmt::format("{:.2f}%", *v * 100.0) : std::string("n/a");
}

} // namespace

std::string recommendation_to_json(const Recommendation& rec) {
    ordered_json j;
    j["generated_for"] = rec.generated_for;
    j["strategy"] = rec.strategy;
    j["k"] = rec.k;
    j["config_digest"] = rec.config_digest;
    j["fallback"] = rec.fallback;
    auto entries = ordered_json::array();
    int rank = 0;
    for (const auto& e : rec.entries) {
        ordered_json ej;
        ej["rank"] = ++rank;
        ej["reviewer"] = e.reviewer;
        ej["total_pct"] = e.total_pct;
        ej["lib_pct"] = e.lib_pct;
        ej["tech_pct"] = e.tech_pct;
        ej["total"] = e.total;
        ej["lib_score"] = e.lib_score;
        ej["tech_score"] = e.tech_score;
        entries.push_back(std::move(ej));
    }
    j["entries"] = std::move(entries);
    return j.dump(2) + "\n";
}

Recommendation recommendation_from_json(const std::string& text) {
    try {
        auto j = ordered_json::parse(text);
        Recommendation rec;
        rec.generated_for = j.at("generated_for").get<std::string>();
        rec.strategy = j.at("strategy").get<std::string>();
        rec.k = j.at("k").get<int>();
        rec.config_digest = j.at("config_digest").get<std::string>();
        rec.fallback = j.at("fallback").get<bool>();
        for (const auto& ej : j.at("entries")) {
            RecommendationEntry e;
            e.reviewer = ej.at("reviewer").get<std::string>();
            e.total_pct = ej.at("total_pct").get<int>();
            e.lib_pct = ej.at("lib_pct").get<int>();
            e.tech_pct = ej.at("tech_pct").get<int>();
            e.total = ej.at("total").get<double>();
            e.lib_score = ej.at("lib_score").get<double>();
            e.tech_score = ej.at("tech_score").get<double>();
            rec.entries.push_back(std::move(e));
        }
        return rec;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed recommendation document: ") + e.what());
    }
}

std::string render_recommendation_table(const Recommendation& rec) {
    std::size_t width = 8;
    for (const auto& e : rec.entries) width = std::max(width, e.reviewer.size());
    std::string out = fmt::format("Recommended reviewers for PR {} ({}, top {})\n", rec.generated_for, rec.strategy,
                                  rec.k);
    if (rec.entries.empty()) {
        out += "No reviewer could be recommended: the window holds no similar reviewed pull request.\n";
        return out;
    }
    if (rec.fallback) out += "Note: no similarity signal; ranked by review count in the window.\n";
    out += fmt::format("{:<4} {:<{}}  {:>11}  {:>13}  {:>16}\n", "#", "Reviewer", width, "Total Score",
                       "Library Score", "Technology Score");
    int rank = 0;
    for (const auto& e : rec.entries) {
        out += fmt::format("{:<4} {:<{}}  {:>11}  {:>13}  {:>16}\n", ++rank, e.reviewer, width,
                           fmt::format("{}%", e.total_pct), fmt::format("{}%", e.lib_pct),
                           fmt::format("{}%", e.tech_pct));
    }
    return out;
}

std::string evaluation_report_to_json(const EvaluationReport& report, std::size_t ranking_depth) {
    ordered_json j;
    j["strategy"] = report.strategy;
    j["window_size"] = report.window_size;
    j["replayed_prs"] = report.replayed;
    j["evaluated_prs"] = report.evaluated_prs();
    j["skipped_prs"] = report.skipped_prs();
    j["mrr"] = optional_number(report.mrr);
    auto per_k = ordered_json::array();
    for (const auto& [k, m] : report.per_k) {
        ordered_json kj;
        kj["k"] = k;
        kj["top_k_accuracy"] = optional_number(m.top_k_accuracy);
        kj["mean_precision"] = optional_number(m.mean_precision);
        kj["mean_recall"] = optional_number(m.mean_recall);
        per_k.push_back(std::move(kj));
    }
    j["per_k"] = std::move(per_k);
    auto skipped = ordered_json::array();
    for (const auto& s : report.skipped) skipped.push_back(ordered_json{{"pr", s.pr}, {"reason", s.reason}});
    j["skipped"] = std::move(skipped);
    auto instances = ordered_json::array();
    for (const auto& inst : report.instances) {
        ordered_json ij;
        ij["pr"] = inst.pr;
        ij["truth"] = inst.truth;
        auto depth = std::min(ranking_depth, inst.ranking.size());
        ij["ranking"] = std::vector<std::string>(inst.ranking.begin(), inst.ranking.begin() + static_cast<long>(depth));
        ij["first_hit_rank"] = inst.first_hit_rank;
        instances.push_back(std::move(ij));
    }
    j["instances"] = std::move(instances);
    return j.dump(2) + "\n";
}

std::string render_evaluation_table(const std::vector<EvaluationReport>& reports) {
    std::string out;
    for (const auto& r : reports) {
        out += fmt::format("Strategy {}: evaluated {} of {} closed PRs ({} skipped), MRR {}\n", r.strategy,
                           r.evaluated_prs(), r.replayed, r.skipped_prs(),
                           r.mrr ? fmt::format("{:.4f}", *r.mrr) : std::string("n/a"));
        out += fmt::format("  {:>3}  {:>14}  {:>14}  {:>11}\n", "K", "Top-K accuracy", "Mean precision",
                           "Mean recall");
        for (const auto& [k, m] : r.per_k) {
            out += fmt::format("  {:>3}  {:>14}  {:>14}  {:>11}\n", k, pct_or_dash(m.top_k_accuracy),
                               pct_or_dash(m.mean_precision), pct_or_dash(m.mean_recall));
        }
    }
    return out;
}

StrategyComparison compare_strategies(const EvaluationReport& a, const EvaluationReport& b) {
    StrategyComparison cmp;
    cmp.strategy_a = a.strategy;
    cmp.strategy_b = b.strategy;
    auto ra = a.reciprocal_ranks();
    auto rb = b.reciprocal_ranks();
    cmp.n_a = ra.size();
    cmp.n_b = rb.size();
    if (ra.empty() || rb.empty()) {
        cmp.notes.push_back("no evaluated pull requests to compare");
        return cmp;
    }
    auto mwu = stats::mann_whitney_u(ra, rb);
    cmp.u_a = mwu.u_a;
    cmp.u_b = mwu.u_b;
    cmp.p_value = mwu.p_value;
    cmp.exact = mwu.exact;
    try {
        cmp.cohens_d = stats::cohens_d(ra, rb);
    } catch (const stats::StatsError& e) {
        cmp.notes.push_back(std::string("cohens_d: ") + e.what());
    }
    try {
        cmp.glass_delta = stats::glass_delta(ra, rb);
    } catch (const stats::StatsError& e) {
        cmp.notes.push_back(std::string("glass_delta: ") + e.what());
    }
    return cmp;
}

std::string comparison_to_json(const StrategyComparison& cmp) {
    ordered_json j;
    j["a"] = cmp.strategy_a;
    j["b"] = cmp.strategy_b;
    j["sample"] = "reciprocal_rank";
    j["n_a"] = cmp.n_a;
    j["n_b"] = cmp.n_b;
    ordered_json mwu;
    mwu["u_a"] = optional_number(cmp.u_a);
    mwu["u_b"] = optional_number(cmp.u_b);
    mwu["p_value"] = optional_number(cmp.p_value);
    mwu["exact"] = cmp.exact;
    j["mann_whitney_u"] = std::move(mwu);
    j["cohens_d"] = optional_number(cmp.cohens_d);
    j["glass_delta"] = optional_number(cmp.glass_delta);
    j["notes"] = cmp.notes;
    return j.dump(2) + "\n";
}

std::string render_comparison(const StrategyComparison& cmp) {
    auto num = [](const std::optional<double>& v) {
        return v ? fmt::format("{:.4f}", *v) : std::string("n/a");
    };
    std::string out = fmt::format("Comparison {} vs {} over per-PR reciprocal rank (n={}, m={})\n", cmp.strategy_a,
                                  cmp.strategy_b, cmp.n_a, cmp.n_b);
    out += fmt::format("  Mann-Whitney U: U_a={} U_b={} p={} ({})\n", num(cmp.u_a), num(cmp.u_b), num(cmp.p_value),
                       cmp.exact ? "exact" : "normal approximation");
    out += fmt::format("  Cohen's d: {}   Glass's delta: {}\n", num(cmp.cohens_d), num(cmp.glass_delta));
    for (const auto& n : cmp.notes) out += "  note: " + n + "\n";
    return out;
}

std::string render_token_listing(const std::vector<TokenListing>& files, const TokenBag& bag) {
    std::string out;
    for (const auto& f : files) {
        out += fmt::format("{} ({})\n", f.source, to_string(f.language));
        for (const auto& note : f.notes) out += "  " + note + "\n";
        for (const auto& [ref, cls] : f.imports) {
            out += fmt::format("  {:<40} {:<10}", ref.path, to_string(cls.kind));
            if (!cls.matched.empty()) out += " [" + cls.matched + "]";
            out += "\n";
        }
    }
    if (bag.empty()) {
        out += "no tokens\n";
        return out;
    }
    out += "External libraries:\n";
    for (const auto& [t, c] : bag.libraries()) out += fmt::format("  {} x{}\n", t, c);
    if (bag.libraries().empty()) out += "  (none)\n";
    out += "Specialized technologies:\n";
    for (const auto& [t, c] : bag.technologies()) out += fmt::format("  {} x{}\n", t, c);
    if (bag.technologies().empty()) out += "  (none)\n";
    return out;
}

} // namespace reviewrank

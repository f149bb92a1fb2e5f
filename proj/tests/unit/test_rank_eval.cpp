#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "reviewrank/eval.hpp"
#include "reviewrank/rank.hpp"
#include "reviewrank/stats.hpp"

using namespace reviewrank;

namespace {

PullRequest reviewed(const std::string& id, Timestamp closed, std::set<Identity> reviewers) {
    PullRequest pr;
    pr.id = id;
    pr.author = "author-" + id;
    pr.created_at = closed - 1;
    pr.closed_at = closed;
    pr.state = PrState::Closed;
    pr.actual_reviewers = std::move(reviewers);
    return pr;
}

CandidateScore score(const std::string& r, double total, std::set<PrId> supporting = {}) {
    CandidateScore c;
    c.reviewer = r;
    c.total = total;
    c.lib_score = total;
    c.supporting_prs = std::move(supporting);
    return c;
}

} // namespace

TEST_CASE("cosine similarity examples") {
    CHECK(cosine_similarity({{"x", 1}, {"y", 1}}, {{"x", 1}, {"y", 1}}) == doctest::Approx(1.0));
    CHECK(cosine_similarity({{"x", 1}}, {{"y", 1}}) == 0.0);
    CHECK(cosine_similarity({{"x", 1}, {"y", 1}}, {{"y", 1}, {"z", 1}}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(static_cast<double>(oracle::cosine({{"x", 1}, {"y", 1}}, {{"y", 1}, {"z", 1}})) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cosine_similarity({}, {{"y", 1}}) == 0.0);
}

TEST_CASE("propagation accumulates per reviewer") {
    auto r1 = reviewed("R1", 10, {"A", "B"});
    auto r2 = reviewed("R2", 20, {"A"});
    std::vector<PrSimilarity> sims{{&r1, 0.6, 0.8, 1.4}, {&r2, 0.2, 0.4, 0.6}};
    auto scores = propagate(sims);
    CHECK(scores.at("A").lib_score == doctest::Approx(0.8));
    CHECK(scores.at("A").tech_score == doctest::Approx(1.2));
    CHECK(scores.at("A").total == doctest::Approx(2.0));
    CHECK(scores.at("B").lib_score == doctest::Approx(0.6));
    CHECK(scores.at("B").tech_score == doctest::Approx(0.8));
    CHECK(scores.at("B").total == doctest::Approx(1.4));
    CHECK(scores.at("A").supporting_prs == std::set<PrId>{"R1", "R2"});

    CHECK(score_candidates(TokenBag{}, {}).empty());
    TokenBag past;
    past.add_library("vapi");
    std::vector<WindowPr> window{{&r1, past}};
    for (const auto& [_, c] : score_candidates(TokenBag{}, window)) CHECK(c.total == 0.0);
}

TEST_CASE("ranking excludes the requester and truncates") {
    std::vector<PullRequest> window{reviewed("R1", 10, {"A", "B"})};
    CandidateScores scores{{"A", score("A", 2.0, {"R1"})}, {"B", score("B", 1.4, {"R1"})}};
    auto cfg = Config::defaults();
    CHECK(rank_reviewers(scores, "C", window, cfg).reviewers() == std::vector<Identity>{"A", "B"});
    CHECK(rank_reviewers(scores, "A", window, cfg).reviewers() == std::vector<Identity>{"B"});
    cfg.k = 1;
    CHECK(rank_reviewers(scores, "C", window, cfg).reviewers() == std::vector<Identity>{"A"});
}

TEST_CASE("ties break on recency then identity") {
    std::vector<PullRequest> window{reviewed("old", 10, {"A"}), reviewed("new", 20, {"B"})};
    CandidateScores scores{{"A", score("A", 1.0, {"old"})}, {"B", score("B", 1.0, {"new"})},
                           {"C", score("C", 1.0, {"new"})}};
    auto rec = rank_reviewers(scores, "x", window, Config::defaults());
    CHECK(rec.reviewers() == std::vector<Identity>{"B", "C", "A"});
}

TEST_CASE("fallback ranks by review count") {
    std::vector<PullRequest> window{reviewed("1", 10, {"B"}), reviewed("2", 20, {"B", "D"})};
    CandidateScores zero{{"B", score("B", 0.0)}, {"D", score("D", 0.0)}};
    auto cfg = Config::defaults();
    auto rec = rank_reviewers(zero, "x", window, cfg);
    CHECK(rec.fallback);
    CHECK(rec.reviewers() == std::vector<Identity>{"B", "D"});
    for (const auto& e : rec.entries) CHECK(e.total_pct == 0);
    cfg.fallback_enabled = false;
    CHECK(rank_reviewers(zero, "x", window, cfg).entries.empty());
}

TEST_CASE("percentages") {
    std::vector<RecommendationEntry> entries{{"A", 0, 0, 0, 2.0, 0.0, 1.0}, {"B", 0, 0, 0, 1.4, 0.0, 0.5}};
    normalize_scores(entries);
    CHECK(entries[0].total_pct == 100);
    CHECK(entries[1].total_pct == 70);
    CHECK(entries[0].lib_pct == 0);
    CHECK(entries[1].lib_pct == 0);
    CHECK(entries[1].tech_pct == 50);
    std::vector<RecommendationEntry> single{{"A", 0, 0, 0, 0.3, 0.3, 0.0}};
    normalize_scores(single);
    CHECK(single[0].total_pct == 100);
}

TEST_CASE("metric examples") {
    std::vector<Ranking> r{{"A", "B"}, {"C", "D"}};
    std::vector<Truth> t{{"A"}, {"E"}};
    CHECK(*top_k_accuracy(r, t, 2) == doctest::Approx(0.5));

    std::vector<Ranking> mr{{"A", "x"}, {"x", "B"}};
    std::vector<Truth> mt{{"A"}, {"B"}};
    CHECK(*mean_reciprocal_rank(mr, mt) == doctest::Approx(0.75));
    std::vector<Truth> none{{"Z"}, {"Z"}};
    CHECK(*mean_reciprocal_rank(mr, none) == 0.0);

    std::vector<Ranking> five{{"A", "B", "C", "D", "E"}};
    std::vector<Truth> af{{"A", "F"}};
    CHECK(*mean_precision(five, af, 5) == doctest::Approx(0.2));
    CHECK(*mean_recall(five, af, 5) == doctest::Approx(0.5));

    std::vector<Ranking> empty_rankings;
    std::vector<Truth> empty_truths;
    CHECK_FALSE(mean_reciprocal_rank(empty_rankings, empty_truths).has_value());
    std::vector<Truth> blank{{}};
    CHECK_THROWS_AS((void)mean_recall(five, blank, 5), MetricError);
    CHECK_THROWS_AS((void)top_k_accuracy(five, af, 0), MetricError);
}

TEST_CASE("perfect rankings score one") {
    std::vector<Ranking> r{{"A", "B"}, {"C"}};
    std::vector<Truth> t{{"A", "B"}, {"C"}};
    CHECK(*top_k_accuracy(r, t, 2) == 1.0);
    CHECK(*mean_reciprocal_rank(r, t) == 1.0);
    CHECK(*mean_recall(r, t, 2) == 1.0);
    CHECK(*mean_precision(r, t, 2) == 1.0);
}

TEST_CASE("path similarity") {
    std::vector<std::string> a{"src/app/main.py"}, b{"src/app/util.py"};
    CHECK(fps_similarity(a, b) == doctest::Approx(2.0 / 3.0));
    CHECK(fps_similarity(a, a) == 1.0);
    std::vector<std::string> x{"a/x.py"}, y{"b/y.py"};
    CHECK(fps_similarity(x, y) == 0.0);
    CHECK(fps_similarity({}, b) == 0.0);
    std::vector<std::string> many{"src/app/main.py", "docs/readme.md"}, other{"src/lib/x.py", "docs/a/b.md"};
    CHECK(fps_similarity(many, other) == doctest::Approx(oracle::fps(many, other)));
}

TEST_CASE("replay skips empty windows") {
    ProjectHistory one({reviewed("1", 10, {"A"})});
    Strategy never = [](const PullRequest&, std::span<const PullRequest>) -> Recommendation {
        FAIL("strategy must not run");
        return {};
    };
    auto report = retrospective_evaluate(one, "x", never, Config::defaults(), {1, 3, 5});
    CHECK(report.evaluated_prs() == 0);
    CHECK(report.skipped_prs() == 1);
    CHECK_FALSE(report.mrr.has_value());
    CHECK_FALSE(report.per_k.at(1).top_k_accuracy.has_value());
}

TEST_CASE("replaying the ground truth") {
    std::vector<PullRequest> prs;
    for (int i = 1; i <= 6; ++i) prs.push_back(reviewed(std::to_string(i), i * 10, {"A", "B"}));
    ProjectHistory h(prs);
    Strategy oracle_strategy = [](const PullRequest& pr, std::span<const PullRequest>) {
        Recommendation rec;
        for (const auto& r : ground_truth(pr)) rec.entries.push_back({r});
        return rec;
    };
    auto report = retrospective_evaluate(h, "truth", oracle_strategy, Config::defaults(), {1, 3, 5});
    CHECK(report.evaluated_prs() == 5);
    CHECK(*report.mrr == 1.0);
    CHECK(*report.per_k.at(1).top_k_accuracy == 1.0);
    CHECK(*report.per_k.at(5).mean_recall == 1.0);
    CHECK(*report.per_k.at(5).mean_precision == 1.0);
    CHECK(*report.per_k.at(1).mean_recall == doctest::Approx(0.5));
}

TEST_CASE("mann whitney examples") {
    std::vector<double> a{1, 2}, b{3, 4};
    auto r = stats::mann_whitney_u(a, b);
    CHECK(r.u_a == 0.0);
    CHECK(r.u_b == 4.0);
    CHECK(r.exact);
    CHECK(r.p_value == doctest::Approx(oracle::exact_p_enumerate(a, b)));

    std::vector<double> same{1, 2, 3};
    auto s = stats::mann_whitney_u(same, same);
    CHECK(s.u_a == 4.5);
    CHECK(s.p_value == doctest::Approx(1.0));

    std::vector<double> five{5}, one{1};
    CHECK(stats::mann_whitney_u(five, one).u_a == 1.0);
    CHECK_THROWS_AS(stats::mann_whitney_u({}, one), stats::StatsError);
}

TEST_CASE("exact oracles agree with each other") {
    std::vector<double> a{1, 1, 2, 5}, b{1, 3, 3, 4, 7};
    CHECK(oracle::exact_p_enumerate(a, b) == doctest::Approx(oracle::exact_p_rank_sum(a, b)).epsilon(1e-12));
}

TEST_CASE("large samples use the normal approximation") {
    std::vector<double> a, b;
    for (int i = 0; i < 30; ++i) {
        a.push_back(i);
        b.push_back(i + 10);
    }
    auto r = stats::mann_whitney_u(a, b);
    CHECK_FALSE(r.exact);
    CHECK(r.p_value == doctest::Approx(stats::mann_whitney_normal_p(a, b)));
    CHECK(r.p_value == doctest::Approx(oracle::exact_p_rank_sum(a, b)).epsilon(0.05));
}

TEST_CASE("effect sizes") {
    std::vector<double> a{1, 2, 3}, b{2, 3, 4};
    CHECK(std::fabs(stats::cohens_d(a, b) + 1.0) <= 1e-12);
    CHECK(std::fabs(stats::glass_delta(a, b) + 1.0) <= 1e-12);
    CHECK(stats::cohens_d(a, a) == 0.0);
    CHECK(stats::glass_delta(a, a) == 0.0);
    std::vector<double> flat{2, 2, 2};
    CHECK_THROWS_WITH_AS(stats::glass_delta(a, flat), "degenerate variance", stats::StatsError);
}

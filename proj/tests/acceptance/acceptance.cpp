// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any
// failure.
//
//   acceptance --fixture DIR --golden DIR --cli PATH

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <httplib.h>

#include "harness.hpp"
#include "reviewrank/git_repository.hpp"
#include "reviewrank/report.hpp"
#include "reviewrank/service.hpp"
#include "reviewrank/workspace.hpp"

namespace rr = reviewrank;
using Clock = std::chrono::steady_clock;

namespace {

struct Paths {
    std::string fixture;
    std::string golden;
    std::string cli;
};

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<missing " + path + ">";
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

rr::WorkspaceOptions fixture_options(const Paths& p) {
    rr::WorkspaceOptions opts;
    opts.repo_path = p.fixture + "/repo";
    opts.history_path = p.fixture + "/prs.ndjson";
    return opts;
}

Verdict oracle_equivalence() {
    Verdict v;
    auto start = Clock::now();
    auto out = harness::check_oracle_equivalence(250, 0x5eed0001);
    double took = seconds_since(start);
    v.require(out.ok(), out.first_failure);
    v.require(took < 10.0, fmt::format("took {:.2f}s", took));
    v.detail = v.pass ? fmt::format("{} histories, {:.2f}s", out.cases, took) : v.detail;
    return v;
}

Verdict extraction_fidelity(const Paths& p) {
    Verdict v;
    rr::Workspace ws(fixture_options(p));
    const auto* pr = ws.history().find("41");
    v.require(pr != nullptr, "fixture PR 41 missing");
    if (!pr) return v;
    auto bag = ws.engine().tokens_of(*pr);
    std::set<std::string> libs, techs;
    for (const auto& [t, _] : bag.libraries()) libs.insert(t);
    for (const auto& [t, _] : bag.technologies()) techs.insert(t);
    const std::set<std::string> want_libs{"vapi", "vtax", "vbcsdk", "vautil", "vbcsdk.keys", "vautil.validators.email"};
    const std::set<std::string> want_techs{"google.appengine.ext", "ndb", "search", "google.appengine.api.search"};
    auto join = [](const std::set<std::string>& s) {
        std::string out;
        for (const auto& x : s) out += (out.empty() ? "" : ",") + x;
        return out;
    };
    v.require(libs == want_libs, "libraries {" + join(libs) + "}");
    v.require(techs == want_techs, "technologies {" + join(techs) + "}");
    if (v.pass) v.detail = fmt::format("{} libraries, {} technologies", libs.size(), techs.size());
    return v;
}

Verdict invariants() {
    Verdict v;
    std::size_t checks = 0, cases = 0;
    for (const auto& out : harness::invariant_suite(1000, 0x5eed0003)) {
        ++checks;
        cases += out.cases;
        v.require(out.ok() && out.cases >= 1000, out.name + ": " + out.first_failure);
    }
    if (v.pass) v.detail = fmt::format("{} properties, {} cases", checks, cases);
    return v;
}

// Independent recomputation of the golden outputs from the fixture's token
// bags and ground truth.
std::string audit_against_oracle(const rr::Workspace& ws, rr::StrategyKind kind, const rr::Recommendation& golden,
                                 const rr::EvaluationReport& report) {
    std::vector<oracle::Pr> prs;
    for (const auto& pr : ws.history().prs()) {
        oracle::Pr o;
        o.id = pr.id;
        o.author = pr.author;
        o.created_at = pr.created_at;
        o.closed = pr.closed();
        o.closed_at = pr.closed_at.value_or(0);
        o.referenced = pr.referenced_reviewers;
        o.actual = pr.actual_reviewers;
        for (const auto& f : pr.changed_files) o.paths.push_back(f.path);
        auto bag = ws.engine().tokens_of(pr);
        for (const auto& [t, c] : bag.libraries()) o.libs[t] = c;
        for (const auto& [t, c] : bag.technologies()) o.techs[t] = c;
        prs.push_back(std::move(o));
    }
    const int w = ws.config().window_size;
    auto run = [&](const oracle::Pr& pr, std::int64_t reference, int k) {
        if (kind == rr::StrategyKind::Correct) return oracle::recommend(prs, pr, reference, w, k, true);
        if (kind == rr::StrategyKind::Fps) return oracle::recommend_fps(prs, pr, reference, w, k, true);
        // Review counts are the fallback ordering with every similarity zero.
        oracle::Pr blank = pr;
        blank.libs.clear();
        blank.techs.clear();
        auto r = oracle::recommend(prs, blank, reference, w, k, true);
        return r;
    };
    const auto& current = *std::find_if(prs.begin(), prs.end(), [](const oracle::Pr& o) { return o.id == "41"; });
    auto want = run(current, std::numeric_limits<std::int64_t>::max(), ws.config().k);
    if (kind == rr::StrategyKind::Frequency) {
        std::vector<std::string> names;
        for (const auto& e : want.entries) names.push_back(e.reviewer);
        if (names != golden.reviewers()) return "frequency ranking differs from oracle";
    } else if (!harness::same_result(want, golden, 1e-9)) {
        return "recommendation differs from oracle: " + harness::describe(want);
    }

    std::vector<std::vector<std::string>> rankings;
    std::vector<std::set<std::string>> truths;
    for (const auto& inst : report.instances) {
        const auto& pr = *std::find_if(prs.begin(), prs.end(), [&](const oracle::Pr& o) { return o.id == inst.pr; });
        auto r = run(pr, pr.closed_at, std::numeric_limits<int>::max());
        std::vector<std::string> names;
        for (const auto& e : r.entries) names.push_back(e.reviewer);
        if (names != inst.ranking) return "replayed ranking for PR " + inst.pr + " differs from oracle";
        rankings.push_back(names);
        truths.push_back(inst.truth);
    }
    auto close = [](std::optional<double> got, double want) { return got && std::fabs(*got - want) <= 1e-12; };
    if (!close(report.mrr, oracle::mrr(rankings, truths))) return "MRR differs from oracle";
    for (const auto& [k, m] : report.per_k) {
        if (!close(m.top_k_accuracy, oracle::top_k_accuracy(rankings, truths, k)) ||
            !close(m.mean_precision, oracle::precision(rankings, truths, k)) ||
            !close(m.mean_recall, oracle::recall(rankings, truths, k)))
            return fmt::format("metrics at K={} differ from oracle", k);
    }
    return {};
}

Verdict golden_end_to_end(const Paths& p) {
    Verdict v;
    auto start = Clock::now();
    rr::Workspace ws(fixture_options(p));
    std::map<std::string, double> top1;
    std::map<std::string, rr::EvaluationReport> reports;
    for (auto kind : {rr::StrategyKind::Correct, rr::StrategyKind::Fps, rr::StrategyKind::Frequency}) {
        std::string name(rr::to_string(kind));
        rr::RecommendRequest req;
        req.pr_id = "41";
        req.strategy = kind;
        auto doc = ws.recommend(req).document;
        v.require(doc == read_text(p.golden + "/recommend-41-" + name + ".json"), name + " recommendation differs");
        auto report = rr::retrospective_evaluate(ws.history(), name, ws.engine().strategy(kind), ws.config(), {1, 3, 5});
        v.require(rr::evaluation_report_to_json(report) == read_text(p.golden + "/evaluate-" + name + ".json"),
                  name + " evaluation report differs");
        top1[name] = report.per_k.at(1).top_k_accuracy.value_or(-1);
        reports[name] = std::move(report);
    }
    double took = seconds_since(start);
    for (auto kind : {rr::StrategyKind::Correct, rr::StrategyKind::Fps, rr::StrategyKind::Frequency}) {
        std::string name(rr::to_string(kind));
        auto golden = rr::recommendation_from_json(read_text(p.golden + "/recommend-41-" + name + ".json"));
        auto problem = audit_against_oracle(ws, kind, golden, reports[name]);
        v.require(problem.empty(), name + ": " + problem);
    }
    v.require(top1["correct"] > top1["fps"], fmt::format("Top-1 correct {} <= fps {}", top1["correct"], top1["fps"]));
    v.require(took <= 1.0, fmt::format("took {:.3f}s", took));
    if (v.pass)
        v.detail = fmt::format("Top-1 correct {:.4f} > fps {:.4f}, {:.3f}s", top1["correct"], top1["fps"], took);
    return v;
}

Verdict statistics_oracle() {
    Verdict v;
    auto out = harness::check_statistics(400, 0.02, 0x5eed0005);
    v.require(out.ok(), out.first_failure);
    if (v.pass) v.detail = fmt::format("{} sample pairs", out.cases);
    return v;
}

Verdict surface_parity(const Paths& p) {
    Verdict v;
    const std::string repo = p.fixture + "/repo", history = p.fixture + "/prs.ndjson";
    auto cli = rr::run_command({p.cli, "recommend", "--repo", repo, "--history", history, "--pr", "41", "--format",
                                "json"});
    v.require(cli.exit_code == 0, fmt::format("CLI exited {}", cli.exit_code));

    rr::Workspace ws(fixture_options(p));
    rr::RecommendationService service(ws);
    int port = service.bind("127.0.0.1", 0);
    v.require(port > 0, "could not bind a port");
    if (port <= 0) return v;
    std::thread server([&] { service.listen_after_bind(); });
    service.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto first = client.Post("/recommend", R"({"pr_id": "41"})", "application/json");
    auto second = client.Post("/recommend", R"({"pr_id": "41"})", "application/json");
    auto refreshed = client.Post("/recommend", R"({"pr_id": "41", "refresh": true})", "application/json");
    v.require(first && first->status == 200, "HTTP request failed");
    if (first) {
        v.require(first->body == cli.out, "HTTP body differs from CLI output");
        v.require(first->get_header_value("X-Config-Digest") == ws.config().digest(), "config digest header missing");
    }
    v.require(second && second->body == cli.out, "cached HTTP body differs");
    v.require(refreshed && refreshed->body == cli.out, "refreshed HTTP body differs");
    service.stop();
    server.join();

    // Cache transparency and refresh at the workspace level.
    rr::RecommendRequest req;
    req.pr_id = "41";
    auto hit = ws.recommend(req);
    v.require(hit.cache_hit, "second identical request was not a cache hit");
    rr::Workspace fresh_ws(fixture_options(p));
    auto fresh = fresh_ws.recommend(req);
    v.require(!fresh.cache_hit && hit.document == fresh.document, "cache hit differs from fresh computation");
    req.refresh = true;
    auto forced = ws.recommend(req);
    v.require(!forced.cache_hit, "refresh served from cache");

    // The on-disk cache behaves the same across processes.
    auto dir = std::filesystem::temp_directory_path() / fmt::format("reviewrank-accept-{}", ::getpid());
    std::filesystem::remove_all(dir);
    auto cached_run = [&] {
        return rr::run_command({p.cli, "recommend", "--repo", repo, "--history", history, "--pr", "41", "--format",
                                "json", "--cache-dir", dir.string()})
            .out;
    };
    auto disk_first = cached_run();
    auto disk_second = cached_run();
    v.require(disk_first == cli.out && disk_second == cli.out, "disk-cached CLI output differs");
    std::filesystem::remove_all(dir);
    if (v.pass) v.detail = "CLI, HTTP, cache hit and refresh identical";
    return v;
}

} // namespace

int main(int argc, char** argv) {
    Paths paths;
    CLI::App app{"Acceptance criteria runner"};
    app.add_option("--fixture", paths.fixture, "Fixture directory (repo/ and prs.ndjson)")->required();
    app.add_option("--golden", paths.golden, "Golden output directory")->required();
    app.add_option("--cli", paths.cli, "Path to the reviewrank executable")->required();
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"extraction fidelity", [&] { return extraction_fidelity(paths); }},
        {"invariant suite", invariants},
        {"golden end-to-end", [&] { return golden_end_to_end(paths); }},
        {"statistics oracle", statistics_oracle},
        {"surface parity", [&] { return surface_parity(paths); }},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        failed += v.pass ? 0 : 1;
        std::cout << fmt::format("[{}] {} {}: {}", index, v.pass ? "PASS" : "FAIL", name, v.detail) << std::endl;
    }
    std::cout << fmt::format("{}/{} criteria passed", criteria.size() - static_cast<std::size_t>(failed),
                             criteria.size())
              << std::endl;
    return failed == 0 ? 0 : 1;
}

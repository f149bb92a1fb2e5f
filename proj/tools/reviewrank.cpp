// reviewrank: recommend, evaluate, extract and serve from the command line.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "reviewrank/git_repository.hpp"
#include "reviewrank/report.hpp"
#include "reviewrank/service.hpp"
#include "reviewrank/workspace.hpp"

using namespace reviewrank;

namespace {

constexpr int kInputError = 2;

struct CommonOptions {
    std::string repo;
    std::string history;
    int window = 30;
    int k = 5;
    std::string tech_lexicon;
    std::vector<std::string> stoplists;
    bool no_fallback = false;
    bool binary = false;
    unsigned threads = 1;
};

void add_common(CLI::App& cmd, CommonOptions& o, bool history_required = true) {
    cmd.add_option("--repo", o.repo, "Local Git repository of the project")->required();
    auto* h = cmd.add_option("--history", o.history, "Newline-delimited PR metadata file");
    if (history_required) h->required();
    cmd.add_option("--window", o.window, "Number of past closed PRs considered")->check(CLI::PositiveNumber);
    cmd.add_option("--tech-lexicon", o.tech_lexicon, "Technology lexicon file (replaces the built-in lexicon)");
    cmd.add_option("--stoplist", o.stoplists, "LANG:FILE standard-library stoplist additions (python, java, ruby)");
    cmd.add_flag("--no-fallback", o.no_fallback, "Return nothing instead of review-count ranking without signal");
    cmd.add_flag("--binary", o.binary, "Weight tokens by presence rather than frequency");
    cmd.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
}

Config build_config(const CommonOptions& o) {
    Config cfg = Config::defaults();
    cfg.window_size = o.window;
    cfg.k = o.k;
    cfg.fallback_enabled = !o.no_fallback;
    cfg.weighting = o.binary ? TokenWeighting::Binary : TokenWeighting::Frequency;
    if (!o.tech_lexicon.empty()) cfg.tech_lexicon = load_pattern_file(o.tech_lexicon);
    for (const auto& spec : o.stoplists) {
        auto colon = spec.find(':');
        if (colon == std::string::npos) throw ValidationError("--stoplist expects LANG:FILE, got '" + spec + "'");
        auto lang = language_from_name(spec.substr(0, colon));
        auto words = load_pattern_file(spec.substr(colon + 1));
        cfg.stdlib_stoplists[lang].insert(words.begin(), words.end());
    }
    cfg.validate();
    return cfg;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int run_recommend(const CommonOptions& common, const std::string& pr, const std::vector<std::string>& files,
                  const std::string& author, const std::string& strategy, bool refresh, const std::string& out,
                  const std::string& format, const std::string& cache_dir) {
    WorkspaceOptions opts;
    opts.repo_path = common.repo;
    opts.history_path = common.history;
    opts.config = build_config(common);
    opts.threads = common.threads;
    if (!cache_dir.empty()) opts.cache_dir = cache_dir;
    Workspace ws(opts);

    RecommendRequest req;
    if (!pr.empty()) req.pr_id = pr;
    for (const auto& f : files) req.files.push_back(parse_file_spec(f));
    if (!author.empty()) req.author = author;
    req.strategy = strategy_from_name(strategy);
    req.refresh = refresh;

    auto result = ws.recommend(req);
    print_warnings(ws.engine().warnings());
    print_warnings(ws.cache().warnings());
    if (!out.empty()) write_file(out, result.document);
    if (format == "json") std::cout << result.document;
    else std::cout << render_recommendation_table(result.recommendation);
    if (result.recommendation.entries.empty())
        std::cerr << "notice: empty recommendation for PR " << result.recommendation.generated_for << "\n";
    return 0;
}

int run_evaluate(const CommonOptions& common, std::vector<std::string> strategies, std::vector<int> k_values,
                 const std::string& out_dir) {
    if (strategies.empty()) strategies = {"correct"};
    WorkspaceOptions opts;
    opts.repo_path = common.repo;
    opts.history_path = common.history;
    opts.config = build_config(common);
    opts.threads = common.threads;
    Workspace ws(opts);
    if (ws.history().empty()) {
        std::cerr << "error: history file " << common.history << " contains no pull requests\n";
        return kInputError;
    }

    std::vector<EvaluationReport> reports;
    for (const auto& name : strategies) {
        auto kind = strategy_from_name(name);
        reports.push_back(retrospective_evaluate(ws.history(), name, ws.engine().strategy(kind), ws.config(),
                                                 k_values, common.threads));
    }
    print_warnings(ws.engine().warnings());

    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    for (const auto& r : reports) {
        if (!out_dir.empty()) write_file(out_dir + "/" + r.strategy + ".json", evaluation_report_to_json(r));
    }
    std::cout << render_evaluation_table(reports);
    for (std::size_t i = 1; i < reports.size(); ++i) {
        auto cmp = compare_strategies(reports[0], reports[i]);
        std::cout << render_comparison(cmp);
        if (!out_dir.empty()) {
            auto name = reports.size() == 2 ? std::string("comparison.json")
                                            : "comparison-" + reports[0].strategy + "-" + reports[i].strategy + ".json";
            write_file(out_dir + "/" + name, comparison_to_json(cmp));
        }
    }
    return 0;
}

int run_extract(const CommonOptions& common, const std::string& pr_id, const std::vector<std::string>& files) {
    auto cfg = build_config(common);
    auto repo = GitRepository::open(common.repo);
    auto index = module_index_at(*repo, cfg);

    std::vector<std::pair<std::string, ContentRef>> targets;
    if (!pr_id.empty()) {
        if (common.history.empty()) throw ValidationError("--pr requires --history");
        auto history = load_history(common.history, common.repo);
        const auto* pr = history.find(pr_id);
        if (!pr) {
            std::cerr << "error: unknown pull request '" << pr_id << "'\n";
            return kInputError;
        }
        for (const auto& f : pr->changed_files) targets.emplace_back(f.path, f.content_ref);
    }
    for (const auto& f : files) {
        auto spec = parse_file_spec(f);
        auto commit = repo->resolve(spec.rev);
        if (!commit) throw ValidationError("unknown revision '" + spec.rev + "'");
        targets.emplace_back(spec.path, ContentRef{*commit, spec.path});
    }

    std::vector<TokenListing> listings;
    TokenBag bag;
    for (const auto& [path, ref] : targets) {
        TokenListing listing;
        listing.source = path + "@" + ref.commit.substr(0, 12);
        listing.language = language_from_path(path);
        if (listing.language == Language::Other || !cfg.languages_enabled.count(listing.language)) {
            listing.notes.push_back("skipped (unsupported language)");
            listings.push_back(std::move(listing));
            continue;
        }
        auto text = repo->read_file_at(ref.commit, ref.path);
        if (!text) {
            listing.notes.push_back("unreadable at this commit");
            listings.push_back(std::move(listing));
            continue;
        }
        auto scan = extract_imports(*text, listing.language);
        if (scan.warning) listing.notes.push_back(*scan.warning);
        for (const auto& ref_import : scan.imports)
            listing.imports.emplace_back(ref_import, classify_import(ref_import, index, cfg, listing.language));
        bag.merge(classify_tokens(scan.imports, index, cfg, listing.language));
        listings.push_back(std::move(listing));
    }
    std::cout << render_token_listing(listings, bag);
    return 0;
}

int run_serve(const CommonOptions& common, const std::string& addr_flag) {
    auto addr = resolve_bind_address(addr_flag);
    WorkspaceOptions opts;
    opts.repo_path = common.repo;
    opts.history_path = common.history;
    opts.config = build_config(common);
    opts.threads = common.threads;
    Workspace ws(opts);
    RecommendationService service(ws);
    int port = service.bind(addr.host, addr.port);
    if (port < 0) {
        std::cerr << "error: cannot bind " << addr.host << ":" << addr.port << "\n";
        return kInputError;
    }
    std::cerr << "serving " << ws.history().size() << " pull requests on http://" << addr.host << ":" << port << "\n";
    return service.listen_after_bind() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pull-request reviewer recommendation from library and technology experience"};
    app.require_subcommand(1);

    CommonOptions rec_opts, eval_opts, extract_opts, serve_opts;

    auto* rec = app.add_subcommand("recommend", "Rank reviewers for an existing or a new pull request");
    add_common(*rec, rec_opts);
    std::string pr, author, strategy = "correct", out, format = "table", cache_dir;
    std::vector<std::string> files;
    bool refresh = false;
    auto* pr_opt = rec->add_option("--pr", pr, "Existing pull request id");
    auto* files_opt = rec->add_option("--files", files, "Changed files of a new pull request (path[@rev])");
    auto* author_opt = rec->add_option("--author", author, "Author of the new pull request");
    pr_opt->excludes(files_opt);
    files_opt->needs(author_opt);
    rec->add_option("--k", rec_opts.k, "Number of reviewers to recommend")->check(CLI::PositiveNumber);
    rec->add_option("--strategy", strategy, "correct, fps or frequency")
        ->check(CLI::IsMember({"correct", "fps", "frequency"}));
    rec->add_flag("--refresh", refresh, "Recompute even when a cached result exists");
    rec->add_option("--out", out, "Also write the machine-readable recommendation to this file");
    rec->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));
    rec->add_option("--cache-dir", cache_dir, "Persist recommendations in this directory");

    auto* ev = app.add_subcommand("evaluate", "Replay the history and score recommendation strategies");
    add_common(*ev, eval_opts);
    std::vector<std::string> strategies;
    std::vector<int> k_values{1, 3, 5};
    std::string eval_out;
    ev->add_option("--strategy", strategies, "Strategies to evaluate (repeatable)")
        ->check(CLI::IsMember({"correct", "fps", "frequency"}));
    ev->add_option("--k-values", k_values, "Cut-offs for top-K metrics")->delimiter(',');
    ev->add_option("--out", eval_out, "Directory for report files");

    auto* ex = app.add_subcommand("extract", "List the library and technology tokens of a PR or file");
    add_common(*ex, extract_opts, false);
    std::string ex_pr;
    std::vector<std::string> ex_files;
    ex->add_option("--pr", ex_pr, "Pull request id (requires --history)");
    ex->add_option("--file", ex_files, "File to scan (path[@rev])");

    auto* sv = app.add_subcommand("serve", "Run the HTTP recommendation service");
    add_common(*sv, serve_opts);
    std::string serve_addr;
    sv->add_option("--serve-addr", serve_addr, std::string("host:port (env ") + kServeAddrEnv + ")");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kInputError;
    }

    try {
        if (*rec) {
            if (pr.empty() && files.empty()) {
                std::cerr << "error: recommend needs --pr or --files with --author\n";
                return kInputError;
            }
            return run_recommend(rec_opts, pr, files, author, strategy, refresh, out, format, cache_dir);
        }
        if (*ev) return run_evaluate(eval_opts, strategies, k_values, eval_out);
        if (*ex) {
            if (ex_pr.empty() && ex_files.empty()) {
                std::cerr << "error: extract needs --pr or --file\n";
                return kInputError;
            }
            return run_extract(extract_opts, ex_pr, ex_files);
        }
        if (*sv) return run_serve(serve_opts, serve_addr);
    } catch (const RequestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const HistoryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const RepositoryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

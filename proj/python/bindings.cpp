// Python bindings for the reviewrank core library.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "reviewrank/extract.hpp"
#include "reviewrank/rank.hpp"
#include "reviewrank/report.hpp"
#include "reviewrank/stats.hpp"
#include "reviewrank/workspace.hpp"

namespace py = pybind11;
using namespace reviewrank;

namespace {

Config config_with(std::optional<std::vector<std::string>> lexicon) {
    auto cfg = Config::defaults();
    if (lexicon) cfg.tech_lexicon = {lexicon->begin(), lexicon->end()};
    return cfg;
}

TokenCounts to_counts(const std::map<std::string, std::uint32_t>& m) { return {m.begin(), m.end()}; }

WorkspaceOptions workspace_options(const std::string& repo, const std::string& history, std::optional<int> window,
                                   std::optional<int> k) {
    WorkspaceOptions opts;
    opts.repo_path = repo;
    opts.history_path = history;
    if (window) opts.config.window_size = *window;
    if (k) opts.config.k = *k;
    return opts;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Code-reviewer recommendation from shared libraries and technologies";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<HistoryError>(m, "HistoryError", PyExc_ValueError);
    py::register_exception<RepositoryError>(m, "RepositoryError", PyExc_OSError);
    py::register_exception<MetricError>(m, "MetricError", PyExc_ValueError);
    py::register_exception<stats::StatsError>(m, "StatsError", PyExc_ValueError);
    py::register_exception<RequestError>(m, "RequestError", PyExc_LookupError);

    m.def(
        "extract_imports",
        [](const std::string& source, const std::string& language) {
            auto scan = extract_imports(source, language_from_name(language));
            std::vector<std::pair<std::string, bool>> out;
            for (const auto& ref : scan.imports) out.emplace_back(ref.path, ref.internal);
            return out;
        },
        py::arg("source"), py::arg("language"), "Imported module paths as (path, internal) pairs.");

    m.def(
        "classify",
        [](const std::vector<std::string>& imports, const std::string& language,
           std::optional<std::vector<std::string>> lexicon, std::vector<std::string> project_modules) {
            std::vector<ImportRef> refs;
            for (const auto& p : imports) refs.push_back({p, false});
            ProjectModuleIndex index{{project_modules.begin(), project_modules.end()}};
            auto bag = classify_tokens(refs, index, config_with(lexicon), language_from_name(language));
            py::dict out;
            out["libraries"] = std::map<std::string, std::uint32_t>(bag.libraries().begin(), bag.libraries().end());
            out["technologies"] =
                std::map<std::string, std::uint32_t>(bag.technologies().begin(), bag.technologies().end());
            return out;
        },
        py::arg("imports"), py::arg("language") = "python", py::arg("lexicon") = py::none(),
        py::arg("project_modules") = std::vector<std::string>{},
        "Split import paths into library and technology token counts.");

    m.def(
        "cosine_similarity",
        [](const std::map<std::string, std::uint32_t>& a, const std::map<std::string, std::uint32_t>& b) {
            return cosine_similarity(to_counts(a), to_counts(b));
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "fps_similarity",
        [](const std::vector<std::string>& a, const std::vector<std::string>& b) { return fps_similarity(a, b); },
        py::arg("files_a"), py::arg("files_b"));

    using Rankings = std::vector<Ranking>;
    using Truths = std::vector<Truth>;
    m.def("top_k_accuracy", [](const Rankings& r, const Truths& t, int k) { return top_k_accuracy(r, t, k); },
          py::arg("rankings"), py::arg("truths"), py::arg("k"));
    m.def("mean_reciprocal_rank", [](const Rankings& r, const Truths& t) { return mean_reciprocal_rank(r, t); },
          py::arg("rankings"), py::arg("truths"));
    m.def("mean_precision", [](const Rankings& r, const Truths& t, int k) { return mean_precision(r, t, k); },
          py::arg("rankings"), py::arg("truths"), py::arg("k"));
    m.def("mean_recall", [](const Rankings& r, const Truths& t, int k) { return mean_recall(r, t, k); },
          py::arg("rankings"), py::arg("truths"), py::arg("k"));

    m.def(
        "mann_whitney_u",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            auto r = stats::mann_whitney_u(a, b);
            py::dict out;
            out["u_a"] = r.u_a;
            out["u_b"] = r.u_b;
            out["p_value"] = r.p_value;
            out["exact"] = r.exact;
            return out;
        },
        py::arg("a"), py::arg("b"));
    m.def("cohens_d", [](const std::vector<double>& a, const std::vector<double>& b) { return stats::cohens_d(a, b); },
          py::arg("a"), py::arg("b"));
    m.def("glass_delta",
          [](const std::vector<double>& a, const std::vector<double>& b) { return stats::glass_delta(a, b); },
          py::arg("a"), py::arg("b"));

    m.def(
        "canonical_history",
        [](const std::string& text) {
            std::istringstream in(text);
            return serialize_history(parse_history(in));
        },
        py::arg("text"), "Parse PR metadata lines and return them in canonical form.");

    m.def(
        "recommend",
        [](const std::string& repo, const std::string& history, std::optional<std::string> pr_id,
           std::vector<std::string> files, std::optional<std::string> author, std::optional<int> k,
           std::optional<int> window, const std::string& strategy) {
            Workspace ws(workspace_options(repo, history, window, k));
            RecommendRequest req;
            req.pr_id = pr_id;
            for (const auto& f : files) req.files.push_back(parse_file_spec(f));
            req.author = author;
            req.strategy = strategy_from_name(strategy);
            py::gil_scoped_release release;
            return ws.recommend(req).document;
        },
        py::arg("repo"), py::arg("history"), py::arg("pr_id") = py::none(),
        py::arg("files") = std::vector<std::string>{}, py::arg("author") = py::none(), py::arg("k") = py::none(),
        py::arg("window") = py::none(), py::arg("strategy") = "correct",
        "Recommendation document (JSON text) for a history PR or a new change.");

    m.def(
        "evaluate",
        [](const std::string& repo, const std::string& history, const std::string& strategy,
           std::vector<int> k_values, std::optional<int> window, unsigned threads) {
            Workspace ws(workspace_options(repo, history, window, std::nullopt));
            auto kind = strategy_from_name(strategy);
            py::gil_scoped_release release;
            auto report = retrospective_evaluate(ws.history(), std::string(to_string(kind)), ws.engine().strategy(kind),
                                                 ws.config(), k_values, threads);
            return evaluation_report_to_json(report);
        },
        py::arg("repo"), py::arg("history"), py::arg("strategy") = "correct",
        py::arg("k_values") = std::vector<int>{1, 3, 5}, py::arg("window") = py::none(), py::arg("threads") = 1,
        "Retrospective evaluation report (JSON text).");
}

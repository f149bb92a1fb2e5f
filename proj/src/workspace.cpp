#include "reviewrank/workspace.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "reviewrank/digest.hpp"
#include "reviewrank/report.hpp"

namespace reviewrank {

FileSpec parse_file_spec(const std::string& text) {
    FileSpec spec;
    auto at = text.rfind('@');
    if (at == std::string::npos || at == 0 || at + 1 == text.size()) {
        spec.path = text;
    } else {
        spec.path = text.substr(0, at);
        spec.rev = text.substr(at + 1);
    }
    return spec;
}

FileReader git_file_reader(std::shared_ptr<const GitRepository> repo) {
    return [repo = std::move(repo)](const ContentRef& ref) { return repo->read_file_at(ref.commit, ref.path); };
}

ProjectModuleIndex module_index_at(const GitRepository& repo, const Config& cfg, const std::string& rev) {
    if (!repo.resolve(rev)) return {};
    return build_project_module_index(repo.list_files(rev), cfg.source_roots);
}

Workspace::Workspace(const WorkspaceOptions& options)
    : cache_(options.cache_capacity,
             options.cache_dir ? std::optional<std::filesystem::path>(*options.cache_dir) : std::nullopt) {
    options.config.validate();
    history_ = std::make_unique<ProjectHistory>(load_history(options.history_path, options.repo_path));
    repo_ = GitRepository::open(options.repo_path);
    head_commit_ = repo_->resolve("HEAD").value_or("none");

    std::ifstream meta(options.history_path, std::ios::binary);
    std::ostringstream meta_text;
    meta_text << meta.rdbuf();
    std::error_code ec;
    auto canonical = std::filesystem::weakly_canonical(options.repo_path, ec);
    repo_digest_ = hex_digest((ec ? options.repo_path : canonical.string()) + '\x1f' + hex_digest(meta_text.str()));

    auto index = module_index_at(*repo_, options.config);
    engine_ = std::make_unique<Recommender>(*history_, git_file_reader(repo_), std::move(index), options.config,
                                            options.threads);
}

PullRequest Workspace::resolve_request(const RecommendRequest& request) const {
    if (request.pr_id && !request.files.empty())
        throw RequestError(400, "pr_id", "give either pr_id or changed_files, not both");
    if (request.pr_id) {
        const auto* pr = history_->find(*request.pr_id);
        if (!pr) throw RequestError(404, "pr_id", "unknown pull request '" + *request.pr_id + "'");
        return *pr;
    }
    if (request.files.empty())
        throw RequestError(400, "pr_id", "either pr_id or changed_files with author is required");
    if (!request.author || request.author->empty())
        throw RequestError(400, "author", "author is required with changed_files");

    PullRequest pr;
    pr.id = "new";
    pr.author = *request.author;
    pr.created_at = 0;
    pr.state = PrState::Open;
    for (const auto& f : request.files) {
        try {
            validate_repo_path(f.path);
        } catch (const ValidationError& e) {
            throw RequestError(400, "changed_files", e.what());
        }
        auto commit = repo_->resolve(f.rev);
        if (!commit) throw RequestError(400, "changed_files", "unknown revision '" + f.rev + "' for " + f.path);
        for (const auto& existing : pr.changed_files)
            if (existing.path == f.path) throw RequestError(400, "changed_files", "duplicate path " + f.path);
        pr.changed_files.emplace_back(f.path, *commit);
    }
    return pr;
}

CacheKey Workspace::cache_key(const RecommendRequest& request, const PullRequest& pr, const Config& cfg) const {
    std::string req = std::string(to_string(request.strategy)) + ";author=" + pr.author + ";pr=" + pr.id;
    if (!request.pr_id) {
        for (const auto& f : pr.changed_files) req += ";file=" + f.path + "@" + f.content_ref.commit;
    }
    return {repo_digest_, head_commit_, cfg.digest(), req};
}

RecommendResult Workspace::recommend(const RecommendRequest& request) {
    Config cfg = engine_->config();
    if (request.k) {
        if (*request.k < 1) throw RequestError(400, "k", "k must be a positive integer");
        cfg.k = *request.k;
    }
    if (request.window) {
        if (*request.window < 1) throw RequestError(400, "window", "window must be a positive integer");
        cfg.window_size = *request.window;
    }
    auto pr = resolve_request(request);
    auto key = cache_key(request, pr, cfg);

    if (request.refresh) {
        cache_.invalidate(key);
    } else if (auto hit = cache_.get(key)) {
        return {recommendation_from_json(*hit), *hit, true};
    }
    RecommendResult result;
    result.recommendation = engine_->recommend(pr, request.strategy, cfg);
    result.document = recommendation_to_json(result.recommendation);
    cache_.put(key, result.document);
    return result;
}

} // namespace reviewrank

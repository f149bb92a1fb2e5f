#include "reviewrank/history.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reviewrank/git_repository.hpp"

namespace reviewrank {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

bool is_commit_id(const std::string& s) {
    return s.size() == 40 &&
           std::all_of(s.begin(), s.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

struct RecordParser {
    const json& record;
    std::size_t index;

    [[noreturn]] void fail(const std::string& field, const std::string& what) const {
        std::string id;
        if (record.is_object() && record.contains("id")) {
            const auto& v = record["id"];
            id = v.is_string() ? v.get<std::string>() : v.dump();
        }
        throw HistoryError("record " + std::to_string(index) + (id.empty() ? "" : " (PR " + id + ")") +
                           ": field '" + field + "': " + what);
    }

    const json& require(const char* field) const {
        if (!record.contains(field)) fail(field, "missing");
        return record[field];
    }

    std::string id_like(const char* field, const json& v) const {
        if (v.is_string() && !v.get<std::string>().empty()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        fail(field, "expected a non-empty string or integer");
    }

    std::string string_field(const char* field, const json& v) const {
        if (!v.is_string() || v.get<std::string>().empty()) fail(field, "expected a non-empty string");
        return v.get<std::string>();
    }

    Timestamp timestamp(const char* field, const json& v) const {
        if (v.is_number_integer()) return v.get<Timestamp>();
        if (v.is_string()) {
            if (auto t = parse_iso8601(v.get<std::string>())) return *t;
        }
        fail(field, "expected epoch seconds or an ISO-8601 UTC timestamp");
    }

    std::set<Identity> identities(const char* field) const {
        std::set<Identity> out;
        if (!record.contains(field) || record[field].is_null()) return out;
        const auto& v = record[field];
        if (!v.is_array()) fail(field, "expected an array");
        for (const auto& e : v) out.insert(string_field(field, e));
        return out;
    }

    PullRequest parse() const {
        if (!record.is_object()) fail("<record>", "expected an object");
        PullRequest pr;
        pr.id = id_like("id", require("id"));
        pr.author = string_field("author", require("author"));
        pr.created_at = timestamp("created_at", require("created_at"));
        if (record.contains("closed_at") && !record["closed_at"].is_null())
            pr.closed_at = timestamp("closed_at", record["closed_at"]);
        const auto& state = require("state");
        if (!state.is_string()) fail("state", "expected \"OPEN\" or \"CLOSED\"");
        try {
            pr.state = state_from_name(state.get<std::string>());
        } catch (const ValidationError& e) {
            fail("state", e.what());
        }
        if (record.contains("commits")) {
            const auto& commits = record["commits"];
            if (!commits.is_array()) fail("commits", "expected an array");
            for (const auto& c : commits) {
                auto id = string_field("commits", c);
                if (!is_commit_id(id)) fail("commits", "'" + id + "' is not a 40-hex commit id");
                pr.commits.push_back(id);
            }
        }
        if (record.contains("changed_files")) {
            const auto& files = record["changed_files"];
            if (!files.is_array()) fail("changed_files", "expected an array");
            for (const auto& f : files) {
                if (!f.is_object()) fail("changed_files", "expected objects");
                if (!f.contains("path")) fail("changed_files.path", "missing");
                auto path = string_field("changed_files.path", f["path"]);
                std::string commit;
                if (f.contains("commit")) {
                    commit = string_field("changed_files.commit", f["commit"]);
                } else if (!pr.commits.empty()) {
                    commit = pr.commits.back();
                } else {
                    fail("changed_files.commit", "missing and the PR lists no commits");
                }
                if (!is_commit_id(commit)) fail("changed_files.commit", "'" + commit + "' is not a 40-hex commit id");
                Language lang = language_from_path(path);
                if (f.contains("language") && !f["language"].is_null()) {
                    try {
                        lang = language_from_name(string_field("changed_files.language", f["language"]));
                    } catch (const ValidationError& e) {
                        fail("changed_files.language", e.what());
                    }
                }
                pr.changed_files.emplace_back(path, lang, commit);
            }
        }
        pr.referenced_reviewers = identities("referenced_reviewers");
        pr.actual_reviewers = identities("actual_reviewers");
        try {
            pr.validate();
        } catch (const ValidationError& e) {
            throw HistoryError("record " + std::to_string(index) + ": " + e.what());
        }
        return pr;
    }
};

} // namespace

ProjectHistory::ProjectHistory(std::vector<PullRequest> prs, std::string repo_path)
    : prs_(std::move(prs)), repo_path_(std::move(repo_path)) {
    for (const auto& pr : prs_) pr.validate();
    std::sort(prs_.begin(), prs_.end(), [](const PullRequest& a, const PullRequest& b) {
        return std::tie(a.created_at, a.id) < std::tie(b.created_at, b.id);
    });
    for (std::size_t i = 0; i < prs_.size(); ++i) {
        if (!by_id_.emplace(prs_[i].id, i).second)
            throw ValidationError("PR " + prs_[i].id + ": field 'id': duplicate id");
    }
}

const PullRequest* ProjectHistory::find(const PrId& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &prs_[it->second];
}

std::optional<Timestamp> parse_iso8601(const std::string& text) {
    std::tm tm{};
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &tm.tm_year, &tm.tm_mon, &tm.tm_mday, &tm.tm_hour,
                    &tm.tm_min, &tm.tm_sec, &consumed) != 6)
        return std::nullopt;
    auto rest = text.substr(static_cast<std::size_t>(consumed));
    if (rest != "Z" && rest != "+00:00" && !rest.empty()) return std::nullopt;
    if (tm.tm_mon < 1 || tm.tm_mon > 12 || tm.tm_mday < 1 || tm.tm_mday > 31 || tm.tm_hour > 23 ||
        tm.tm_min > 59 || tm.tm_sec > 60)
        return std::nullopt;
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    return static_cast<Timestamp>(timegm(&tm));
}

ProjectHistory parse_history(std::istream& in, const std::string& repo_path) {
    std::vector<PullRequest> prs;
    std::string line;
    std::size_t index = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw HistoryError("record " + std::to_string(index) + ": field '<record>': not valid JSON (" +
                               e.what() + ")");
        }
        prs.push_back(RecordParser{record, index}.parse());
        ++index;
    }
    try {
        return ProjectHistory(std::move(prs), repo_path);
    } catch (const ValidationError& e) {
        throw HistoryError(e.what());
    }
}

ProjectHistory load_history(const std::string& metadata_path, const std::string& repo_path) {
    std::ifstream in(metadata_path, std::ios::binary);
    if (!in) throw HistoryError("cannot open metadata file " + metadata_path);
    auto history = parse_history(in, repo_path);
    if (!GitRepository::is_repository(repo_path)) throw RepositoryError("repository snapshot unavailable: " + repo_path);
    return history;
}

std::string serialize_pr(const PullRequest& pr) {
    ordered_json j;
    j["id"] = pr.id;
    j["author"] = pr.author;
    j["created_at"] = pr.created_at;
    j["closed_at"] = pr.closed_at ? ordered_json(*pr.closed_at) : ordered_json(nullptr);
    j["state"] = std::string(to_string(pr.state));
    j["commits"] = pr.commits;
    auto files = ordered_json::array();
    for (const auto& f : pr.changed_files) {
        ordered_json fj;
        fj["path"] = f.path;
        fj["language"] = std::string(to_string(f.language));
        fj["commit"] = f.content_ref.commit;
        files.push_back(std::move(fj));
    }
    j["changed_files"] = std::move(files);
    j["referenced_reviewers"] = pr.referenced_reviewers;
    j["actual_reviewers"] = pr.actual_reviewers;
    return j.dump();
}

std::string serialize_history(const ProjectHistory& history) {
    std::string out;
    for (const auto& pr : history.prs()) {
        out += serialize_pr(pr);
        out += '\n';
    }
    return out;
}

std::vector<PullRequest> select_window(const ProjectHistory& history, Timestamp reference, int w,
                                       const std::optional<PrId>& exclude) {
    if (w < 1) throw ValidationError("window size must be >= 1");
    std::vector<const PullRequest*> eligible;
    for (const auto& pr : history.prs()) {
        if (!pr.closed() || !pr.closed_at || *pr.closed_at >= reference) continue;
        if (exclude && pr.id == *exclude) continue;
        eligible.push_back(&pr);
    }
    std::sort(eligible.begin(), eligible.end(), [](const PullRequest* a, const PullRequest* b) {
        return std::tie(*a->closed_at, a->id) > std::tie(*b->closed_at, b->id);
    });
    if (eligible.size() > static_cast<std::size_t>(w)) eligible.resize(static_cast<std::size_t>(w));
    std::vector<PullRequest> window;
    window.reserve(eligible.size());
    for (const auto* pr : eligible) window.push_back(*pr);
    return window;
}

std::optional<TokenBag> TokenCache::get(const PrId& id) const {
    std::lock_guard lock(mutex_);
    auto it = bags_.find(id);
    if (it == bags_.end()) return std::nullopt;
    return it->second;
}

TokenBag TokenCache::put(const PrId& id, TokenBag bag) {
    std::lock_guard lock(mutex_);
    return bags_.emplace(id, std::move(bag)).first->second;
}

std::size_t TokenCache::size() const {
    std::lock_guard lock(mutex_);
    return bags_.size();
}

} // namespace reviewrank

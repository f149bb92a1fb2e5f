#include "reviewrank/model.hpp"

#include <algorithm>
#include <sstream>

#include "reviewrank/digest.hpp"

namespace reviewrank {

std::string_view to_string(Language lang) {
    switch (lang) {
    case Language::Python: return "Python";
    case Language::Java: return "Java";
    case Language::Ruby: return "Ruby";
    case Language::Other: return "Other";
    }
    return "Other";
}

Language language_from_name(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "python") return Language::Python;
    if (lower == "java") return Language::Java;
    if (lower == "ruby") return Language::Ruby;
    if (lower == "other") return Language::Other;
    throw ValidationError("unknown language '" + std::string(name) + "'");
}

Language language_from_path(std::string_view path) {
    auto dot = path.rfind('.');
    auto slash = path.rfind('/');
    if (dot == std::string_view::npos || (slash != std::string_view::npos && dot < slash))
        return Language::Other;
    auto ext = path.substr(dot);
    if (ext == ".py") return Language::Python;
    if (ext == ".java") return Language::Java;
    if (ext == ".rb") return Language::Ruby;
    return Language::Other;
}

std::string_view to_string(PrState state) {
    return state == PrState::Closed ? "CLOSED" : "OPEN";
}

PrState state_from_name(std::string_view name) {
    if (name == "CLOSED" || name == "closed") return PrState::Closed;
    if (name == "OPEN" || name == "open") return PrState::Open;
    throw ValidationError("unknown state '" + std::string(name) + "'");
}

void validate_repo_path(std::string_view path) {
    if (path.empty()) throw ValidationError("empty path");
    if (path.front() == '/') throw ValidationError("path '" + std::string(path) + "' has a leading slash");
    if (path.find('\\') != std::string_view::npos)
        throw ValidationError("path '" + std::string(path) + "' uses backslash separators");
}

ChangedFile::ChangedFile(std::string p, std::string commit)
    : path(std::move(p)), language(language_from_path(path)), content_ref{std::move(commit), path} {}

ChangedFile::ChangedFile(std::string p, Language lang, std::string commit)
    : path(std::move(p)), language(lang), content_ref{std::move(commit), path} {}

void PullRequest::validate() const {
    auto fail = [this](const std::string& field, const std::string& what) {
        throw ValidationError("PR " + (id.empty() ? std::string("<no id>") : id) + ": field '" + field +
                              "': " + what);
    };
    if (id.empty()) fail("id", "must be non-empty");
    if (author.empty()) fail("author", "must be non-empty");
    if (state == PrState::Closed) {
        if (!closed_at) fail("closed_at", "required for CLOSED pull requests");
        if (*closed_at < created_at) fail("closed_at", "precedes created_at");
    }
    std::set<std::string> seen;
    for (const auto& f : changed_files) {
        try {
            validate_repo_path(f.path);
        } catch (const ValidationError& e) {
            fail("changed_files", e.what());
        }
        if (!seen.insert(f.path).second) fail("changed_files", "duplicate path '" + f.path + "'");
    }
}

std::set<Identity> ground_truth(const PullRequest& pr) {
    std::set<Identity> out = pr.referenced_reviewers;
    out.insert(pr.actual_reviewers.begin(), pr.actual_reviewers.end());
    out.erase(pr.author);
    return out;
}

namespace {

void add_checked(TokenCounts& into, const TokenCounts& other_side, const std::string& token,
                 std::uint32_t count) {
    if (token.empty()) throw ValidationError("empty token");
    if (count == 0) throw ValidationError("token '" + token + "' with zero count");
    if (other_side.count(token))
        throw ValidationError("token '" + token + "' already classified in the other dimension");
    into[token] += count;
}

} // namespace

void TokenBag::add_library(const std::string& token, std::uint32_t count) {
    add_checked(libraries_, technologies_, token, count);
}

void TokenBag::add_technology(const std::string& token, std::uint32_t count) {
    add_checked(technologies_, libraries_, token, count);
}

void TokenBag::merge(const TokenBag& other) {
    for (const auto& [t, c] : other.libraries_) add_library(t, c);
    for (const auto& [t, c] : other.technologies_) add_technology(t, c);
}

TokenBag TokenBag::binarized() const {
    TokenBag out = *this;
    for (auto& [_, c] : out.libraries_) c = 1;
    for (auto& [_, c] : out.technologies_) c = 1;
    return out;
}

std::vector<Identity> Recommendation::reviewers() const {
    std::vector<Identity> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.reviewer);
    return out;
}

void Config::validate() const {
    if (window_size < 1) throw ValidationError("window_size must be >= 1");
    if (k < 1) throw ValidationError("k must be >= 1");
}

const std::set<std::string>& default_tech_lexicon() {
    static const std::set<std::string> lexicon{
        "google.appengine.", "ndb",     "search",   "taskqueue", "urlfetch",
        "memcache",          "mapreduce", "map-reduce", "pipeline", "google.cloud.ndb",
    };
    return lexicon;
}

const std::map<Language, std::set<std::string>>& default_stoplists() {
    static const std::map<Language, std::set<std::string>> lists{
        {Language::Python,
         {"__future__", "abc", "argparse", "base64", "collections", "contextlib", "copy", "csv",
          "datetime", "decimal", "enum", "functools", "hashlib", "io", "itertools", "json",
          "logging", "math", "os", "pathlib", "pickle", "random", "re", "shutil", "string",
          "subprocess", "sys", "tempfile", "threading", "time", "traceback", "types", "typing",
          "unittest", "urllib", "uuid", "warnings"}},
        {Language::Java, {"java", "javax", "jdk", "sun"}},
        {Language::Ruby,
         {"json", "set", "time", "date", "fileutils", "securerandom", "digest", "net", "uri",
          "yaml", "erb", "logger", "open3", "optparse", "pp", "stringio", "tempfile"}},
    };
    return lists;
}

Config Config::defaults() {
    Config cfg;
    cfg.tech_lexicon = default_tech_lexicon();
    cfg.stdlib_stoplists = default_stoplists();
    return cfg;
}

std::string Config::digest() const {
    std::ostringstream os;
    os << "window=" << window_size << ";k=" << k << ";fallback=" << fallback_enabled
       << ";weights=" << lib_weight << ',' << tech_weight
       << ";weighting=" << (weighting == TokenWeighting::Binary ? "binary" : "frequency") << ";lexicon=";
    for (const auto& t : tech_lexicon) os << t << '\x1f';
    os << ";stop=";
    for (const auto& [lang, words] : stdlib_stoplists) {
        os << to_string(lang) << ':';
        for (const auto& w : words) os << w << '\x1f';
    }
    os << ";langs=";
    for (auto l : languages_enabled) os << to_string(l) << ',';
    os << ";roots=";
    for (const auto& r : source_roots) os << r << '\x1f';
    return hex_digest(os.str());
}

} // namespace reviewrank

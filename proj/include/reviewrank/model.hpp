#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reviewrank {

/// Thrown when a domain object violates one of its construction invariants.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Identity = std::string;
using PrId = std::string;
using Timestamp = std::int64_t; // UTC epoch seconds

enum class Language { Python, Java, Ruby, Other };

std::string_view to_string(Language lang);
Language language_from_name(std::string_view name);
Language language_from_path(std::string_view path);

enum class PrState { Open, Closed };

std::string_view to_string(PrState state);
PrState state_from_name(std::string_view name);

/// Opaque handle resolving to file text: the commit and path to read.
struct ContentRef {
    std::string commit;
    std::string path;

    bool operator==(const ContentRef&) const = default;
};

struct ChangedFile {
    std::string path;
    Language language = Language::Other;
    ContentRef content_ref;

    ChangedFile() = default;
    ChangedFile(std::string path, std::string commit);
    ChangedFile(std::string path, Language language, std::string commit);

    bool operator==(const ChangedFile&) const = default;
};

/// Throws ValidationError unless the path is non-empty, relative and slash-separated.
void validate_repo_path(std::string_view path);

struct PullRequest {
    PrId id;
    Identity author;
    Timestamp created_at = 0;
    std::optional<Timestamp> closed_at;
    PrState state = PrState::Open;
    std::vector<std::string> commits;
    std::vector<ChangedFile> changed_files;
    std::set<Identity> referenced_reviewers;
    std::set<Identity> actual_reviewers;

    bool closed() const { return state == PrState::Closed; }

    /// Throws ValidationError naming the PR id and the offending field.
    void validate() const;

    bool operator==(const PullRequest&) const = default;
};

/// Reviewers referenced at submission or who reviewed, minus the author.
std::set<Identity> ground_truth(const PullRequest& pr);

using TokenCounts = std::map<std::string, std::uint32_t>;

/// Library and technology token multisets for a file or a PR. A token lives
/// in at most one of the two multisets and every stored count is positive.
class TokenBag {
public:
    TokenBag() = default;

    void add_library(const std::string& token, std::uint32_t count = 1);
    void add_technology(const std::string& token, std::uint32_t count = 1);
    void merge(const TokenBag& other);

    const TokenCounts& libraries() const { return libraries_; }
    const TokenCounts& technologies() const { return technologies_; }
    bool empty() const { return libraries_.empty() && technologies_.empty(); }

    /// Copy with every count clamped to 1 (presence-only weighting).
    TokenBag binarized() const;

    bool operator==(const TokenBag&) const = default;

private:
    TokenCounts libraries_;
    TokenCounts technologies_;
};

struct CandidateScore {
    Identity reviewer;
    double lib_score = 0.0;
    double tech_score = 0.0;
    double total = 0.0;
    std::set<PrId> supporting_prs;
};

struct RecommendationEntry {
    Identity reviewer;
    int total_pct = 0;
    int lib_pct = 0;
    int tech_pct = 0;
    double total = 0.0;
    double lib_score = 0.0;
    double tech_score = 0.0;

    bool operator==(const RecommendationEntry&) const = default;
};

struct Recommendation {
    std::vector<RecommendationEntry> entries;
    int k = 5;
    PrId generated_for;
    std::string config_digest;
    std::string strategy = "correct";
    bool fallback = false;

    std::vector<Identity> reviewers() const;

    bool operator==(const Recommendation&) const = default;
};

enum class TokenWeighting { Frequency, Binary };

struct Config {
    int window_size = 30;
    int k = 5;
    /// Exact names match a path or any dotted prefix of it; entries ending in
    /// '.' match strict descendants of that namespace.
    std::set<std::string> tech_lexicon;
    std::map<Language, std::set<std::string>> stdlib_stoplists;
    std::set<Language> languages_enabled{Language::Python, Language::Java, Language::Ruby};
    bool fallback_enabled = true;
    double lib_weight = 1.0;
    double tech_weight = 1.0;
    TokenWeighting weighting = TokenWeighting::Frequency;
    /// Directories (relative, "" for the root) whose children are top-level modules.
    std::vector<std::string> source_roots{"", "src", "lib", "src/main/java"};

    /// Throws ValidationError when window_size or k is below 1.
    void validate() const;

    /// Default configuration: shipped technology lexicon and stoplists.
    static Config defaults();

    /// Stable hex digest over every field that influences results.
    std::string digest() const;
};

const std::set<std::string>& default_tech_lexicon();
const std::map<Language, std::set<std::string>>& default_stoplists();

} // namespace reviewrank

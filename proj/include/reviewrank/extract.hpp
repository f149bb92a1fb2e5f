#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reviewrank/model.hpp"

namespace reviewrank {

/// One imported module path in dotted form. `internal` is set for imports
/// that are relative by construction (Python `from .x`, Ruby require_relative).
struct ImportRef {
    std::string path;
    bool internal = false;

    bool operator==(const ImportRef&) const = default;
};

struct ImportScan {
    std::vector<ImportRef> imports;
    std::optional<std::string> warning;
};

/// Line-oriented import scanner for Python, Java and Ruby sources. Text that
/// is not valid UTF-8 yields no imports and a warning.
ImportScan extract_imports(std::string_view source, Language language);

struct ProjectModuleIndex {
    std::set<std::string> top_level_modules;

    bool contains(const std::string& name) const { return top_level_modules.count(name) > 0; }
};

/// Top-level module names defined by the project: source-file stems directly
/// under a source root and directories under a root holding source files.
/// Directories that are themselves source roots are not modules.
ProjectModuleIndex build_project_module_index(const std::vector<std::string>& paths,
                                              const std::vector<std::string>& source_roots);

enum class TokenClass { Technology, Library, Internal, Stdlib };

std::string_view to_string(TokenClass cls);

struct Classification {
    TokenClass kind = TokenClass::Library;
    /// Lexicon pattern or stoplist word responsible, if any.
    std::string matched;
};

bool matches_lexicon_pattern(std::string_view path, std::string_view pattern);

Classification classify_import(const ImportRef& ref, const ProjectModuleIndex& index,
                               const Config& cfg, Language language);

TokenBag classify_tokens(const std::vector<ImportRef>& imports, const ProjectModuleIndex& index,
                         const Config& cfg, Language language);

/// Resolves a content handle to file text; nullopt signals a per-file failure.
using FileReader = std::function<std::optional<std::string>(const ContentRef&)>;

struct PrTokens {
    TokenBag bag;
    std::vector<std::string> warnings;
};

PrTokens tokenbag_of_pr(const PullRequest& pr, const FileReader& reader,
                        const ProjectModuleIndex& index, const Config& cfg);

bool is_valid_utf8(std::string_view text);

/// Lexicon / stoplist text: one pattern per line, '#' starts a comment,
/// surrounding whitespace is ignored.
std::set<std::string> parse_pattern_list(std::string_view text);

/// Throws std::runtime_error when the file cannot be read.
std::set<std::string> load_pattern_file(const std::string& path);

} // namespace reviewrank

#include "reviewrank/extract.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace reviewrank {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string_view> lines_of(std::string_view text) {
    auto out = split(text, '\n');
    for (auto& l : out)
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    return out;
}

bool starts_with_word(std::string_view s, std::string_view word) {
    if (!s.starts_with(word)) return false;
    if (s.size() == word.size()) return true;
    return std::isspace(static_cast<unsigned char>(s[word.size()])) || s[word.size()] == '(';
}

bool is_dotted_name(std::string_view s) {
    if (s.empty() || s.front() == '.' || s.back() == '.') return false;
    for (unsigned char c : s) {
        if (std::isspace(c) || c == ',' || c == '(' || c == ')' || c == ';' || c == '"' || c == '\'')
            return false;
    }
    return s.find("..") == std::string_view::npos;
}

// Drops a trailing "# ..." comment, ignoring '#' inside quotes.
std::string_view strip_hash_comment(std::string_view line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quote) {
            if (c == '\\') ++i;
            else if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

std::size_t count_occurrences(std::string_view s, std::string_view needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string_view::npos; pos = s.find(needle, pos + needle.size()))
        ++n;
    return n;
}

std::string_view drop_alias(std::string_view item) {
    item = trim(item);
    for (std::size_t i = 0; i + 4 <= item.size(); ++i) {
        if (std::isspace(static_cast<unsigned char>(item[i])) && item.substr(i + 1, 2) == "as" &&
            i + 3 < item.size() && std::isspace(static_cast<unsigned char>(item[i + 3])))
            return trim(item.substr(0, i));
    }
    return item;
}

void python_statement(std::string_view stmt, std::vector<ImportRef>& out) {
    stmt = trim(stmt);
    if (starts_with_word(stmt, "import")) {
        for (auto item : split(stmt.substr(6), ',')) {
            auto name = drop_alias(item);
            if (is_dotted_name(name)) out.push_back({std::string(name), false});
        }
        return;
    }
    if (!starts_with_word(stmt, "from")) return;
    auto rest = trim(stmt.substr(4));
    std::size_t sp = 0;
    while (sp < rest.size() && !std::isspace(static_cast<unsigned char>(rest[sp]))) ++sp;
    auto module = rest.substr(0, sp);
    auto tail = trim(rest.substr(sp));
    if (!starts_with_word(tail, "import")) return;
    auto names = trim(tail.substr(6));
    if (!names.empty() && names.front() == '(') names.remove_prefix(1);
    if (!names.empty() && names.back() == ')') names.remove_suffix(1);

    bool relative = false;
    while (!module.empty() && module.front() == '.') {
        relative = true;
        module.remove_prefix(1);
    }
    if (!module.empty() && !is_dotted_name(module)) return;

    std::string base(module);
    if (!base.empty()) out.push_back({base, relative});
    if (trim(names) == "*") return;
    for (auto item : split(names, ',')) {
        auto name = drop_alias(item);
        if (!is_dotted_name(name)) continue;
        out.push_back({base.empty() ? std::string(name) : base + "." + std::string(name), relative});
    }
}

std::vector<ImportRef> scan_python(std::string_view source) {
    std::vector<ImportRef> out;
    std::string_view docstring_delim;
    std::string pending;
    int open_parens = 0;
    bool continued = false;

    for (auto raw : lines_of(source)) {
        if (!docstring_delim.empty()) {
            if (raw.find(docstring_delim) != std::string_view::npos) docstring_delim = {};
            continue;
        }
        auto line = strip_hash_comment(raw);
        if (pending.empty()) {
            auto stripped = trim(line);
            for (std::string_view delim : {std::string_view("\"\"\""), std::string_view("'''")}) {
                if (count_occurrences(stripped, delim) % 2 == 1) {
                    docstring_delim = delim;
                    break;
                }
            }
            if (!docstring_delim.empty()) continue;
            if (!starts_with_word(stripped, "import") && !starts_with_word(stripped, "from") &&
                stripped.find(';') == std::string_view::npos)
                continue;
        }
        bool backslash = false;
        auto body = trim(line);
        if (!body.empty() && body.back() == '\\') {
            backslash = true;
            body.remove_suffix(1);
        }
        pending.append(body);
        pending.push_back(' ');
        open_parens += static_cast<int>(std::count(body.begin(), body.end(), '(')) -
                       static_cast<int>(std::count(body.begin(), body.end(), ')'));
        continued = backslash || open_parens > 0;
        if (continued) continue;
        for (auto stmt : split(pending, ';')) python_statement(stmt, out);
        pending.clear();
        open_parens = 0;
    }
    if (!pending.empty())
        for (auto stmt : split(pending, ';')) python_statement(stmt, out);
    return out;
}

std::vector<ImportRef> scan_java(std::string_view source) {
    std::vector<ImportRef> out;
    bool in_block = false;
    for (auto raw : lines_of(source)) {
        std::string line;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (in_block) {
                if (raw.substr(i, 2) == "*/") {
                    in_block = false;
                    ++i;
                }
                continue;
            }
            if (raw.substr(i, 2) == "/*") {
                in_block = true;
                ++i;
                continue;
            }
            if (raw.substr(i, 2) == "//") break;
            line.push_back(raw[i]);
        }
        for (auto stmt : split(line, ';')) {
            stmt = trim(stmt);
            if (!starts_with_word(stmt, "import")) continue;
            auto rest = trim(stmt.substr(6));
            if (starts_with_word(rest, "static")) rest = trim(rest.substr(6));
            std::string name;
            for (char c : rest)
                if (!std::isspace(static_cast<unsigned char>(c))) name.push_back(c);
            if (name.ends_with(".*")) name.resize(name.size() - 2);
            if (is_dotted_name(name)) out.push_back({name, false});
        }
    }
    return out;
}

std::string ruby_path_to_dotted(std::string_view target) {
    if (target.ends_with(".rb")) target.remove_suffix(3);
    std::string out;
    for (auto seg : split(target, '/')) {
        if (seg.empty() || seg == "." || seg == "..") continue;
        if (!out.empty()) out.push_back('.');
        out.append(seg);
    }
    return out;
}

std::vector<ImportRef> scan_ruby(std::string_view source) {
    std::vector<ImportRef> out;
    bool in_block = false;
    for (auto raw : lines_of(source)) {
        if (in_block) {
            if (raw.starts_with("=end")) in_block = false;
            continue;
        }
        if (raw.starts_with("=begin")) {
            in_block = true;
            continue;
        }
        for (auto stmt : split(strip_hash_comment(raw), ';')) {
            stmt = trim(stmt);
            bool relative = false;
            if (starts_with_word(stmt, "require_relative")) {
                relative = true;
                stmt.remove_prefix(16);
            } else if (starts_with_word(stmt, "require")) {
                stmt.remove_prefix(7);
            } else {
                continue;
            }
            stmt = trim(stmt);
            if (!stmt.empty() && stmt.front() == '(') stmt = trim(stmt.substr(1));
            if (stmt.empty() || (stmt.front() != '\'' && stmt.front() != '"')) continue;
            char quote = stmt.front();
            auto close = stmt.find(quote, 1);
            if (close == std::string_view::npos) continue;
            auto dotted = ruby_path_to_dotted(stmt.substr(1, close - 1));
            if (is_dotted_name(dotted)) out.push_back({dotted, relative});
        }
    }
    return out;
}

std::string first_segment(std::string_view path) {
    return std::string(path.substr(0, path.find('.')));
}

} // namespace

bool is_valid_utf8(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
        auto c = static_cast<unsigned char>(text[i]);
        std::size_t extra;
        std::uint32_t cp;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            extra = 1;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            extra = 3;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + extra >= text.size()) return false;
        for (std::size_t k = 1; k <= extra; ++k) {
            auto cc = static_cast<unsigned char>(text[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
            cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            return false;
        i += extra + 1;
    }
    return true;
}

ImportScan extract_imports(std::string_view source, Language language) {
    ImportScan scan;
    if (!is_valid_utf8(source)) {
        scan.warning = "source is not valid UTF-8; skipped";
        return scan;
    }
    switch (language) {
    case Language::Python: scan.imports = scan_python(source); break;
    case Language::Java: scan.imports = scan_java(source); break;
    case Language::Ruby: scan.imports = scan_ruby(source); break;
    case Language::Other: scan.warning = "unsupported language"; break;
    }
    return scan;
}

ProjectModuleIndex build_project_module_index(const std::vector<std::string>& paths,
                                              const std::vector<std::string>& source_roots) {
    auto is_root_or_ancestor = [&](const std::string& dir) {
        for (const auto& root : source_roots) {
            if (root == dir || root.starts_with(dir + "/")) return true;
        }
        return false;
    };

    ProjectModuleIndex index;
    for (const auto& path : paths) {
        if (language_from_path(path) == Language::Other) continue;
        for (const auto& root : source_roots) {
            std::string_view rel = path;
            if (!root.empty()) {
                if (!path.starts_with(root + "/")) continue;
                rel.remove_prefix(root.size() + 1);
            }
            auto slash = rel.find('/');
            if (slash == std::string_view::npos) {
                auto stem = rel.substr(0, rel.rfind('.'));
                if (!stem.empty() && stem.front() != '.') index.top_level_modules.emplace(stem);
                continue;
            }
            auto dir = rel.substr(0, slash);
            if (dir.empty() || dir.front() == '.') continue;
            std::string full = root.empty() ? std::string(dir) : root + "/" + std::string(dir);
            if (is_root_or_ancestor(full)) continue;
            index.top_level_modules.emplace(dir);
        }
    }
    return index;
}

std::string_view to_string(TokenClass cls) {
    switch (cls) {
    case TokenClass::Technology: return "technology";
    case TokenClass::Library: return "library";
    case TokenClass::Internal: return "internal";
    case TokenClass::Stdlib: return "stdlib";
    }
    return "library";
}

bool matches_lexicon_pattern(std::string_view path, std::string_view pattern) {
    if (pattern.empty()) return false;
    if (pattern.back() == '.') return path.size() > pattern.size() && path.starts_with(pattern);
    if (!path.starts_with(pattern)) return false;
    return path.size() == pattern.size() || path[pattern.size()] == '.';
}

Classification classify_import(const ImportRef& ref, const ProjectModuleIndex& index,
                               const Config& cfg, Language language) {
    for (const auto& pattern : cfg.tech_lexicon) {
        if (matches_lexicon_pattern(ref.path, pattern)) return {TokenClass::Technology, pattern};
    }
    auto top = first_segment(ref.path);
    if (ref.internal) return {TokenClass::Internal, "relative import"};
    if (index.contains(top)) return {TokenClass::Internal, top};
    if (auto it = cfg.stdlib_stoplists.find(language); it != cfg.stdlib_stoplists.end() && it->second.count(top))
        return {TokenClass::Stdlib, top};
    return {TokenClass::Library, {}};
}

TokenBag classify_tokens(const std::vector<ImportRef>& imports, const ProjectModuleIndex& index,
                         const Config& cfg, Language language) {
    TokenBag bag;
    for (const auto& ref : imports) {
        switch (classify_import(ref, index, cfg, language).kind) {
        case TokenClass::Technology: bag.add_technology(ref.path); break;
        case TokenClass::Library: bag.add_library(ref.path); break;
        default: break;
        }
    }
    return bag;
}

PrTokens tokenbag_of_pr(const PullRequest& pr, const FileReader& reader, const ProjectModuleIndex& index,
                        const Config& cfg) {
    PrTokens result;
    for (const auto& file : pr.changed_files) {
        if (file.language == Language::Other || !cfg.languages_enabled.count(file.language)) continue;
        auto text = reader(file.content_ref);
        if (!text) {
            result.warnings.push_back("PR " + pr.id + ": cannot read " + file.path + " at " +
                                      file.content_ref.commit);
            continue;
        }
        auto scan = extract_imports(*text, file.language);
        if (scan.warning) result.warnings.push_back("PR " + pr.id + ": " + file.path + ": " + *scan.warning);
        result.bag.merge(classify_tokens(scan.imports, index, cfg, file.language));
    }
    return result;
}

std::set<std::string> parse_pattern_list(std::string_view text) {
    std::set<std::string> out;
    for (auto line : lines_of(text)) {
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) out.emplace(line);
    }
    return out;
}

std::set<std::string> load_pattern_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read pattern file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_pattern_list(buf.str());
}

} // namespace reviewrank

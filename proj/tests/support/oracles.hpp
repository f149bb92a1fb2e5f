#pragma once

// Independent reference implementations used only by the tests. None of this
// code calls into the library's ranking, metric or statistics routines.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Counts = std::map<std::string, long long>;

struct Pr {
    std::string id;
    std::string author;
    std::int64_t created_at = 0;
    std::int64_t closed_at = 0;
    bool closed = false;
    Counts libs;
    Counts techs;
    std::set<std::string> referenced;
    std::set<std::string> actual;
    std::vector<std::string> paths;
};

struct Entry {
    std::string reviewer;
    long double total = 0;
    long double lib = 0;
    long double tech = 0;
    int total_pct = 0;
    int lib_pct = 0;
    int tech_pct = 0;
};

struct Result {
    std::vector<Entry> entries;
    bool fallback = false;
};

long double cosine(const Counts& a, const Counts& b);

std::vector<const Pr*> window(const std::vector<Pr>& history, std::int64_t reference, int w,
                              const std::string& exclude_id);

/// Explicit double loop over (window PR, reviewer) pairs.
Result recommend(const std::vector<Pr>& history, const Pr& current, std::int64_t reference, int w, int k,
                 bool fallback);

/// Path-similarity variant of the same loop.
Result recommend_fps(const std::vector<Pr>& history, const Pr& current, std::int64_t reference, int w, int k,
                     bool fallback);

// Metrics straight from their definitions.
double top_k_accuracy(const std::vector<std::vector<std::string>>& rankings,
                      const std::vector<std::set<std::string>>& truths, int k);
double mrr(const std::vector<std::vector<std::string>>& rankings, const std::vector<std::set<std::string>>& truths);
double precision(const std::vector<std::vector<std::string>>& rankings,
                 const std::vector<std::set<std::string>>& truths, int k);
double recall(const std::vector<std::vector<std::string>>& rankings, const std::vector<std::set<std::string>>& truths,
              int k);

/// U for sample a by counting every pair.
double u_by_pairs(const std::vector<double>& a, const std::vector<double>& b);

/// Exact two-sided p by enumerating every split of the pooled sample.
double exact_p_enumerate(const std::vector<double>& a, const std::vector<double>& b);

/// Exact two-sided p via a rank-sum counting recursion over pooled midranks.
double exact_p_rank_sum(const std::vector<double>& a, const std::vector<double>& b);

/// Java import lines parsed one at a time with the stated grammar.
std::vector<std::string> java_imports_by_line(const std::string& source);

double fps(const std::vector<std::string>& a, const std::vector<std::string>& b);

} // namespace oracle

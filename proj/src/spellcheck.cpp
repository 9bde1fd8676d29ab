#include "faqrank/spellcheck.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

#include "faqrank/textproc.hpp"
#include "faqrank/util.hpp"

namespace faqrank {

std::uint32_t damerau_levenshtein(std::u32string_view a, std::u32string_view b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n == 0) return static_cast<std::uint32_t>(m);
    if (m == 0) return static_cast<std::uint32_t>(n);

    // three rolling rows of the optimal-string-alignment recurrence
    std::vector<std::uint32_t> prev2(m + 1), prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<std::uint32_t>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<std::uint32_t>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            const std::uint32_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            std::uint32_t best = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
            if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
                best = std::min(best, prev2[j - 2] + 1);
            }
            cur[j] = best;
        }
        std::swap(prev2, prev);
        std::swap(prev, cur);
    }
    return prev[m];
}

namespace {

void collect_deletes(const std::u32string& word, std::uint32_t depth,
                     std::unordered_set<std::string>& out) {
    if (depth == 0 || word.empty()) return;
    for (std::size_t i = 0; i < word.size(); ++i) {
        std::u32string shorter = word;
        shorter.erase(shorter.begin() + static_cast<std::ptrdiff_t>(i));
        if (out.insert(utf8_encode(shorter)).second) {
            collect_deletes(shorter, depth - 1, out);
        }
    }
}

}  // namespace

SpellDictionary SpellDictionary::from_frequency_file(const std::filesystem::path& path,
                                                     std::uint32_t max_edit) {
    std::istringstream in(read_file(path));
    std::vector<std::pair<std::string, std::uint64_t>> counts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;  // blank line
        std::string count_str;
        if (!(ls >> count_str)) {
            throw Error(path.string() + ":" + std::to_string(lineno) + ": expected `word count`");
        }
        std::uint64_t count = 0;
        const auto [ptr, ec] =
            std::from_chars(count_str.data(), count_str.data() + count_str.size(), count);
        if (ec != std::errc() || ptr != count_str.data() + count_str.size()) {
            throw Error(path.string() + ":" + std::to_string(lineno) + ": non-numeric count '" +
                        count_str + "'");
        }
        counts.emplace_back(std::move(word), count);
    }
    return from_counts(counts, max_edit);
}

SpellDictionary SpellDictionary::from_counts(
    const std::vector<std::pair<std::string, std::uint64_t>>& counts, std::uint32_t max_edit) {
    if (max_edit == 0) throw Error("spell dictionary: max_edit must be positive");
    SpellDictionary dict;
    dict.max_edit_ = max_edit;
    for (const auto& [word, count] : counts) {
        if (word.empty()) continue;
        auto it = dict.word_index_.find(word);
        if (it != dict.word_index_.end()) {
            dict.freqs_[it->second] += count;  // merge duplicates
            continue;
        }
        const auto idx = static_cast<std::uint32_t>(dict.words_.size());
        dict.word_index_.emplace(word, idx);
        dict.words_.push_back(word);
        dict.freqs_.push_back(count);

        std::unordered_set<std::string> variants;
        collect_deletes(utf8_decode(word), max_edit, variants);
        for (const auto& v : variants) {
            dict.deletes_[v].push_back(idx);
        }
    }
    return dict;
}

bool SpellDictionary::contains(std::string_view word) const {
    return word_index_.find(std::string(word)) != word_index_.end();
}

std::uint64_t SpellDictionary::frequency(std::string_view word) const {
    auto it = word_index_.find(std::string(word));
    return it == word_index_.end() ? 0 : freqs_[it->second];
}

std::string SpellDictionary::correct_token(std::string_view token) const {
    const std::string tok(token);
    if (tok.empty() || contains(tok)) return tok;

    const std::u32string tok_cp = utf8_decode(tok);

    // candidate discovery: every delete variant of the token (token included)
    // hits either a word directly or the delete index
    std::unordered_set<std::string> probes;
    probes.insert(tok);
    collect_deletes(tok_cp, max_edit_, probes);

    std::unordered_set<std::uint32_t> candidates;
    for (const auto& p : probes) {
        if (auto it = word_index_.find(p); it != word_index_.end()) {
            candidates.insert(it->second);
        }
        if (auto it = deletes_.find(p); it != deletes_.end()) {
            for (const std::uint32_t idx : it->second) candidates.insert(idx);
        }
    }

    bool found = false;
    std::uint32_t best_dist = 0;
    std::uint32_t best_idx = 0;
    for (const std::uint32_t idx : candidates) {
        const std::uint32_t d = damerau_levenshtein(tok_cp, utf8_decode(words_[idx]));
        if (d > max_edit_) continue;
        if (!found || d < best_dist ||
            (d == best_dist && (freqs_[idx] > freqs_[best_idx] ||
                                (freqs_[idx] == freqs_[best_idx] &&
                                 words_[idx] < words_[best_idx])))) {
            found = true;
            best_dist = d;
            best_idx = idx;
        }
    }
    return found ? words_[best_idx] : tok;
}

std::string SpellDictionary::correct_query(std::string_view text) const {
    std::string out;
    for (const auto& tok : tokenize(text)) {
        if (!out.empty()) out += ' ';
        out += correct_token(tok);
    }
    return out;
}

std::vector<std::string> SpellDictionary::correct_queries(
    std::span<const std::string> queries) const {
    std::vector<std::string> out(queries.size());
    const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = correct_query(queries[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::vector<std::string> SpellDictionary::correct_queries_serial(
    std::span<const std::string> queries) const {
    std::vector<std::string> out(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        out[i] = correct_query(queries[i]);
    }
    return out;
}

std::vector<std::pair<std::string, std::uint64_t>> SpellDictionary::words_by_frequency() const {
    std::vector<std::pair<std::string, std::uint64_t>> out;
    out.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) out.emplace_back(words_[i], freqs_[i]);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

}  // namespace faqrank

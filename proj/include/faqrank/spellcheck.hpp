#ifndef FAQRANK_SPELLCHECK_HPP
#define FAQRANK_SPELLCHECK_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace faqrank {

/// Damerau-Levenshtein distance (adjacent transposition counts as one edit),
/// computed on code points.
std::uint32_t damerau_levenshtein(std::u32string_view a, std::u32string_view b);

/// Symmetric-delete spelling dictionary. Every dictionary word is indexed
/// under all strings reachable by up to max_edit deletions, so candidate
/// lookup is a handful of hash probes instead of a scan. Candidates are then
/// verified with the real edit distance. Immutable after construction.
class SpellDictionary {
public:
    /// Lines of `word count`; blank lines ignored.
    static SpellDictionary from_frequency_file(const std::filesystem::path& path,
                                               std::uint32_t max_edit = 2);
    static SpellDictionary from_counts(
        const std::vector<std::pair<std::string, std::uint64_t>>& counts,
        std::uint32_t max_edit = 2);

    /// Best correction: minimal edit distance, then higher frequency, then
    /// lexicographic. Dictionary words come back unchanged, as do tokens with
    /// no candidate within max_edit.
    std::string correct_token(std::string_view token) const;

    /// Tokenize, correct each token independently, re-join with single spaces.
    std::string correct_query(std::string_view text) const;

    std::vector<std::string> correct_queries(std::span<const std::string> queries) const;
    std::vector<std::string> correct_queries_serial(std::span<const std::string> queries) const;

    bool contains(std::string_view word) const;
    std::uint64_t frequency(std::string_view word) const;
    std::size_t size() const { return words_.size(); }
    std::uint32_t max_edit() const { return max_edit_; }

    /// (word, frequency) in descending frequency order (ties lexicographic).
    std::vector<std::pair<std::string, std::uint64_t>> words_by_frequency() const;

private:
    SpellDictionary() = default;

    std::vector<std::string> words_;
    std::vector<std::uint64_t> freqs_;
    std::unordered_map<std::string, std::uint32_t> word_index_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> deletes_;
    std::uint32_t max_edit_ = 2;
};

}  // namespace faqrank

#endif

#ifndef FAQRANK_TEXTPROC_HPP
#define FAQRANK_TEXTPROC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "faqrank/stemmer.hpp"

namespace faqrank {

class TrainingCorpus;

/// Ordered lowercase tokens; never contains empty strings.
using TokenSeq = std::vector<std::string>;

/// Whitespace split, lowercase (ASCII + German umlauts/ß), leading and
/// trailing punctuation stripped per token. Empty input gives an empty
/// sequence.
TokenSeq tokenize(std::string_view text);

TokenSeq stem_all(const TokenSeq& tokens);

/// Contiguous n-token windows, in order; empty when the sequence is shorter
/// than n. n == 0 is an error.
std::vector<std::vector<std::string>> ngrams(const TokenSeq& seq, std::size_t n);

/// Term -> dense index plus document frequencies, built over the tokenized
/// training queries in first-seen order.
class Vocabulary {
public:
    static Vocabulary build(const TrainingCorpus& corpus);
    static Vocabulary from_terms(std::vector<std::string> terms, std::vector<std::uint32_t> df);

    std::optional<std::uint32_t> lookup(std::string_view term) const;
    std::size_t size() const { return terms_.size(); }
    std::uint32_t df(std::uint32_t index) const { return df_[index]; }
    const std::vector<std::string>& terms() const { return terms_; }

private:
    std::vector<std::string> terms_;
    std::vector<std::uint32_t> df_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

/// Sparse histogram: (term index, count), sorted by index, counts > 0.
using CountVector = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

/// Bag-of-words counts over the vocabulary; out-of-vocabulary tokens are
/// dropped.
CountVector bow_vector(const TokenSeq& seq, const Vocabulary& vocab);

}  // namespace faqrank

#endif

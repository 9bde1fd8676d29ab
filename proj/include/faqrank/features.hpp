#ifndef FAQRANK_FEATURES_HPP
#define FAQRANK_FEATURES_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "faqrank/textproc.hpp"

namespace faqrank {

/// Per query-answer pair: for n in {1,2,3} the Jaccard distance, cosine
/// similarity and distinct n-gram match count over stemmed token n-grams,
/// plus the baseline confidence. Field order is fixed:
///   [j1, cos1, match1, j2, cos2, match2, j3, cos3, match3, confidence]
inline constexpr std::size_t kFeatureDim = 10;
using FeatureVector = std::array<double, kFeatureDim>;

/// Sorted (n-gram key, count) pairs; the key is the n-gram's tokens joined
/// with a '\x1f' separator.
using NgramCounts = std::vector<std::pair<std::string, std::uint32_t>>;

NgramCounts ngram_counts(const TokenSeq& stemmed, std::size_t n);

/// 1 - |A∩B| / |A∪B| over the distinct n-grams; 0 when either side is empty,
/// so short queries stay valid inputs at every n-gram order.
double jaccard_distance(const NgramCounts& a, const NgramCounts& b);

/// Cosine over the n-gram count vectors; 0 when either side is empty.
double cosine_similarity(const NgramCounts& a, const NgramCounts& b);

/// |A∩B| over distinct n-grams.
double match_count(const NgramCounts& a, const NgramCounts& b);

/// Tokenize + stem both texts, evaluate all three metrics at n = 1, 2, 3 and
/// append the baseline confidence. Throws if confidence is outside [0,1].
FeatureVector extract_features(std::string_view query, std::string_view answer_text,
                               double confidence);

}  // namespace faqrank

#endif

#include "faqrank/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "faqrank/util.hpp"

namespace faqrank {

NgramCounts ngram_counts(const TokenSeq& stemmed, std::size_t n) {
    if (n == 0) throw Error("ngram_counts: n must be positive");
    std::map<std::string, std::uint32_t> counts;
    if (stemmed.size() >= n) {
        for (std::size_t i = 0; i + n <= stemmed.size(); ++i) {
            std::string key = stemmed[i];
            for (std::size_t j = 1; j < n; ++j) {
                key += '\x1f';
                key += stemmed[i + j];
            }
            ++counts[key];
        }
    }
    return NgramCounts(counts.begin(), counts.end());
}

double jaccard_distance(const NgramCounts& a, const NgramCounts& b) {
    if (a.empty() || b.empty()) return 0.0;  // empty-set convention, shared with cosine
    std::size_t inter = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const int cmp = a[i].first.compare(b[j].first);
        if (cmp == 0) {
            ++inter;
            ++i;
            ++j;
        } else if (cmp < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

double cosine_similarity(const NgramCounts& a, const NgramCounts& b) {
    double dot = 0, na = 0, nb = 0;
    for (const auto& [k, c] : a) na += static_cast<double>(c) * c;
    for (const auto& [k, c] : b) nb += static_cast<double>(c) * c;
    if (na == 0 || nb == 0) return 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const int cmp = a[i].first.compare(b[j].first);
        if (cmp == 0) {
            dot += static_cast<double>(a[i].second) * static_cast<double>(b[j].second);
            ++i;
            ++j;
        } else if (cmp < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double match_count(const NgramCounts& a, const NgramCounts& b) {
    std::size_t inter = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const int cmp = a[i].first.compare(b[j].first);
        if (cmp == 0) {
            ++inter;
            ++i;
            ++j;
        } else if (cmp < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    return static_cast<double>(inter);
}

FeatureVector extract_features(std::string_view query, std::string_view answer_text,
                               double confidence) {
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
        throw Error("extract_features: confidence must be in [0,1]");
    }
    const TokenSeq q = stem_all(tokenize(query));
    const TokenSeq a = stem_all(tokenize(answer_text));

    FeatureVector f{};
    for (std::size_t n = 1; n <= 3; ++n) {
        const NgramCounts qa = ngram_counts(q, n);
        const NgramCounts aa = ngram_counts(a, n);
        const std::size_t base = (n - 1) * 3;
        f[base + 0] = jaccard_distance(qa, aa);
        f[base + 1] = cosine_similarity(qa, aa);
        f[base + 2] = match_count(qa, aa);
    }
    f[9] = confidence;
    return f;
}

}  // namespace faqrank

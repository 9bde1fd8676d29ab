#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "faqrank/features.hpp"
#include "faqrank/util.hpp"

#include "oracles.hpp"

using namespace faqrank;

TEST_CASE("metric basics") {
    const auto counts = [](const TokenSeq& toks, std::size_t n) {
        return ngram_counts(stem_all(toks), n);
    };
    const NgramCounts ab = counts({"alpha", "beta"}, 1);
    const NgramCounts bc = counts({"beta", "gamma"}, 1);
    const NgramCounts empty;

    CHECK(jaccard_distance(ab, ab) == 0.0);
    CHECK(jaccard_distance(ab, bc) == doctest::Approx(2.0 / 3.0));
    CHECK(jaccard_distance(counts({"alpha"}, 1), counts({"beta"}, 1)) == 1.0);
    CHECK(jaccard_distance(empty, empty) == 0.0);
    CHECK(jaccard_distance(empty, ab) == 0.0);

    CHECK(cosine_similarity(ab, ab) == doctest::Approx(1.0));
    CHECK(cosine_similarity(counts({"alpha"}, 1), counts({"beta"}, 1)) == 0.0);
    CHECK(cosine_similarity(empty, ab) == 0.0);
    // (1,1,0) vs (0,1,1)
    CHECK(cosine_similarity(counts({"alpha", "beta"}, 1), counts({"beta", "gamma"}, 1)) ==
          doctest::Approx(0.5));

    CHECK(match_count(ab, bc) == 1.0);
    CHECK(match_count(ab, ab) == 2.0);
    CHECK(match_count(counts({"alpha"}, 1), counts({"beta"}, 1)) == 0.0);
}

TEST_CASE("extract_features field layout and conventions") {
    // identity: zero jaccard, unit cosine, unigram matches = distinct stems
    const FeatureVector same = extract_features("kosten für vertrag", "kosten für vertrag", 0.7);
    CHECK(same[0] == 0.0);
    CHECK(same[1] == doctest::Approx(1.0));
    CHECK(same[2] == 3.0);
    CHECK(same[3] == 0.0);
    CHECK(same[4] == doctest::Approx(1.0));
    CHECK(same[9] == 0.7);

    // single-token query: bigram and trigram blocks fall back to zeros
    const FeatureVector single = extract_features("kosten", "kosten für vertrag", 0.2);
    CHECK(single[3] == 0.0);
    CHECK(single[4] == 0.0);
    CHECK(single[5] == 0.0);
    CHECK(single[6] == 0.0);
    CHECK(single[7] == 0.0);
    CHECK(single[8] == 0.0);

    // worked example: stems share {kost, vertrag}
    const FeatureVector f = extract_features("kosten für vertrag", "vertrag kosten übersicht", 0.4);
    CHECK(f[0] == doctest::Approx(0.5));
    CHECK(f[1] == doctest::Approx(2.0 / 3.0));
    CHECK(f[2] == 2.0);
    CHECK(f[3] == 1.0);  // bigrams disjoint
    CHECK(f[4] == 0.0);
    CHECK(f[5] == 0.0);
    CHECK(f[9] == 0.4);

    CHECK_THROWS_AS(extract_features("a", "b", 1.5), Error);
    CHECK_THROWS_AS(extract_features("a", "b", -0.1), Error);
}

TEST_CASE("extract_features matches the brute-force oracle on random pairs") {
    Rng rng(2024);
    for (int i = 0; i < 300; ++i) {
        const std::string q = oracle::random_text(rng);
        const std::string a = oracle::random_text(rng);
        const double c = rng.unit();
        const FeatureVector got = extract_features(q, a, c);
        const FeatureVector want = oracle::features(q, a, c);
        for (std::size_t k = 0; k < kFeatureDim; ++k) {
            CAPTURE(q);
            CAPTURE(a);
            CAPTURE(k);
            CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("metrics are symmetric in their text arguments") {
    Rng rng(55);
    for (int i = 0; i < 100; ++i) {
        const std::string q = oracle::random_text(rng);
        const std::string a = oracle::random_text(rng);
        const FeatureVector qa = extract_features(q, a, 0.5);
        const FeatureVector aq = extract_features(a, q, 0.5);
        for (std::size_t k = 0; k < 9; ++k) CHECK(qa[k] == aq[k]);
    }
}

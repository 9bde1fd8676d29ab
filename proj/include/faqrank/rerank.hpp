#ifndef FAQRANK_RERANK_HPP
#define FAQRANK_RERANK_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "faqrank/corpus.hpp"
#include "faqrank/gbrt.hpp"
#include "faqrank/ranker.hpp"

namespace faqrank {

/// answer_id -> answer text, the lookup the similarity features need.
using AnswerTexts = std::unordered_map<std::string, std::string>;

AnswerTexts answer_texts(const TrainingCorpus& corpus);

/// Re-scores a baseline top-10 with the learned similarity function and
/// sorts by the new scores. Never adds or removes candidates.
class Reranker {
public:
    Reranker(GbrtModel model, AnswerTexts texts);

    /// predict(gbrt, features(query, answer text, confidence)). Unknown
    /// answer ids are an error.
    double similarity(std::string_view query, const std::string& answer_id,
                      double confidence) const;

    /// Same answer ids, reordered by similarity score descending; stable with
    /// respect to the input order on ties, so a constant model is a no-op.
    /// Output confidences are the raw similarity scores.
    RankedList rerank(const RankedList& baseline) const;

    const GbrtModel& model() const { return model_; }
    const AnswerTexts& texts() const { return texts_; }

    void save(const std::filesystem::path& path) const;
    static Reranker load(const std::filesystem::path& path);

private:
    GbrtModel model_;
    AnswerTexts texts_;
};

/// Balanced training set for the similarity model: for each (query, correct
/// answer) pair whose correct answer survives in the baseline top-10, one
/// positive row and one uniformly sampled negative row from the remaining
/// candidates. Pairs outside the top-10 are skipped.
struct RerankTrainingSet {
    FeatureMatrix x;
    std::vector<double> y;
    std::size_t n_pairs = 0;     // input pairs seen
    std::size_t n_retained = 0;  // pairs that passed the skip rule
};

RerankTrainingSet build_training_set(const Ranker& baseline,
                                     std::span<const QueryAnswerPair> pairs,
                                     const AnswerTexts& texts, std::uint64_t seed);

}  // namespace faqrank

#endif

#ifndef FAQRANK_RANKER_HPP
#define FAQRANK_RANKER_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "faqrank/corpus.hpp"
#include "faqrank/textproc.hpp"

namespace faqrank {

struct RankedEntry {
    std::string answer_id;
    double confidence;
};

/// Top-k candidates for one query, confidences non-increasing, ids distinct.
struct RankedList {
    std::string query;
    std::vector<RankedEntry> entries;

    const RankedEntry* find(std::string_view answer_id) const;
    bool contains(std::string_view answer_id) const { return find(answer_id) != nullptr; }
};

class Ranker {
public:
    virtual ~Ranker() = default;

    /// Top-k answers by confidence, descending; confidence ties broken by
    /// answer id so replays are exact.
    virtual RankedList rank(std::string_view query, std::size_t k = 10) const = 0;

    virtual const std::vector<std::string>& answer_ids() const = 0;
    virtual const char* kind() const = 0;
    virtual nlohmann::ordered_json to_json() const = 0;
};

/// TF-IDF centroid ranker: one centroid per answer over that answer's
/// training queries, confidence = cosine(query vector, centroid).
class CountRanker final : public Ranker {
public:
    static CountRanker train(const TrainingCorpus& corpus);
    static CountRanker from_json(const nlohmann::json& j);

    RankedList rank(std::string_view query, std::size_t k = 10) const override;
    const std::vector<std::string>& answer_ids() const override { return answer_ids_; }
    const char* kind() const override { return "count"; }
    nlohmann::ordered_json to_json() const override;

    /// Cosine of the query against every answer centroid, in answer order.
    std::vector<double> score_all(std::string_view query) const;
    std::vector<double> score_all_serial(std::string_view query) const;

private:
    CountRanker() = default;

    std::vector<double> query_vector(std::string_view query) const;

    Vocabulary vocab_;
    std::vector<double> idf_;
    std::vector<std::string> answer_ids_;
    // centroids as parallel arrays of a compressed sparse row layout
    std::vector<std::size_t> centroid_offsets_;  // size answers+1
    std::vector<std::uint32_t> centroid_terms_;
    std::vector<double> centroid_weights_;
};

struct EmbedParams {
    int epochs = 100;
    int dim = 20;
    double margin = 0.2;
    int negatives_per_sample = 10;
    double learning_rate = 0.01;
    std::uint64_t seed = 0;
};

/// Dual-embedding ranker: a query-side token embedding matrix and an
/// answer-id embedding table trained jointly with a cosine margin ranking
/// loss against sampled negative answers. The query embedding is the mean of
/// its token embeddings; confidence = (1 + cosine) / 2.
class EmbeddingRanker final : public Ranker {
public:
    static EmbeddingRanker train(const TrainingCorpus& corpus, const EmbedParams& params);
    static EmbeddingRanker from_json(const nlohmann::json& j);

    RankedList rank(std::string_view query, std::size_t k = 10) const override;
    const std::vector<std::string>& answer_ids() const override { return answer_ids_; }
    const char* kind() const override { return "embedding"; }
    nlohmann::ordered_json to_json() const override;

    /// Cosine of the query embedding against every answer embedding; all
    /// zeros when no query token is in vocabulary.
    std::vector<double> score_all(std::string_view query) const;
    std::vector<double> score_all_serial(std::string_view query) const;

    /// Mean margin-ranking loss per epoch, recorded during training.
    const std::vector<double>& epoch_loss() const { return epoch_loss_; }
    const EmbedParams& params() const { return params_; }

private:
    EmbeddingRanker() = default;

    bool query_embedding(std::string_view query, std::vector<double>& out) const;

    Vocabulary vocab_;
    std::vector<std::string> answer_ids_;
    EmbedParams params_;
    std::vector<double> query_emb_;   // |vocab| x dim, row-major
    std::vector<double> answer_emb_;  // |answers| x dim, row-major
    std::vector<double> epoch_loss_;
};

/// Shared top-k selection: descending score, ties by answer id.
RankedList top_k(std::string_view query, const std::vector<std::string>& answer_ids,
                 const std::vector<double>& confidences, std::size_t k);

// model artifacts (JSON with a format version tag)
inline constexpr int kArtifactFormatVersion = 1;

void save_ranker(const Ranker& ranker, const std::filesystem::path& path);
std::unique_ptr<Ranker> load_ranker(const std::filesystem::path& path);

}  // namespace faqrank

#endif

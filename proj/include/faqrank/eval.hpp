#ifndef FAQRANK_EVAL_HPP
#define FAQRANK_EVAL_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "faqrank/corpus.hpp"
#include "faqrank/gbrt.hpp"
#include "faqrank/ranker.hpp"
#include "faqrank/rerank.hpp"
#include "faqrank/spellcheck.hpp"

namespace faqrank {

/// One evaluated query: the ranked list under test plus the annotated
/// correct ids (1..3; the best-ranked one counts).
struct QueryResult {
    std::string query;
    std::vector<std::string> correct_ids;
    RankedList ranked;
};

struct FoldMetrics {
    int repetition = 0;
    int fold = 0;
    std::array<double, 10> top_n{};
    double mrr_at_10 = 0;
    std::size_t n_queries = 0;
};

struct EvalReport {
    std::array<double, 10> top_n{};  // top_n[i] = top-(i+1) accuracy
    double mrr_at_10 = 0;
    std::size_t n_queries = 0;
    std::vector<FoldMetrics> folds;  // present for cross-validated reports

    nlohmann::ordered_json to_json() const;
};

/// 1/rank of the best-placed correct answer within the top 10; 0 if absent.
double reciprocal_rank(const RankedList& ranked, std::span<const std::string> correct_ids);

/// Fraction of queries with a correct answer at rank 1..n. 1 <= n <= 10.
double top_n_accuracy(std::span<const QueryResult> results, std::size_t n);

double mrr_at_10(std::span<const QueryResult> results);

/// (improved - base) / base; base must be positive.
double relative_improvement(double base, double improved);

EvalReport make_report(std::span<const QueryResult> results);

/// Rank every query; one slot per query, so the parallel and serial paths
/// agree bit for bit.
std::vector<RankedList> rank_all(const Ranker& ranker, std::span<const std::string> queries,
                                 std::size_t k = 10);
std::vector<RankedList> rank_all_serial(const Ranker& ranker,
                                        std::span<const std::string> queries, std::size_t k = 10);

/// Rank the whole evaluation corpus and score it. When a dictionary is given
/// the queries are spell-corrected before ranking.
EvalReport evaluate_baseline(const Ranker& ranker, const EvalCorpus& corpus,
                             const SpellDictionary* dict = nullptr);

struct CrossValConfig {
    std::size_t folds = 10;
    std::size_t repetitions = 5;
    std::uint64_t seed = 0;
    GbrtParams gbrt;
    /// feed spell-corrected queries to the baseline ranker (the re-ranker
    /// features keep the raw query unless rerank_on_corrected is set)
    bool spellcheck = false;
    bool rerank_on_corrected = false;
};

struct CrossValResult {
    EvalReport baseline;
    EvalReport reranked;
};

/// Repeated k-fold cross-validation of the re-ranker against a fixed
/// pre-trained baseline: per split, a similarity model is trained on the
/// train fold's surviving top-10 pairs and applied to the test fold's top-10
/// lists. Metrics are the unweighted mean over all (fold, repetition) cells.
/// Folds evaluate in parallel; each cell owns its seeded sampler and results
/// aggregate in index order, so reports are identical for any thread count.
CrossValResult cross_validate(const Ranker& baseline, const EvalCorpus& corpus,
                              const AnswerTexts& texts, const CrossValConfig& config,
                              const SpellDictionary* dict = nullptr);

}  // namespace faqrank

#endif

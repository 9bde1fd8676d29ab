#include "faqrank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "faqrank/features.hpp"
#include "faqrank/util.hpp"

namespace faqrank {

double reciprocal_rank(const RankedList& ranked, std::span<const std::string> correct_ids) {
    const std::size_t limit = std::min<std::size_t>(ranked.entries.size(), 10);
    for (std::size_t pos = 0; pos < limit; ++pos) {
        const std::string& id = ranked.entries[pos].answer_id;
        if (std::find(correct_ids.begin(), correct_ids.end(), id) != correct_ids.end()) {
            return 1.0 / static_cast<double>(pos + 1);
        }
    }
    return 0.0;
}

namespace {

/// best (1-based) rank of any correct id within the top 10; 0 when absent
std::size_t best_rank(const QueryResult& r) {
    const std::size_t limit = std::min<std::size_t>(r.ranked.entries.size(), 10);
    for (std::size_t pos = 0; pos < limit; ++pos) {
        const std::string& id = r.ranked.entries[pos].answer_id;
        if (std::find(r.correct_ids.begin(), r.correct_ids.end(), id) != r.correct_ids.end()) {
            return pos + 1;
        }
    }
    return 0;
}

}  // namespace

double top_n_accuracy(std::span<const QueryResult> results, std::size_t n) {
    if (results.empty()) throw Error("top_n_accuracy: empty result set");
    if (n < 1 || n > 10) throw Error("top_n_accuracy: n must be in 1..10");
    std::size_t hits = 0;
    for (const QueryResult& r : results) {
        const std::size_t rank = best_rank(r);
        if (rank >= 1 && rank <= n) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(results.size());
}

double mrr_at_10(std::span<const QueryResult> results) {
    if (results.empty()) throw Error("mrr_at_10: empty result set");
    double sum = 0;
    for (const QueryResult& r : results) sum += reciprocal_rank(r.ranked, r.correct_ids);
    return sum / static_cast<double>(results.size());
}

double relative_improvement(double base, double improved) {
    if (!(base > 0)) throw Error("relative_improvement: base must be positive");
    return (improved - base) / base;
}

EvalReport make_report(std::span<const QueryResult> results) {
    EvalReport report;
    report.n_queries = results.size();
    for (std::size_t n = 1; n <= 10; ++n) report.top_n[n - 1] = top_n_accuracy(results, n);
    report.mrr_at_10 = mrr_at_10(results);
    return report;
}

nlohmann::ordered_json EvalReport::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json tn = nlohmann::ordered_json::object();
    for (std::size_t n = 1; n <= 10; ++n) tn[std::to_string(n)] = top_n[n - 1];
    j["top_n"] = std::move(tn);
    j["mrr_at_10"] = mrr_at_10;
    j["n_queries"] = n_queries;
    if (!folds.empty()) {
        nlohmann::ordered_json fj = nlohmann::ordered_json::array();
        for (const FoldMetrics& f : folds) {
            nlohmann::ordered_json e;
            e["repetition"] = f.repetition;
            e["fold"] = f.fold;
            nlohmann::ordered_json ftn = nlohmann::ordered_json::object();
            for (std::size_t n = 1; n <= 10; ++n) ftn[std::to_string(n)] = f.top_n[n - 1];
            e["top_n"] = std::move(ftn);
            e["mrr_at_10"] = f.mrr_at_10;
            e["n_queries"] = f.n_queries;
            fj.push_back(std::move(e));
        }
        j["folds"] = std::move(fj);
    }
    return j;
}

std::vector<RankedList> rank_all(const Ranker& ranker, std::span<const std::string> queries,
                                 std::size_t k) {
    std::vector<RankedList> out(queries.size());
    const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = ranker.rank(queries[static_cast<std::size_t>(i)], k);
    }
    return out;
}

std::vector<RankedList> rank_all_serial(const Ranker& ranker,
                                        std::span<const std::string> queries, std::size_t k) {
    std::vector<RankedList> out(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) {
        out[i] = ranker.rank(queries[i], k);
    }
    return out;
}

EvalReport evaluate_baseline(const Ranker& ranker, const EvalCorpus& corpus,
                             const SpellDictionary* dict) {
    if (corpus.items.empty()) throw Error("evaluate_baseline: empty evaluation corpus");

    std::vector<std::string> queries;
    queries.reserve(corpus.items.size());
    for (const EvalItem& item : corpus.items) queries.push_back(item.query);
    if (dict != nullptr) queries = dict->correct_queries(queries);

    const std::vector<RankedList> ranked = rank_all(ranker, queries, 10);

    std::vector<QueryResult> results(corpus.items.size());
    for (std::size_t i = 0; i < corpus.items.size(); ++i) {
        results[i] = {corpus.items[i].query, corpus.items[i].answer_ids, ranked[i]};
    }
    return make_report(results);
}

namespace {

struct FoldCell {
    std::vector<QueryResult> baseline;
    std::vector<QueryResult> reranked;
};

std::array<std::size_t, 2> fold_bounds(std::size_t n, std::size_t folds, std::size_t f) {
    return {f * n / folds, (f + 1) * n / folds};
}

}  // namespace

CrossValResult cross_validate(const Ranker& baseline, const EvalCorpus& corpus,
                              const AnswerTexts& texts, const CrossValConfig& config,
                              const SpellDictionary* dict) {
    const std::size_t n = corpus.items.size();
    if (config.folds < 2) throw Error("cross_validate: need at least 2 folds");
    if (n < config.folds) throw Error("cross_validate: corpus smaller than fold count");
    if (config.repetitions < 1) throw Error("cross_validate: need at least 1 repetition");
    if (config.spellcheck && dict == nullptr) {
        throw Error("cross_validate: spellcheck requested without a dictionary");
    }

    // spell-corrected queries are shared by every split
    std::vector<std::string> ranked_queries;
    ranked_queries.reserve(n);
    for (const EvalItem& item : corpus.items) ranked_queries.push_back(item.query);
    if (config.spellcheck) ranked_queries = dict->correct_queries(ranked_queries);

    // per-repetition shuffles, drawn up front in repetition order
    std::vector<std::vector<std::size_t>> orders(config.repetitions);
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        orders[rep].resize(n);
        std::iota(orders[rep].begin(), orders[rep].end(), 0);
        Rng rng(config.seed + rep);
        rng.shuffle(orders[rep]);
    }

    const std::size_t n_cells = config.repetitions * config.folds;
    std::vector<FoldCell> cells(n_cells);
    const auto cells_count = static_cast<std::ptrdiff_t>(n_cells);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t cell = 0; cell < cells_count; ++cell) {
        const std::size_t rep = static_cast<std::size_t>(cell) / config.folds;
        const std::size_t fold = static_cast<std::size_t>(cell) % config.folds;
        const std::vector<std::size_t>& order = orders[rep];
        const auto [lo, hi] = fold_bounds(n, config.folds, fold);

        // expand train items to (query, correct id) pairs; multi-answer items
        // contribute one pair per annotated answer
        std::vector<QueryAnswerPair> train_pairs;
        for (std::size_t pos = 0; pos < n; ++pos) {
            if (pos >= lo && pos < hi) continue;
            const std::size_t item_idx = order[pos];
            const EvalItem& item = corpus.items[item_idx];
            for (const std::string& id : item.answer_ids) {
                train_pairs.push_back({ranked_queries[item_idx], id});
            }
        }

        const RerankTrainingSet train = build_training_set(
            baseline, train_pairs, texts, config.seed + rep);

        GbrtParams gbrt_params = config.gbrt;
        gbrt_params.seed = config.seed + rep;
        Reranker reranker{train.y.empty()
                              ? GbrtModel::constant(0.5, kFeatureDim, gbrt_params)
                              : GbrtModel::fit(train.x, train.y, gbrt_params),
                          texts};

        FoldCell& out = cells[static_cast<std::size_t>(cell)];
        for (std::size_t pos = lo; pos < hi; ++pos) {
            const std::size_t item_idx = order[pos];
            const EvalItem& item = corpus.items[item_idx];
            RankedList top10 = baseline.rank(ranked_queries[item_idx], 10);
            if (!config.rerank_on_corrected) top10.query = item.query;
            const RankedList reranked = reranker.rerank(top10);
            out.baseline.push_back({item.query, item.answer_ids, top10});
            out.reranked.push_back({item.query, item.answer_ids, reranked});
        }
    }

    CrossValResult result;
    double base_mrr = 0, rr_mrr = 0;
    std::array<double, 10> base_top{}, rr_top{};
    std::size_t base_n = 0, rr_n = 0;
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        const auto rep = static_cast<int>(cell / config.folds);
        const auto fold = static_cast<int>(cell % config.folds);
        const EvalReport b = make_report(cells[cell].baseline);
        const EvalReport r = make_report(cells[cell].reranked);
        result.baseline.folds.push_back(
            {rep, fold, b.top_n, b.mrr_at_10, b.n_queries});
        result.reranked.folds.push_back(
            {rep, fold, r.top_n, r.mrr_at_10, r.n_queries});
        for (std::size_t i = 0; i < 10; ++i) {
            base_top[i] += b.top_n[i];
            rr_top[i] += r.top_n[i];
        }
        base_mrr += b.mrr_at_10;
        rr_mrr += r.mrr_at_10;
        base_n += b.n_queries;
        rr_n += r.n_queries;
    }
    const double denom = static_cast<double>(n_cells);
    for (std::size_t i = 0; i < 10; ++i) {
        result.baseline.top_n[i] = base_top[i] / denom;
        result.reranked.top_n[i] = rr_top[i] / denom;
    }
    result.baseline.mrr_at_10 = base_mrr / denom;
    result.reranked.mrr_at_10 = rr_mrr / denom;
    result.baseline.n_queries = base_n / config.repetitions;
    result.reranked.n_queries = rr_n / config.repetitions;
    return result;
}

}  // namespace faqrank

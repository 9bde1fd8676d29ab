#include <doctest.h>

#include <omp.h>

#include "faqrank/eval.hpp"
#include "faqrank/ranker.hpp"
#include "faqrank/spellcheck.hpp"

using namespace faqrank;

// The OpenMP kernels must agree with their serial references bit for bit:
// every parallel loop writes to its own slot and all reductions happen in
// index order afterwards.

namespace {

EmbedParams quick_params() {
    EmbedParams params;
    params.epochs = 10;
    params.seed = 5;
    return params;
}

struct Fixture {
    Fixture()
        : data(generate_synthetic({.n_answers = 40,
                                   .vocab_per_topic = 4,
                                   .queries_per_answer = 3,
                                   .typo_rate = 0.25,
                                   .filler_rate = 0.3,
                                   .seed = 1234})),
          count(CountRanker::train(data.first)),
          embed(EmbeddingRanker::train(data.first, quick_params())) {
        for (const auto& item : data.second.items) queries.push_back(item.query);
    }

    std::pair<TrainingCorpus, EvalCorpus> data;
    CountRanker count;
    EmbeddingRanker embed;
    std::vector<std::string> queries;
};

}  // namespace

TEST_CASE("score_all parallel kernels equal their serial references") {
    const Fixture f;
    for (const auto& q : f.queries) {
        CHECK(f.count.score_all(q) == f.count.score_all_serial(q));
        CHECK(f.embed.score_all(q) == f.embed.score_all_serial(q));
    }
}

TEST_CASE("rank_all parallel equals serial") {
    const Fixture f;
    const auto par = rank_all(f.count, f.queries, 10);
    const auto ser = rank_all_serial(f.count, f.queries, 10);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        REQUIRE(par[i].entries.size() == ser[i].entries.size());
        for (std::size_t k = 0; k < par[i].entries.size(); ++k) {
            CHECK(par[i].entries[k].answer_id == ser[i].entries[k].answer_id);
            CHECK(par[i].entries[k].confidence == ser[i].entries[k].confidence);
        }
    }
}

TEST_CASE("spellcheck batch correction parallel equals serial") {
    const Fixture f;
    const SpellDictionary dict =
        SpellDictionary::from_counts(token_frequencies(f.data.first), 2);
    CHECK(dict.correct_queries(f.queries) == dict.correct_queries_serial(f.queries));
}

TEST_CASE("cross_validate reports are identical for any thread count") {
    const Fixture f;
    CrossValConfig config;
    config.folds = 4;
    config.repetitions = 2;
    config.seed = 77;
    config.gbrt.n_trees = 15;
    const AnswerTexts texts = answer_texts(f.data.first);

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const CrossValResult serial = cross_validate(f.count, f.data.second, texts, config);
    omp_set_num_threads(saved);
    const CrossValResult parallel = cross_validate(f.count, f.data.second, texts, config);

    CHECK(serial.baseline.to_json().dump() == parallel.baseline.to_json().dump());
    CHECK(serial.reranked.to_json().dump() == parallel.reranked.to_json().dump());
}

TEST_CASE("evaluate_baseline is identical for any thread count") {
    const Fixture f;
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const EvalReport serial = evaluate_baseline(f.count, f.data.second);
    omp_set_num_threads(saved);
    const EvalReport parallel = evaluate_baseline(f.count, f.data.second);
    CHECK(serial.to_json().dump() == parallel.to_json().dump());
}

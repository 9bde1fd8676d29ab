#include <doctest.h>

#include <filesystem>
#include <set>

#include "faqrank/corpus.hpp"
#include "faqrank/ranker.hpp"
#include "faqrank/util.hpp"

using namespace faqrank;

namespace {

TrainingCorpus corpus_from(std::vector<Answer> answers, CorpusVariant v = CorpusVariant::KW_2U) {
    return {std::move(answers), v};
}

Answer answer(std::string id, std::string text, std::vector<std::string> keywords,
              std::vector<std::vector<std::string>> queries = {}) {
    Answer a;
    a.answer_id = std::move(id);
    a.text = std::move(text);
    a.keywords = std::move(keywords);
    a.sample_queries = std::move(queries);
    return a;
}

/// hand-built corpus with pairwise disjoint vocabularies
TrainingCorpus disjoint_corpus(std::size_t n_answers) {
    std::vector<Answer> answers;
    for (std::size_t i = 0; i < n_answers; ++i) {
        const std::string tag = "t" + std::to_string(i);
        answers.push_back(answer("a" + std::to_string(i), "antwort " + tag,
                                 {tag + "x " + tag + "y", tag + "z"},
                                 {{tag + "x " + tag + "z"}, {tag + "y"}}));
    }
    return corpus_from(std::move(answers));
}

void check_ranked_list_invariants(const RankedList& list, std::size_t k) {
    CHECK(list.entries.size() <= k);
    std::set<std::string> ids;
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        const auto& e = list.entries[i];
        CHECK(e.confidence >= 0.0);
        CHECK(e.confidence <= 1.0);
        CHECK(ids.insert(e.answer_id).second);
        if (i > 0) CHECK(list.entries[i - 1].confidence >= e.confidence);
    }
}

}  // namespace

TEST_CASE("count ranker: exact training query reaches confidence 1 at rank 1") {
    auto corpus = corpus_from({answer("a1", "text eins", {}, {{"was kostet der vertrag"}}),
                               answer("a2", "text zwei", {}, {{"tarif ohne bindung"}})});
    const CountRanker ranker = CountRanker::train(corpus);
    const RankedList top = ranker.rank("was kostet der vertrag", 10);
    REQUIRE_FALSE(top.entries.empty());
    CHECK(top.entries[0].answer_id == "a1");
    CHECK(top.entries[0].confidence == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("count ranker: out-of-vocabulary query gives zero confidences in id order") {
    const CountRanker ranker = CountRanker::train(disjoint_corpus(5));
    const RankedList top = ranker.rank("völlig unbekannte wörter", 10);
    REQUIRE(top.entries.size() == 5);
    for (std::size_t i = 0; i < top.entries.size(); ++i) {
        CHECK(top.entries[i].confidence == 0.0);
        CHECK(top.entries[i].answer_id == "a" + std::to_string(i));
    }
}

TEST_CASE("count ranker: disjoint keywords retrieve their own answer first") {
    auto corpus = corpus_from({answer("links", "a", {"apfel birne"}),
                               answer("rechts", "b", {"schraube mutter"})},
                              CorpusVariant::KW);
    const CountRanker ranker = CountRanker::train(corpus);
    CHECK(ranker.rank("apfel", 10).entries[0].answer_id == "links");
    CHECK(ranker.rank("birne", 10).entries[0].answer_id == "links");
    CHECK(ranker.rank("schraube", 10).entries[0].answer_id == "rechts");
    CHECK_THROWS_AS(CountRanker::train(corpus_from({})), Error);
}

TEST_CASE("rank: k semantics and prefix consistency") {
    const CountRanker ranker = CountRanker::train(disjoint_corpus(6));
    const std::string query = "t3x t3z";

    const RankedList one = ranker.rank(query, 1);
    REQUIRE(one.entries.size() == 1);
    CHECK(one.entries[0].answer_id == "a3");

    const RankedList all = ranker.rank(query, 100);
    CHECK(all.entries.size() == 6);

    const RankedList ten = ranker.rank(query, 10);
    const RankedList twenty = ranker.rank(query, 20);
    for (std::size_t i = 0; i < ten.entries.size(); ++i) {
        CHECK(ten.entries[i].answer_id == twenty.entries[i].answer_id);
        CHECK(ten.entries[i].confidence == twenty.entries[i].confidence);
    }

    CHECK_THROWS_AS(ranker.rank(query, 0), Error);
}

TEST_CASE("ranked list invariants hold over random synthetic queries") {
    const auto [corpus, eval] = generate_synthetic({.n_answers = 30,
                                                    .vocab_per_topic = 4,
                                                    .queries_per_answer = 3,
                                                    .typo_rate = 0.2,
                                                    .filler_rate = 0.3,
                                                    .seed = 5});
    const CountRanker count = CountRanker::train(corpus);
    EmbedParams params;
    params.epochs = 5;
    params.seed = 5;
    const EmbeddingRanker embed = EmbeddingRanker::train(corpus, params);
    for (const auto& item : eval.items) {
        check_ranked_list_invariants(count.rank(item.query, 10), 10);
        check_ranked_list_invariants(embed.rank(item.query, 10), 10);
    }
}

TEST_CASE("embedding ranker: determinism per seed") {
    const auto [corpus, eval] = generate_synthetic({.n_answers = 12,
                                                    .vocab_per_topic = 3,
                                                    .queries_per_answer = 2,
                                                    .typo_rate = 0.1,
                                                    .filler_rate = 0.2,
                                                    .seed = 17});
    EmbedParams params;
    params.epochs = 8;
    params.seed = 123;
    const EmbeddingRanker a = EmbeddingRanker::train(corpus, params);
    const EmbeddingRanker b = EmbeddingRanker::train(corpus, params);
    CHECK(a.to_json().dump() == b.to_json().dump());

    params.seed = 124;
    const EmbeddingRanker c = EmbeddingRanker::train(corpus, params);
    CHECK(a.to_json().dump() != c.to_json().dump());
}

TEST_CASE("embedding ranker: loss decreases and separable data is learned") {
    const TrainingCorpus corpus = disjoint_corpus(10);
    EmbedParams params;
    params.epochs = 100;
    params.seed = 42;
    const EmbeddingRanker ranker = EmbeddingRanker::train(corpus, params);

    REQUIRE(ranker.epoch_loss().size() == 100);
    CHECK(ranker.epoch_loss().back() < ranker.epoch_loss().front());

    // training-set top-1 accuracy on separable data
    std::size_t hits = 0, total = 0;
    for (const auto& pair : corpus.pairs()) {
        ++total;
        if (ranker.rank(pair.query, 1).entries[0].answer_id == pair.answer_id) ++hits;
    }
    CHECK(hits == total);
}

TEST_CASE("embedding ranker: all-OOV query yields 0.5 everywhere in id order") {
    EmbedParams params;
    params.epochs = 3;
    const EmbeddingRanker ranker = EmbeddingRanker::train(disjoint_corpus(4), params);
    const RankedList top = ranker.rank("nie gesehen", 10);
    REQUIRE(top.entries.size() == 4);
    for (std::size_t i = 0; i < top.entries.size(); ++i) {
        CHECK(top.entries[i].confidence == 0.5);
        CHECK(top.entries[i].answer_id == "a" + std::to_string(i));
    }
}

TEST_CASE("embedding ranker: ordering invariant under uniform token duplication") {
    EmbedParams params;
    params.epochs = 30;
    params.seed = 9;
    const EmbeddingRanker ranker = EmbeddingRanker::train(disjoint_corpus(6), params);
    const RankedList once = ranker.rank("t2x t2z", 10);
    const RankedList twice = ranker.rank("t2x t2z t2x t2z", 10);
    REQUIRE(once.entries.size() == twice.entries.size());
    for (std::size_t i = 0; i < once.entries.size(); ++i) {
        CHECK(once.entries[i].answer_id == twice.entries[i].answer_id);
    }
}

TEST_CASE("ranker artifacts round-trip through save/load") {
    const TrainingCorpus corpus = disjoint_corpus(5);
    const auto dir = std::filesystem::temp_directory_path();

    const CountRanker count = CountRanker::train(corpus);
    save_ranker(count, dir / "faqrank_count.json");
    const auto count2 = load_ranker(dir / "faqrank_count.json");
    CHECK(std::string(count2->kind()) == "count");

    EmbedParams params;
    params.epochs = 5;
    const EmbeddingRanker embed = EmbeddingRanker::train(corpus, params);
    save_ranker(embed, dir / "faqrank_embed.json");
    const auto embed2 = load_ranker(dir / "faqrank_embed.json");
    CHECK(std::string(embed2->kind()) == "embedding");

    for (const std::string query : {"t1x t1z", "t4y", "unbekannt"}) {
        const RankedList before = count.rank(query, 10);
        const RankedList after = count2->rank(query, 10);
        REQUIRE(before.entries.size() == after.entries.size());
        for (std::size_t i = 0; i < before.entries.size(); ++i) {
            CHECK(before.entries[i].answer_id == after.entries[i].answer_id);
            CHECK(before.entries[i].confidence == after.entries[i].confidence);
        }
        const RankedList ebefore = embed.rank(query, 10);
        const RankedList eafter = embed2->rank(query, 10);
        for (std::size_t i = 0; i < ebefore.entries.size(); ++i) {
            CHECK(ebefore.entries[i].answer_id == eafter.entries[i].answer_id);
            CHECK(ebefore.entries[i].confidence == eafter.entries[i].confidence);
        }
    }

    // version gate
    atomic_write_file(dir / "faqrank_badver.json",
                      R"({"format_version": 99, "kind": "count", "model": {}})");
    CHECK_THROWS_WITH_AS(load_ranker(dir / "faqrank_badver.json"),
                         doctest::Contains("format_version"), Error);
}

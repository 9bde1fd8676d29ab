#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "faqrank/corpus.hpp"
#include "faqrank/util.hpp"

using namespace faqrank;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::trunc);
    out << contents;
    return path;
}

const char* kAnswersJsonl =
    R"({"answer_id": "a1", "text": "erster text", "keywords": ["kosten", "vertrag"], "sample_queries": [["was kostet das"], ["kosten übersicht", "preise"]]}
{"answer_id": "a2", "text": "zweiter text", "keywords": [], "sample_queries": [[], ["tarif info"]]}
)";

}  // namespace

TEST_CASE("load_training_corpus parses JSONL and applies the variant") {
    const auto path = temp_file("faqrank_answers.jsonl", kAnswersJsonl);

    const TrainingCorpus kw = load_training_corpus(path, CorpusVariant::KW);
    REQUIRE(kw.answers().size() == 2);
    CHECK(kw.pairs().size() == 2);  // keywords only

    const TrainingCorpus kw1 = load_training_corpus(path, CorpusVariant::KW_1U);
    CHECK(kw1.pairs().size() == 3);  // + annotator 1

    const TrainingCorpus kw2 = load_training_corpus(path, CorpusVariant::KW_2U);
    CHECK(kw2.pairs().size() == 6);  // + annotator 2

    // variant selections nest
    const auto as_set = [](const TrainingCorpus& c) {
        std::set<std::pair<std::string, std::string>> s;
        for (const auto& p : c.pairs()) s.insert({p.query, p.answer_id});
        return s;
    };
    const auto s0 = as_set(kw), s1 = as_set(kw1), s2 = as_set(kw2);
    CHECK(std::includes(s1.begin(), s1.end(), s0.begin(), s0.end()));
    CHECK(std::includes(s2.begin(), s2.end(), s1.begin(), s1.end()));

    // every pair resolves
    for (const auto& p : kw2.pairs()) CHECK(kw2.contains(p.answer_id));
}

TEST_CASE("load_training_corpus rejects bad input with line numbers") {
    const auto bad = temp_file("faqrank_bad.jsonl", "{\"answer_id\": \"a1\"\n");
    CHECK_THROWS_WITH_AS(load_training_corpus(bad, CorpusVariant::KW),
                         doctest::Contains(":1:"), Error);

    const auto dup = temp_file(
        "faqrank_dup.jsonl",
        R"({"answer_id": "a1", "text": "t", "keywords": [], "sample_queries": []}
{"answer_id": "a1", "text": "t", "keywords": [], "sample_queries": []}
)");
    CHECK_THROWS_WITH_AS(load_training_corpus(dup, CorpusVariant::KW),
                         doctest::Contains("duplicate"), Error);

    const auto no_text = temp_file(
        "faqrank_notext.jsonl", R"({"answer_id": "a1", "keywords": [], "sample_queries": []})");
    CHECK_THROWS_AS(load_training_corpus(no_text, CorpusVariant::KW), Error);
}

TEST_CASE("load_eval_corpus validates answer_ids bounds and references") {
    const auto path = temp_file("faqrank_eval.jsonl",
                                R"({"query": "was kostet das", "answer_ids": ["a1"]}
{"query": "drei antworten", "answer_ids": ["a1", "a2", "a1"]}
)");
    const EvalCorpus corpus = load_eval_corpus(path);
    REQUIRE(corpus.items.size() == 2);
    CHECK(corpus.items[0].query == "was kostet das");
    CHECK(corpus.items[1].answer_ids.size() == 3);

    const auto empty_ids =
        temp_file("faqrank_eval_empty.jsonl", R"({"query": "q", "answer_ids": []})");
    CHECK_THROWS_AS(load_eval_corpus(empty_ids), Error);

    const auto too_many = temp_file(
        "faqrank_eval_many.jsonl", R"({"query": "q", "answer_ids": ["a","b","c","d"]})");
    CHECK_THROWS_AS(load_eval_corpus(too_many), Error);

    // reference check
    const auto answers = temp_file("faqrank_answers_ref.jsonl", kAnswersJsonl);
    const TrainingCorpus ref = load_training_corpus(answers, CorpusVariant::KW);
    CHECK_NOTHROW(load_eval_corpus(path, &ref));
    const auto unknown =
        temp_file("faqrank_eval_unknown.jsonl", R"({"query": "q", "answer_ids": ["nope"]})");
    CHECK_THROWS_WITH_AS(load_eval_corpus(unknown, &ref), doctest::Contains("unknown"), Error);
}

TEST_CASE("corpus save/load round trip") {
    const auto [training, eval] = generate_synthetic({.n_answers = 8,
                                                      .vocab_per_topic = 4,
                                                      .queries_per_answer = 2,
                                                      .typo_rate = 0.2,
                                                      .filler_rate = 0.3,
                                                      .seed = 99});
    const auto apath = std::filesystem::temp_directory_path() / "faqrank_rt_answers.jsonl";
    const auto epath = std::filesystem::temp_directory_path() / "faqrank_rt_eval.jsonl";
    save_training_corpus(training, apath);
    save_eval_corpus(eval, epath);

    const TrainingCorpus loaded = load_training_corpus(apath, CorpusVariant::KW_2U);
    REQUIRE(loaded.answers().size() == training.answers().size());
    for (std::size_t i = 0; i < loaded.answers().size(); ++i) {
        CHECK(loaded.answers()[i].answer_id == training.answers()[i].answer_id);
        CHECK(loaded.answers()[i].text == training.answers()[i].text);
        CHECK(loaded.answers()[i].keywords == training.answers()[i].keywords);
        CHECK(loaded.answers()[i].sample_queries == training.answers()[i].sample_queries);
    }
    const EvalCorpus eloaded = load_eval_corpus(epath, &loaded);
    REQUIRE(eloaded.items.size() == eval.items.size());
    for (std::size_t i = 0; i < eloaded.items.size(); ++i) {
        CHECK(eloaded.items[i].query == eval.items[i].query);
        CHECK(eloaded.items[i].answer_ids == eval.items[i].answer_ids);
    }
}

TEST_CASE("generate_synthetic is deterministic and well formed") {
    const SynthConfig config{.n_answers = 50,
                             .vocab_per_topic = 5,
                             .queries_per_answer = 5,
                             .typo_rate = 0.15,
                             .filler_rate = 0.3,
                             .seed = 42};
    const auto [t1, e1] = generate_synthetic(config);
    const auto [t2, e2] = generate_synthetic(config);

    // replay equality, byte for byte through serialization
    const auto p1 = std::filesystem::temp_directory_path() / "faqrank_gen1.jsonl";
    const auto p2 = std::filesystem::temp_directory_path() / "faqrank_gen2.jsonl";
    save_training_corpus(t1, p1);
    save_training_corpus(t2, p2);
    CHECK(read_file(p1) == read_file(p2));

    // pair count: keywords + queries_per_answer per annotator (2 annotators)
    CHECK(t1.pairs().size() == 50 * (5 + 5 * 2));
    CHECK(e1.items.size() == 50 * 5);

    // every eval item resolves against the co-generated corpus
    for (const auto& item : e1.items) {
        REQUIRE(item.answer_ids.size() == 1);
        CHECK(t1.contains(item.answer_ids[0]));
    }

    CHECK_THROWS_AS(generate_synthetic({.n_answers = 0}), Error);
}

TEST_CASE("generate_synthetic with zero noise emits keyword subsets") {
    const auto [training, eval] = generate_synthetic({.n_answers = 10,
                                                      .vocab_per_topic = 4,
                                                      .queries_per_answer = 3,
                                                      .typo_rate = 0.0,
                                                      .filler_rate = 0.0,
                                                      .seed = 1});
    for (const auto& item : eval.items) {
        const Answer* a = training.find(item.answer_ids[0]);
        REQUIRE(a != nullptr);
        const std::set<std::string> kws(a->keywords.begin(), a->keywords.end());
        std::istringstream qs(item.query);
        std::string tok;
        std::size_t n_tokens = 0;
        while (qs >> tok) {
            ++n_tokens;
            CHECK(kws.count(tok) == 1);
        }
        CHECK(n_tokens >= 1);
    }
}

TEST_CASE("corpus_stats") {
    std::vector<Answer> answers(2);
    answers[0] = {"a1", "text eins", {"nur eine"}, {}};
    answers[1] = {"a2", "text zwei", {"auch eine"}, {}};
    const CorpusStats even = corpus_stats(TrainingCorpus(answers, CorpusVariant::KW));
    CHECK(even.mean_queries_per_answer == doctest::Approx(1.0));
    CHECK(even.sd_queries_per_answer == doctest::Approx(0.0));

    answers[1].keywords = {"eins", "zwei", "drei"};
    const CorpusStats uneven = corpus_stats(TrainingCorpus(answers, CorpusVariant::KW));
    CHECK(uneven.mean_queries_per_answer == doctest::Approx(2.0));
    CHECK(uneven.n_pairs == 4);

    CHECK_THROWS_AS(corpus_stats(TrainingCorpus({}, CorpusVariant::KW)), Error);
}

TEST_CASE("token_frequencies aggregates over training queries") {
    std::vector<Answer> answers(1);
    answers[0] = {"a1", "t", {"kosten kosten", "vertrag"}, {}};
    const auto freqs = token_frequencies(TrainingCorpus(answers, CorpusVariant::KW));
    REQUIRE(freqs.size() == 2);
    CHECK(freqs[0] == std::pair<std::string, std::uint64_t>{"kosten", 2});
    CHECK(freqs[1] == std::pair<std::string, std::uint64_t>{"vertrag", 1});
}

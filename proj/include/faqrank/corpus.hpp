#ifndef FAQRANK_CORPUS_HPP
#define FAQRANK_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace faqrank {

/// One catalog entry: the answer text, its keyword tags and the natural
/// sample queries collected per annotator.
struct Answer {
    std::string answer_id;
    std::string text;
    std::vector<std::string> keywords;
    std::vector<std::vector<std::string>> sample_queries;  // one list per annotator
};

/// Which training queries a corpus exposes: keywords only, or keywords plus
/// the first one / two annotators' sample queries.
enum class CorpusVariant { KW, KW_1U, KW_2U };

const char* to_string(CorpusVariant v);
CorpusVariant variant_from_string(std::string_view s);

struct QueryAnswerPair {
    std::string query;
    std::string answer_id;
};

class TrainingCorpus {
public:
    TrainingCorpus(std::vector<Answer> answers, CorpusVariant variant);

    const std::vector<Answer>& answers() const { return answers_; }
    CorpusVariant variant() const { return variant_; }

    /// (query, answer_id) training pairs under the variant selection:
    /// keywords first, then the selected annotator lists, in answer order.
    std::vector<QueryAnswerPair> pairs() const;

    const Answer* find(std::string_view answer_id) const;
    bool contains(std::string_view answer_id) const { return find(answer_id) != nullptr; }

    /// Same answers re-exposed under another variant.
    TrainingCorpus with_variant(CorpusVariant v) const { return {answers_, v}; }

private:
    std::vector<Answer> answers_;
    CorpusVariant variant_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

struct EvalItem {
    std::string query;
    std::vector<std::string> answer_ids;  // 1..3 correct answers
};

struct EvalCorpus {
    std::vector<EvalItem> items;
};

struct SynthConfig {
    std::size_t n_answers = 100;
    std::size_t vocab_per_topic = 5;
    std::size_t queries_per_answer = 4;
    double typo_rate = 0.15;
    double filler_rate = 0.3;
    std::uint64_t seed = 42;
};

struct CorpusStats {
    std::size_t n_answers = 0;
    std::size_t n_pairs = 0;
    double mean_queries_per_answer = 0;
    double sd_queries_per_answer = 0;  // population SD
};

/// JSONL loader; one Answer object per line. Throws Error with the offending
/// line number on malformed input or duplicate ids.
TrainingCorpus load_training_corpus(const std::filesystem::path& path, CorpusVariant variant);

/// JSONL loader for {query, answer_ids} items. When a reference corpus is
/// given, every answer id must resolve against it.
EvalCorpus load_eval_corpus(const std::filesystem::path& path,
                            const TrainingCorpus* reference = nullptr);

void save_training_corpus(const TrainingCorpus& corpus, const std::filesystem::path& path);
void save_eval_corpus(const EvalCorpus& corpus, const std::filesystem::path& path);

/// Deterministic synthetic stand-in for the proprietary corpora. Each answer
/// owns a small topic vocabulary (keywords); queries are keyword subsets with
/// filler words mixed in and single-character typos applied at typo_rate.
/// Topic vocabularies overlap across answers so rankers have real confusions
/// to resolve. Pure function of the config.
std::pair<TrainingCorpus, EvalCorpus> generate_synthetic(const SynthConfig& config);

CorpusStats corpus_stats(const TrainingCorpus& corpus);

/// word -> total count over all training queries; input for the spelling
/// dictionary when no external frequency list is supplied.
std::vector<std::pair<std::string, std::uint64_t>> token_frequencies(const TrainingCorpus& corpus);

}  // namespace faqrank

#endif

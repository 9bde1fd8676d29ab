#include "faqrank/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "faqrank/textproc.hpp"
#include "faqrank/util.hpp"

namespace faqrank {

namespace {

std::size_t selected_user_lists(CorpusVariant v) {
    switch (v) {
        case CorpusVariant::KW: return 0;
        case CorpusVariant::KW_1U: return 1;
        case CorpusVariant::KW_2U: return 2;
    }
    return 0;
}

}  // namespace

const char* to_string(CorpusVariant v) {
    switch (v) {
        case CorpusVariant::KW: return "kw";
        case CorpusVariant::KW_1U: return "kw+1u";
        case CorpusVariant::KW_2U: return "kw+2u";
    }
    return "kw";
}

CorpusVariant variant_from_string(std::string_view s) {
    if (s == "kw") return CorpusVariant::KW;
    if (s == "kw+1u") return CorpusVariant::KW_1U;
    if (s == "kw+2u") return CorpusVariant::KW_2U;
    throw Error("unknown corpus variant: " + std::string(s) + " (expected kw|kw+1u|kw+2u)");
}

TrainingCorpus::TrainingCorpus(std::vector<Answer> answers, CorpusVariant variant)
    : answers_(std::move(answers)), variant_(variant) {
    for (std::size_t i = 0; i < answers_.size(); ++i) {
        const Answer& a = answers_[i];
        if (a.answer_id.empty()) throw Error("answer with empty answer_id");
        if (a.text.empty()) throw Error("answer " + a.answer_id + " has empty text");
        if (!by_id_.emplace(a.answer_id, i).second) {
            throw Error("duplicate answer_id: " + a.answer_id);
        }
    }
}

std::vector<QueryAnswerPair> TrainingCorpus::pairs() const {
    std::vector<QueryAnswerPair> out;
    const std::size_t users = selected_user_lists(variant_);
    for (const Answer& a : answers_) {
        for (const auto& kw : a.keywords) {
            out.push_back({kw, a.answer_id});
        }
        const std::size_t lists = std::min(users, a.sample_queries.size());
        for (std::size_t u = 0; u < lists; ++u) {
            for (const auto& q : a.sample_queries[u]) {
                out.push_back({q, a.answer_id});
            }
        }
    }
    return out;
}

const Answer* TrainingCorpus::find(std::string_view answer_id) const {
    auto it = by_id_.find(std::string(answer_id));
    if (it == by_id_.end()) return nullptr;
    return &answers_[it->second];
}

// ---- JSONL load/save -------------------------------------------------------

namespace {

nlohmann::json parse_line(const std::string& line, std::size_t lineno,
                          const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(path.string() + ":" + std::to_string(lineno) + ": malformed JSON object");
    }
    return j;
}

std::string require_string(const nlohmann::json& j, const char* key, std::size_t lineno,
                           const std::filesystem::path& path) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw Error(path.string() + ":" + std::to_string(lineno) + ": missing string field '" +
                    key + "'");
    }
    return j[key].get<std::string>();
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

TrainingCorpus load_training_corpus(const std::filesystem::path& path, CorpusVariant variant) {
    std::istringstream in(read_file(path));
    std::vector<Answer> answers;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        nlohmann::json j = parse_line(line, lineno, path);
        Answer a;
        a.answer_id = require_string(j, "answer_id", lineno, path);
        a.text = require_string(j, "text", lineno, path);
        if (!j.contains("keywords") || !j["keywords"].is_array()) {
            throw Error(path.string() + ":" + std::to_string(lineno) + ": missing 'keywords' array");
        }
        for (const auto& kw : j["keywords"]) {
            if (!kw.is_string()) {
                throw Error(path.string() + ":" + std::to_string(lineno) +
                            ": keywords must be strings");
            }
            a.keywords.push_back(kw.get<std::string>());
        }
        if (!j.contains("sample_queries") || !j["sample_queries"].is_array()) {
            throw Error(path.string() + ":" + std::to_string(lineno) +
                        ": missing 'sample_queries' array");
        }
        for (const auto& list : j["sample_queries"]) {
            if (!list.is_array()) {
                throw Error(path.string() + ":" + std::to_string(lineno) +
                            ": sample_queries must be a list of lists");
            }
            std::vector<std::string> qs;
            for (const auto& q : list) {
                if (!q.is_string()) {
                    throw Error(path.string() + ":" + std::to_string(lineno) +
                                ": sample queries must be strings");
                }
                qs.push_back(q.get<std::string>());
            }
            a.sample_queries.push_back(std::move(qs));
        }
        if (a.answer_id.empty() || a.text.empty()) {
            throw Error(path.string() + ":" + std::to_string(lineno) +
                        ": answer_id and text must be non-empty");
        }
        answers.push_back(std::move(a));
    }
    try {
        return TrainingCorpus(std::move(answers), variant);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

EvalCorpus load_eval_corpus(const std::filesystem::path& path, const TrainingCorpus* reference) {
    std::istringstream in(read_file(path));
    EvalCorpus corpus;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        nlohmann::json j = parse_line(line, lineno, path);
        EvalItem item;
        item.query = require_string(j, "query", lineno, path);
        if (item.query.empty()) {
            throw Error(path.string() + ":" + std::to_string(lineno) + ": empty query");
        }
        if (!j.contains("answer_ids") || !j["answer_ids"].is_array()) {
            throw Error(path.string() + ":" + std::to_string(lineno) +
                        ": missing 'answer_ids' array");
        }
        for (const auto& id : j["answer_ids"]) {
            if (!id.is_string()) {
                throw Error(path.string() + ":" + std::to_string(lineno) +
                            ": answer_ids must be strings");
            }
            item.answer_ids.push_back(id.get<std::string>());
        }
        if (item.answer_ids.empty() || item.answer_ids.size() > 3) {
            throw Error(path.string() + ":" + std::to_string(lineno) +
                        ": answer_ids must contain 1..3 ids, got " +
                        std::to_string(item.answer_ids.size()));
        }
        if (reference != nullptr) {
            for (const auto& id : item.answer_ids) {
                if (!reference->contains(id)) {
                    throw Error(path.string() + ":" + std::to_string(lineno) +
                                ": unknown answer_id '" + id + "'");
                }
            }
        }
        corpus.items.push_back(std::move(item));
    }
    return corpus;
}

void save_training_corpus(const TrainingCorpus& corpus, const std::filesystem::path& path) {
    std::string out;
    for (const Answer& a : corpus.answers()) {
        nlohmann::ordered_json j;
        j["answer_id"] = a.answer_id;
        j["text"] = a.text;
        j["keywords"] = a.keywords;
        j["sample_queries"] = a.sample_queries;
        out += j.dump();
        out += '\n';
    }
    atomic_write_file(path, out);
}

void save_eval_corpus(const EvalCorpus& corpus, const std::filesystem::path& path) {
    std::string out;
    for (const EvalItem& item : corpus.items) {
        nlohmann::ordered_json j;
        j["query"] = item.query;
        j["answer_ids"] = item.answer_ids;
        out += j.dump();
        out += '\n';
    }
    atomic_write_file(path, out);
}

// ---- synthetic generator ---------------------------------------------------

namespace {

constexpr std::size_t kAnnotators = 2;

// Fillers mimic the open-ended function-word tail of real queries: the pool
// is large enough that any single filler stays too rare for a ranker to
// learn it carries no topic.
std::size_t filler_pool_size(const SynthConfig& c) {
    return std::max<std::size_t>(16, c.n_answers * 2);
}

// Answers come in groups of three sharing one keyword tuple, each member in
// a distinct canonical order. A bag-of-words ranker cannot tell the members
// apart; the answer text fixes one order, so n-gram features can.
constexpr std::size_t kTopicGroupSize = 3;

std::string make_word(Rng& rng, std::size_t min_syllables, std::size_t max_syllables) {
    static constexpr char kConsonants[] = "bdfghklmnprstvwz";
    static constexpr char kVowels[] = "aeiou";
    const std::size_t n_syll =
        min_syllables + rng.below(max_syllables - min_syllables + 1);
    std::string w;
    for (std::size_t s = 0; s < n_syll; ++s) {
        w.push_back(kConsonants[rng.below(sizeof(kConsonants) - 1)]);
        w.push_back(kVowels[rng.below(sizeof(kVowels) - 1)]);
    }
    if (rng.coin(0.4)) w.push_back(kConsonants[rng.below(sizeof(kConsonants) - 1)]);
    return w;
}

std::vector<std::string> make_unique_words(Rng& rng, std::size_t count, std::size_t min_syll,
                                           std::size_t max_syll,
                                           std::unordered_set<std::string>& used) {
    std::vector<std::string> out;
    out.reserve(count);
    while (out.size() < count) {
        std::string w = make_word(rng, min_syll, max_syll);
        if (used.insert(w).second) out.push_back(std::move(w));
    }
    return out;
}

void apply_typo(std::string& w, Rng& rng) {
    static constexpr char kLetters[] = "abcdefghijklmnopqrstuvwxyz";
    std::size_t op = rng.below(4);
    if (w.size() < 2 && (op == 1 || op == 3)) op = 0;
    switch (op) {
        case 0: {  // substitution
            const std::size_t pos = rng.below(w.size());
            w[pos] = kLetters[rng.below(26)];
            break;
        }
        case 1: {  // deletion
            w.erase(w.begin() + static_cast<std::ptrdiff_t>(rng.below(w.size())));
            break;
        }
        case 2: {  // insertion
            const std::size_t pos = rng.below(w.size() + 1);
            w.insert(w.begin() + static_cast<std::ptrdiff_t>(pos), kLetters[rng.below(26)]);
            break;
        }
        default: {  // transposition
            const std::size_t pos = rng.below(w.size() - 1);
            std::swap(w[pos], w[pos + 1]);
            break;
        }
    }
}

// Queries are thin slices of the keyword tuple: one to three keywords in
// canonical order (adjacent keywords stay adjacent, like in the answer text),
// fillers attached at the boundaries, then per-token typos.
std::string make_query(const std::vector<std::string>& keywords,
                       const std::vector<std::string>& fillers, const SynthConfig& cfg,
                       Rng& rng) {
    const std::size_t len = 1 + rng.below(std::min<std::size_t>(3, keywords.size()));
    std::vector<std::size_t> idx(keywords.size());
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    idx.resize(len);
    std::sort(idx.begin(), idx.end());

    std::vector<std::string> tokens;
    if (rng.coin(cfg.filler_rate)) tokens.push_back(fillers[rng.below(fillers.size())]);
    for (const std::size_t k : idx) tokens.push_back(keywords[k]);
    if (rng.coin(cfg.filler_rate)) tokens.push_back(fillers[rng.below(fillers.size())]);

    for (auto& t : tokens) {
        if (rng.coin(cfg.typo_rate)) apply_typo(t, rng);
    }

    std::string q;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) q += ' ';
        q += tokens[i];
    }
    return q;
}

std::string answer_id_for(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "a%05zu", index);
    return buf;
}

}  // namespace

std::pair<TrainingCorpus, EvalCorpus> generate_synthetic(const SynthConfig& config) {
    if (config.n_answers == 0) throw Error("generate_synthetic: n_answers must be positive");
    if (config.vocab_per_topic == 0) {
        throw Error("generate_synthetic: vocab_per_topic must be positive");
    }
    if (config.typo_rate < 0 || config.typo_rate > 1 || config.filler_rate < 0 ||
        config.filler_rate > 1) {
        throw Error("generate_synthetic: rates must be in [0,1]");
    }

    Rng rng(config.seed);
    std::unordered_set<std::string> used;
    const std::size_t n_groups =
        (config.n_answers + kTopicGroupSize - 1) / kTopicGroupSize;
    const std::vector<std::string> pool =
        make_unique_words(rng, n_groups * config.vocab_per_topic, 2, 3, used);
    const std::vector<std::string> fillers =
        make_unique_words(rng, filler_pool_size(config), 1, 1, used);

    std::vector<Answer> answers;
    answers.reserve(config.n_answers);
    std::vector<std::vector<std::string>> group_orders;
    for (std::size_t i = 0; i < config.n_answers; ++i) {
        Answer a;
        a.answer_id = answer_id_for(i);

        const std::size_t group = i / kTopicGroupSize;
        if (i % kTopicGroupSize == 0) group_orders.clear();
        std::vector<std::string> keywords(
            pool.begin() + static_cast<std::ptrdiff_t>(group * config.vocab_per_topic),
            pool.begin() + static_cast<std::ptrdiff_t>((group + 1) * config.vocab_per_topic));
        // a group member gets its own order of the shared tuple; retry a few
        // times to keep orders distinct when the tuple allows it
        for (int attempt = 0; attempt < 16; ++attempt) {
            rng.shuffle(keywords);
            if (std::find(group_orders.begin(), group_orders.end(), keywords) ==
                group_orders.end()) {
                break;
            }
        }
        group_orders.push_back(keywords);
        a.keywords = std::move(keywords);

        a.text.clear();
        for (const auto& kw : a.keywords) {
            if (!a.text.empty()) a.text += ' ';
            a.text += kw;
        }

        for (std::size_t u = 0; u < kAnnotators; ++u) {
            std::vector<std::string> qs;
            for (std::size_t q = 0; q < config.queries_per_answer; ++q) {
                qs.push_back(make_query(a.keywords, fillers, config, rng));
            }
            a.sample_queries.push_back(std::move(qs));
        }
        answers.push_back(std::move(a));
    }

    EvalCorpus eval;
    for (const Answer& a : answers) {
        for (std::size_t q = 0; q < config.queries_per_answer; ++q) {
            EvalItem item;
            item.query = make_query(a.keywords, fillers, config, rng);
            item.answer_ids = {a.answer_id};
            eval.items.push_back(std::move(item));
        }
    }

    return {TrainingCorpus(std::move(answers), CorpusVariant::KW_2U), std::move(eval)};
}

CorpusStats corpus_stats(const TrainingCorpus& corpus) {
    if (corpus.answers().empty()) throw Error("corpus_stats: empty corpus");
    CorpusStats stats;
    stats.n_answers = corpus.answers().size();

    std::vector<std::size_t> per_answer(stats.n_answers, 0);
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < corpus.answers().size(); ++i) {
        pos[corpus.answers()[i].answer_id] = i;
    }
    for (const auto& p : corpus.pairs()) {
        ++per_answer[pos[p.answer_id]];
        ++stats.n_pairs;
    }

    const double n = static_cast<double>(stats.n_answers);
    double mean = 0;
    for (const std::size_t c : per_answer) mean += static_cast<double>(c);
    mean /= n;
    double var = 0;
    for (const std::size_t c : per_answer) {
        const double d = static_cast<double>(c) - mean;
        var += d * d;
    }
    stats.mean_queries_per_answer = mean;
    stats.sd_queries_per_answer = std::sqrt(var / n);
    return stats;
}

std::vector<std::pair<std::string, std::uint64_t>> token_frequencies(const TrainingCorpus& corpus) {
    std::unordered_map<std::string, std::uint64_t> counts;
    std::vector<std::string> order;  // first-seen, for a deterministic result
    for (const auto& pair : corpus.pairs()) {
        for (const auto& tok : tokenize(pair.query)) {
            auto [it, inserted] = counts.emplace(tok, 0);
            if (inserted) order.push_back(tok);
            ++it->second;
        }
    }
    std::vector<std::pair<std::string, std::uint64_t>> out;
    out.reserve(order.size());
    for (const auto& tok : order) out.emplace_back(tok, counts[tok]);
    return out;
}

}  // namespace faqrank

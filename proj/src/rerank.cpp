#include "faqrank/rerank.hpp"

#include <algorithm>

#include "faqrank/features.hpp"
#include "faqrank/util.hpp"

namespace faqrank {

AnswerTexts answer_texts(const TrainingCorpus& corpus) {
    AnswerTexts out;
    out.reserve(corpus.answers().size());
    for (const Answer& a : corpus.answers()) out.emplace(a.answer_id, a.text);
    return out;
}

Reranker::Reranker(GbrtModel model, AnswerTexts texts)
    : model_(std::move(model)), texts_(std::move(texts)) {}

double Reranker::similarity(std::string_view query, const std::string& answer_id,
                            double confidence) const {
    const auto it = texts_.find(answer_id);
    if (it == texts_.end()) throw Error("reranker: unknown answer_id '" + answer_id + "'");
    const FeatureVector f = extract_features(query, it->second, confidence);
    return model_.predict(f);
}

RankedList Reranker::rerank(const RankedList& baseline) const {
    if (baseline.entries.empty()) throw Error("rerank: empty candidate list");

    std::vector<std::pair<double, std::size_t>> scored;  // (score, input position)
    scored.reserve(baseline.entries.size());
    for (std::size_t i = 0; i < baseline.entries.size(); ++i) {
        const RankedEntry& e = baseline.entries[i];
        scored.emplace_back(similarity(baseline.query, e.answer_id, e.confidence), i);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    RankedList out;
    out.query = baseline.query;
    out.entries.reserve(scored.size());
    for (const auto& [score, pos] : scored) {
        out.entries.push_back({baseline.entries[pos].answer_id, score});
    }
    return out;
}

void Reranker::save(const std::filesystem::path& path) const {
    nlohmann::ordered_json j;
    j["format_version"] = kArtifactFormatVersion;
    j["kind"] = "reranker";
    j["gbrt"] = model_.to_json();
    // stable key order for byte-identical artifacts
    std::vector<std::string> ids;
    ids.reserve(texts_.size());
    for (const auto& [id, text] : texts_) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    nlohmann::ordered_json texts = nlohmann::ordered_json::object();
    for (const auto& id : ids) texts[id] = texts_.at(id);
    j["answer_texts"] = std::move(texts);
    atomic_write_file(path, j.dump() + "\n");
}

Reranker Reranker::load(const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error("reranker artifact " + path.string() + ": not a JSON object");
    }
    const int version = j.value("format_version", -1);
    if (version != kArtifactFormatVersion) {
        throw Error("reranker artifact " + path.string() + ": incompatible format_version " +
                    std::to_string(version));
    }
    if (j.value("kind", "") != "reranker") {
        throw Error("reranker artifact " + path.string() + ": unexpected kind");
    }
    AnswerTexts texts;
    for (const auto& [id, text] : j.at("answer_texts").items()) {
        texts.emplace(id, text.get<std::string>());
    }
    return {GbrtModel::from_json(j.at("gbrt")), std::move(texts)};
}

RerankTrainingSet build_training_set(const Ranker& baseline,
                                     std::span<const QueryAnswerPair> pairs,
                                     const AnswerTexts& texts, std::uint64_t seed) {
    Rng rng(seed);
    RerankTrainingSet set;
    set.x = FeatureMatrix(kFeatureDim);

    for (const QueryAnswerPair& pair : pairs) {
        ++set.n_pairs;
        const RankedList top10 = baseline.rank(pair.query, 10);
        const RankedEntry* correct = top10.find(pair.answer_id);
        if (correct == nullptr) continue;  // skip rule
        if (top10.entries.size() < 2) continue;  // no negative available

        ++set.n_retained;
        const auto text_it = texts.find(pair.answer_id);
        if (text_it == texts.end()) {
            throw Error("build_training_set: no text for answer '" + pair.answer_id + "'");
        }
        set.x.push_row(extract_features(pair.query, text_it->second, correct->confidence));
        set.y.push_back(1.0);

        // negative: uniform over the remaining candidates
        const std::size_t pick = rng.below(top10.entries.size() - 1);
        std::size_t seen = 0;
        const RankedEntry* negative = nullptr;
        for (const RankedEntry& e : top10.entries) {
            if (e.answer_id == pair.answer_id) continue;
            if (seen++ == pick) {
                negative = &e;
                break;
            }
        }
        const auto neg_text = texts.find(negative->answer_id);
        if (neg_text == texts.end()) {
            throw Error("build_training_set: no text for answer '" + negative->answer_id + "'");
        }
        set.x.push_row(extract_features(pair.query, neg_text->second, negative->confidence));
        set.y.push_back(0.0);
    }
    return set;
}

}  // namespace faqrank

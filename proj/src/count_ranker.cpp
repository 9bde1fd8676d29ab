#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "faqrank/ranker.hpp"
#include "faqrank/util.hpp"

namespace faqrank {

const RankedEntry* RankedList::find(std::string_view answer_id) const {
    for (const auto& e : entries) {
        if (e.answer_id == answer_id) return &e;
    }
    return nullptr;
}

RankedList top_k(std::string_view query, const std::vector<std::string>& answer_ids,
                 const std::vector<double>& confidences, std::size_t k) {
    std::vector<std::uint32_t> order(answer_ids.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t take = std::min(k, order.size());
    const auto better = [&](std::uint32_t a, std::uint32_t b) {
        if (confidences[a] != confidences[b]) return confidences[a] > confidences[b];
        return answer_ids[a] < answer_ids[b];
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                      order.end(), better);

    RankedList out;
    out.query = std::string(query);
    out.entries.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.entries.push_back({answer_ids[order[i]], confidences[order[i]]});
    }
    return out;
}

CountRanker CountRanker::train(const TrainingCorpus& corpus) {
    if (corpus.answers().empty()) throw Error("count ranker: empty corpus");

    CountRanker ranker;
    ranker.vocab_ = Vocabulary::build(corpus);

    const auto pairs = corpus.pairs();
    const double n_docs = static_cast<double>(pairs.size());
    ranker.idf_.resize(ranker.vocab_.size());
    for (std::size_t t = 0; t < ranker.vocab_.size(); ++t) {
        // smoothed idf keeps every term positive, so a query identical to a
        // training query always reaches cosine 1 against its centroid
        ranker.idf_[t] =
            std::log((1.0 + n_docs) / (1.0 + static_cast<double>(ranker.vocab_.df(
                                                 static_cast<std::uint32_t>(t))))) +
            1.0;
    }

    std::map<std::string, std::map<std::uint32_t, double>> centroids;  // id -> accumulated
    std::map<std::string, std::size_t> query_counts;
    for (const auto& pair : pairs) {
        const CountVector counts = bow_vector(tokenize(pair.query), ranker.vocab_);
        double norm = 0;
        std::vector<std::pair<std::uint32_t, double>> weighted;
        weighted.reserve(counts.size());
        for (const auto& [term, count] : counts) {
            const double w = static_cast<double>(count) * ranker.idf_[term];
            weighted.emplace_back(term, w);
            norm += w * w;
        }
        ++query_counts[pair.answer_id];
        if (norm == 0) continue;
        norm = std::sqrt(norm);
        auto& centroid = centroids[pair.answer_id];
        for (const auto& [term, w] : weighted) centroid[term] += w / norm;
    }

    ranker.centroid_offsets_.push_back(0);
    for (const Answer& a : corpus.answers()) {
        ranker.answer_ids_.push_back(a.answer_id);
        const auto it = centroids.find(a.answer_id);
        if (it != centroids.end()) {
            const double n_queries = static_cast<double>(query_counts[a.answer_id]);
            for (const auto& [term, w] : it->second) {
                ranker.centroid_terms_.push_back(term);
                ranker.centroid_weights_.push_back(w / n_queries);
            }
        }
        ranker.centroid_offsets_.push_back(ranker.centroid_terms_.size());
    }
    return ranker;
}

std::vector<double> CountRanker::query_vector(std::string_view query) const {
    std::vector<double> dense(vocab_.size(), 0.0);
    for (const auto& [term, count] : bow_vector(tokenize(query), vocab_)) {
        dense[term] = static_cast<double>(count) * idf_[term];
    }
    return dense;
}

namespace {

double cosine_against_centroid(const std::vector<double>& query, double query_norm,
                               const std::uint32_t* terms, const double* weights,
                               std::size_t len) {
    if (query_norm == 0 || len == 0) return 0.0;
    double dot = 0, cnorm = 0;
    for (std::size_t i = 0; i < len; ++i) {
        dot += weights[i] * query[terms[i]];
        cnorm += weights[i] * weights[i];
    }
    if (cnorm == 0 || dot == 0) return 0.0;
    const double cos = dot / (query_norm * std::sqrt(cnorm));
    return std::clamp(cos, 0.0, 1.0);
}

}  // namespace

std::vector<double> CountRanker::score_all(std::string_view query) const {
    const std::vector<double> q = query_vector(query);
    double norm = 0;
    for (const double v : q) norm += v * v;
    norm = std::sqrt(norm);

    std::vector<double> scores(answer_ids_.size());
    const auto n = static_cast<std::ptrdiff_t>(answer_ids_.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t a = 0; a < n; ++a) {
        const auto i = static_cast<std::size_t>(a);
        const std::size_t begin = centroid_offsets_[i];
        scores[i] = cosine_against_centroid(q, norm, centroid_terms_.data() + begin,
                                            centroid_weights_.data() + begin,
                                            centroid_offsets_[i + 1] - begin);
    }
    return scores;
}

std::vector<double> CountRanker::score_all_serial(std::string_view query) const {
    const std::vector<double> q = query_vector(query);
    double norm = 0;
    for (const double v : q) norm += v * v;
    norm = std::sqrt(norm);

    std::vector<double> scores(answer_ids_.size());
    for (std::size_t i = 0; i < answer_ids_.size(); ++i) {
        const std::size_t begin = centroid_offsets_[i];
        scores[i] = cosine_against_centroid(q, norm, centroid_terms_.data() + begin,
                                            centroid_weights_.data() + begin,
                                            centroid_offsets_[i + 1] - begin);
    }
    return scores;
}

RankedList CountRanker::rank(std::string_view query, std::size_t k) const {
    if (k == 0) throw Error("rank: k must be positive");
    return top_k(query, answer_ids_, score_all(query), k);
}

nlohmann::ordered_json CountRanker::to_json() const {
    nlohmann::ordered_json j;
    j["vocab"] = vocab_.terms();
    nlohmann::ordered_json df = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < vocab_.size(); ++t) df.push_back(vocab_.df(static_cast<std::uint32_t>(t)));
    j["df"] = std::move(df);
    j["idf"] = idf_;
    j["answer_ids"] = answer_ids_;
    j["centroid_offsets"] = centroid_offsets_;
    j["centroid_terms"] = centroid_terms_;
    j["centroid_weights"] = centroid_weights_;
    return j;
}

CountRanker CountRanker::from_json(const nlohmann::json& j) {
    CountRanker r;
    r.vocab_ = Vocabulary::from_terms(j.at("vocab").get<std::vector<std::string>>(),
                                      j.at("df").get<std::vector<std::uint32_t>>());
    r.idf_ = j.at("idf").get<std::vector<double>>();
    r.answer_ids_ = j.at("answer_ids").get<std::vector<std::string>>();
    r.centroid_offsets_ = j.at("centroid_offsets").get<std::vector<std::size_t>>();
    r.centroid_terms_ = j.at("centroid_terms").get<std::vector<std::uint32_t>>();
    r.centroid_weights_ = j.at("centroid_weights").get<std::vector<double>>();
    if (r.centroid_offsets_.size() != r.answer_ids_.size() + 1) {
        throw Error("count ranker artifact: inconsistent centroid offsets");
    }
    return r;
}

}  // namespace faqrank

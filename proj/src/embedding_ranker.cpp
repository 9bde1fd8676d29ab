#include <algorithm>
#include <cmath>
#include <numeric>

#include "faqrank/ranker.hpp"
#include "faqrank/util.hpp"

namespace faqrank {

namespace {

constexpr double kNormEps = 1e-12;

double dot(const double* a, const double* b, std::size_t d) {
    double s = 0;
    for (std::size_t i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
}

double norm(const double* a, std::size_t d) { return std::sqrt(dot(a, a, d)); }

}  // namespace

EmbeddingRanker EmbeddingRanker::train(const TrainingCorpus& corpus, const EmbedParams& params) {
    if (corpus.answers().empty()) throw Error("embedding ranker: empty corpus");
    if (params.epochs < 1 || params.dim < 1 || params.negatives_per_sample < 1 ||
        params.learning_rate <= 0) {
        throw Error("embedding ranker: invalid parameters");
    }

    EmbeddingRanker ranker;
    ranker.params_ = params;
    ranker.vocab_ = Vocabulary::build(corpus);
    for (const Answer& a : corpus.answers()) ranker.answer_ids_.push_back(a.answer_id);

    const auto d = static_cast<std::size_t>(params.dim);
    const std::size_t n_answers = ranker.answer_ids_.size();

    Rng rng(params.seed);
    ranker.query_emb_.resize(ranker.vocab_.size() * d);
    ranker.answer_emb_.resize(n_answers * d);
    for (double& w : ranker.query_emb_) w = rng.range(-0.1, 0.1);
    for (double& w : ranker.answer_emb_) w = rng.range(-0.1, 0.1);

    // tokenized training pairs as vocabulary indices
    std::unordered_map<std::string, std::uint32_t> answer_pos;
    for (std::uint32_t i = 0; i < n_answers; ++i) answer_pos[ranker.answer_ids_[i]] = i;
    struct Sample {
        std::vector<std::uint32_t> tokens;
        std::uint32_t answer;
    };
    std::vector<Sample> samples;
    for (const auto& pair : corpus.pairs()) {
        Sample s;
        for (const auto& tok : tokenize(pair.query)) {
            if (auto idx = ranker.vocab_.lookup(tok)) s.tokens.push_back(*idx);
        }
        s.answer = answer_pos.at(pair.answer_id);
        if (!s.tokens.empty()) samples.push_back(std::move(s));
    }
    if (samples.empty()) throw Error("embedding ranker: no usable training queries");

    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> u(d), u_grad(d);
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0;
        for (const std::size_t si : order) {
            const Sample& s = samples[si];
            const double inv_m = 1.0 / static_cast<double>(s.tokens.size());
            std::fill(u.begin(), u.end(), 0.0);
            for (const std::uint32_t t : s.tokens) {
                const double* row = ranker.query_emb_.data() + t * d;
                for (std::size_t i = 0; i < d; ++i) u[i] += row[i];
            }
            for (std::size_t i = 0; i < d; ++i) u[i] *= inv_m;

            const double u_norm = norm(u.data(), d);
            if (u_norm < kNormEps || n_answers < 2) continue;

            double* pos = ranker.answer_emb_.data() + s.answer * d;
            const double pos_norm = norm(pos, d);
            if (pos_norm < kNormEps) continue;
            const double s_pos = dot(u.data(), pos, d) / (u_norm * pos_norm);

            std::fill(u_grad.begin(), u_grad.end(), 0.0);
            double pos_scale = 0;  // accumulated multiplier for the positive update
            bool any_violation = false;

            for (int neg = 0; neg < params.negatives_per_sample; ++neg) {
                std::uint32_t cand;
                do {
                    cand = static_cast<std::uint32_t>(rng.below(n_answers));
                } while (cand == s.answer);

                double* negv = ranker.answer_emb_.data() + cand * d;
                const double neg_norm = norm(negv, d);
                if (neg_norm < kNormEps) continue;
                const double s_neg = dot(u.data(), negv, d) / (u_norm * neg_norm);

                const double loss = params.margin - s_pos + s_neg;
                if (loss <= 0) continue;
                epoch_loss += loss;
                any_violation = true;
                pos_scale += 1.0;

                // descend the hinge: raise cos(u, pos), lower cos(u, neg)
                const double lr = params.learning_rate;
                for (std::size_t i = 0; i < d; ++i) {
                    const double ds_neg_dv = u[i] / (u_norm * neg_norm) -
                                             s_neg * negv[i] / (neg_norm * neg_norm);
                    const double ds_neg_du = negv[i] / (u_norm * neg_norm) -
                                             s_neg * u[i] / (u_norm * u_norm);
                    const double ds_pos_du =
                        pos[i] / (u_norm * pos_norm) - s_pos * u[i] / (u_norm * u_norm);
                    u_grad[i] += lr * (ds_pos_du - ds_neg_du);
                    negv[i] -= lr * ds_neg_dv;
                }
            }

            if (any_violation) {
                const double lr = params.learning_rate;
                for (std::size_t i = 0; i < d; ++i) {
                    const double ds_pos_dv =
                        u[i] / (u_norm * pos_norm) - s_pos * pos[i] / (pos_norm * pos_norm);
                    pos[i] += lr * pos_scale * ds_pos_dv;
                }
                for (const std::uint32_t t : s.tokens) {
                    double* row = ranker.query_emb_.data() + t * d;
                    for (std::size_t i = 0; i < d; ++i) row[i] += u_grad[i] * inv_m;
                }
            }
        }
        ranker.epoch_loss_.push_back(epoch_loss / static_cast<double>(samples.size()));
    }
    return ranker;
}

bool EmbeddingRanker::query_embedding(std::string_view query, std::vector<double>& out) const {
    const auto d = static_cast<std::size_t>(params_.dim);
    out.assign(d, 0.0);
    std::size_t m = 0;
    for (const auto& tok : tokenize(query)) {
        if (auto idx = vocab_.lookup(tok)) {
            const double* row = query_emb_.data() + *idx * d;
            for (std::size_t i = 0; i < d; ++i) out[i] += row[i];
            ++m;
        }
    }
    if (m == 0) return false;
    for (double& v : out) v /= static_cast<double>(m);
    return true;
}

std::vector<double> EmbeddingRanker::score_all(std::string_view query) const {
    const auto d = static_cast<std::size_t>(params_.dim);
    std::vector<double> scores(answer_ids_.size(), 0.0);
    std::vector<double> u;
    if (!query_embedding(query, u)) return scores;
    const double u_norm = norm(u.data(), d);
    if (u_norm < kNormEps) return scores;

    const auto n = static_cast<std::ptrdiff_t>(answer_ids_.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t a = 0; a < n; ++a) {
        const double* row = answer_emb_.data() + static_cast<std::size_t>(a) * d;
        const double a_norm = norm(row, d);
        scores[static_cast<std::size_t>(a)] =
            a_norm < kNormEps ? 0.0 : dot(u.data(), row, d) / (u_norm * a_norm);
    }
    return scores;
}

std::vector<double> EmbeddingRanker::score_all_serial(std::string_view query) const {
    const auto d = static_cast<std::size_t>(params_.dim);
    std::vector<double> scores(answer_ids_.size(), 0.0);
    std::vector<double> u;
    if (!query_embedding(query, u)) return scores;
    const double u_norm = norm(u.data(), d);
    if (u_norm < kNormEps) return scores;

    for (std::size_t a = 0; a < answer_ids_.size(); ++a) {
        const double* row = answer_emb_.data() + a * d;
        const double a_norm = norm(row, d);
        scores[a] = a_norm < kNormEps ? 0.0 : dot(u.data(), row, d) / (u_norm * a_norm);
    }
    return scores;
}

RankedList EmbeddingRanker::rank(std::string_view query, std::size_t k) const {
    if (k == 0) throw Error("rank: k must be positive");
    std::vector<double> scores = score_all(query);
    for (double& s : scores) s = (1.0 + std::clamp(s, -1.0, 1.0)) / 2.0;
    return top_k(query, answer_ids_, scores, k);
}

nlohmann::ordered_json EmbeddingRanker::to_json() const {
    nlohmann::ordered_json j;
    j["vocab"] = vocab_.terms();
    nlohmann::ordered_json df = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < vocab_.size(); ++t) {
        df.push_back(vocab_.df(static_cast<std::uint32_t>(t)));
    }
    j["df"] = std::move(df);
    j["answer_ids"] = answer_ids_;
    j["params"] = {{"epochs", params_.epochs},
                   {"dim", params_.dim},
                   {"margin", params_.margin},
                   {"negatives_per_sample", params_.negatives_per_sample},
                   {"learning_rate", params_.learning_rate},
                   {"seed", params_.seed}};
    j["query_embeddings"] = query_emb_;
    j["answer_embeddings"] = answer_emb_;
    j["epoch_loss"] = epoch_loss_;
    return j;
}

EmbeddingRanker EmbeddingRanker::from_json(const nlohmann::json& j) {
    EmbeddingRanker r;
    r.vocab_ = Vocabulary::from_terms(j.at("vocab").get<std::vector<std::string>>(),
                                      j.at("df").get<std::vector<std::uint32_t>>());
    r.answer_ids_ = j.at("answer_ids").get<std::vector<std::string>>();
    const auto& p = j.at("params");
    r.params_.epochs = p.at("epochs").get<int>();
    r.params_.dim = p.at("dim").get<int>();
    r.params_.margin = p.at("margin").get<double>();
    r.params_.negatives_per_sample = p.at("negatives_per_sample").get<int>();
    r.params_.learning_rate = p.at("learning_rate").get<double>();
    r.params_.seed = p.at("seed").get<std::uint64_t>();
    r.query_emb_ = j.at("query_embeddings").get<std::vector<double>>();
    r.answer_emb_ = j.at("answer_embeddings").get<std::vector<double>>();
    r.epoch_loss_ = j.at("epoch_loss").get<std::vector<double>>();
    const auto d = static_cast<std::size_t>(r.params_.dim);
    if (r.query_emb_.size() != r.vocab_.size() * d ||
        r.answer_emb_.size() != r.answer_ids_.size() * d) {
        throw Error("embedding ranker artifact: matrix shape mismatch");
    }
    return r;
}

}  // namespace faqrank

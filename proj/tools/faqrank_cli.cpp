// faqrank: retrieval-based FAQ answering with learned re-ranking.
//
// Subcommands: corpus-gen, train, rank, evaluate, spellcheck. Every command
// prints its effective configuration, so a run can be reproduced from its
// output alone; all randomness hangs off --seed.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "faqrank/corpus.hpp"
#include "faqrank/eval.hpp"
#include "faqrank/features.hpp"
#include "faqrank/ranker.hpp"
#include "faqrank/rerank.hpp"
#include "faqrank/spellcheck.hpp"
#include "faqrank/util.hpp"

namespace {

using nlohmann::ordered_json;

void print_config(const std::string& command, const ordered_json& config) {
    std::cout << "# faqrank " << command << " config: " << config.dump() << "\n";
}

struct CorpusOptions {
    std::string corpus_path;
    std::string eval_path;
    std::string variant = "kw+2u";
    bool synth = false;
    faqrank::SynthConfig synth_config;
};

void add_corpus_options(CLI::App* cmd, CorpusOptions& opts, bool need_eval) {
    auto* corpus = cmd->add_option("--corpus", opts.corpus_path, "answers.jsonl path");
    auto* synth = cmd->add_flag("--synth", opts.synth, "generate a synthetic corpus in memory");
    corpus->excludes(synth);
    synth->excludes(corpus);
    if (need_eval) {
        cmd->add_option("--eval", opts.eval_path, "eval.jsonl path")->excludes(synth);
    }
    cmd->add_option("--variant", opts.variant, "training corpus variant: kw|kw+1u|kw+2u")
        ->check(CLI::IsMember({"kw", "kw+1u", "kw+2u"}));
    cmd->add_option("--synth-answers", opts.synth_config.n_answers, "synthetic: answers");
    cmd->add_option("--synth-vocab", opts.synth_config.vocab_per_topic,
                    "synthetic: keywords per answer");
    cmd->add_option("--synth-queries", opts.synth_config.queries_per_answer,
                    "synthetic: queries per answer and annotator");
    cmd->add_option("--synth-typo", opts.synth_config.typo_rate, "synthetic: typo rate");
    cmd->add_option("--synth-filler", opts.synth_config.filler_rate, "synthetic: filler rate");
    cmd->add_option("--synth-seed", opts.synth_config.seed, "synthetic: generator seed");
}

struct LoadedCorpora {
    faqrank::TrainingCorpus training;
    faqrank::EvalCorpus eval;
};

LoadedCorpora load_corpora(const CorpusOptions& opts, bool need_eval) {
    const faqrank::CorpusVariant variant = faqrank::variant_from_string(opts.variant);
    if (opts.synth) {
        auto [training, eval] = faqrank::generate_synthetic(opts.synth_config);
        return {training.with_variant(variant), std::move(eval)};
    }
    if (opts.corpus_path.empty()) {
        throw faqrank::Error("either --corpus or --synth is required");
    }
    faqrank::TrainingCorpus training = faqrank::load_training_corpus(opts.corpus_path, variant);
    faqrank::EvalCorpus eval;
    if (need_eval) {
        if (opts.eval_path.empty()) throw faqrank::Error("--eval is required");
        eval = faqrank::load_eval_corpus(opts.eval_path, &training);
    }
    return {std::move(training), std::move(eval)};
}

ordered_json corpus_config_json(const CorpusOptions& opts) {
    ordered_json j;
    if (opts.synth) {
        j["source"] = "synthetic";
        j["n_answers"] = opts.synth_config.n_answers;
        j["vocab_per_topic"] = opts.synth_config.vocab_per_topic;
        j["queries_per_answer"] = opts.synth_config.queries_per_answer;
        j["typo_rate"] = opts.synth_config.typo_rate;
        j["filler_rate"] = opts.synth_config.filler_rate;
        j["synth_seed"] = opts.synth_config.seed;
    } else {
        j["source"] = "files";
        j["corpus"] = opts.corpus_path;
        if (!opts.eval_path.empty()) j["eval"] = opts.eval_path;
    }
    j["variant"] = opts.variant;
    return j;
}

struct RankerOptions {
    std::string kind = "embedding";
    faqrank::EmbedParams embed;
    CLI::Option* epochs_option = nullptr;
};

void add_ranker_options(CLI::App* cmd, RankerOptions& opts) {
    cmd->add_option("--ranker", opts.kind, "baseline ranker kind: count|embedding")
        ->check(CLI::IsMember({"count", "embedding"}));
    opts.epochs_option =
        cmd->add_option("--epochs", opts.embed.epochs, "embedding training epochs");
    cmd->add_option("--dim", opts.embed.dim, "embedding dimension");
    cmd->add_option("--margin", opts.embed.margin, "ranking loss margin");
    cmd->add_option("--negatives", opts.embed.negatives_per_sample, "negatives per sample");
    cmd->add_option("--learning-rate", opts.embed.learning_rate, "embedding learning rate");
}

std::unique_ptr<faqrank::Ranker> train_ranker(const RankerOptions& opts,
                                              const faqrank::TrainingCorpus& corpus,
                                              std::uint64_t seed) {
    if (opts.kind == "count") {
        if (opts.epochs_option != nullptr && opts.epochs_option->count() > 0) {
            std::cerr << "warning: --epochs has no effect on the count ranker\n";
        }
        return std::make_unique<faqrank::CountRanker>(faqrank::CountRanker::train(corpus));
    }
    faqrank::EmbedParams params = opts.embed;
    params.seed = seed;
    return std::make_unique<faqrank::EmbeddingRanker>(
        faqrank::EmbeddingRanker::train(corpus, params));
}

ordered_json ranker_config_json(const RankerOptions& opts, std::uint64_t seed) {
    ordered_json j;
    j["ranker"] = opts.kind;
    if (opts.kind == "embedding") {
        j["epochs"] = opts.embed.epochs;
        j["dim"] = opts.embed.dim;
        j["margin"] = opts.embed.margin;
        j["negatives_per_sample"] = opts.embed.negatives_per_sample;
        j["learning_rate"] = opts.embed.learning_rate;
    }
    j["seed"] = seed;
    return j;
}

std::optional<faqrank::SpellDictionary> make_dictionary(const std::string& spellcheck,
                                                        const std::string& dict_path,
                                                        const faqrank::TrainingCorpus* corpus) {
    if (spellcheck != "on") return std::nullopt;
    if (!dict_path.empty()) {
        return faqrank::SpellDictionary::from_frequency_file(dict_path);
    }
    if (corpus == nullptr) {
        throw faqrank::Error("--spellcheck on needs --dict when no corpus is loaded");
    }
    // fall back to the training corpus' own token frequencies
    return faqrank::SpellDictionary::from_counts(faqrank::token_frequencies(*corpus));
}

void print_ranked(const faqrank::RankedList& list) {
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        std::printf("%2zu. %-12s %.6f\n", i + 1, list.entries[i].answer_id.c_str(),
                    list.entries[i].confidence);
    }
}

// ---- subcommands -----------------------------------------------------------

int cmd_corpus_gen(const faqrank::SynthConfig& config, const std::string& out_dir,
                   bool emit_dict) {
    ordered_json cfg;
    cfg["n_answers"] = config.n_answers;
    cfg["vocab_per_topic"] = config.vocab_per_topic;
    cfg["queries_per_answer"] = config.queries_per_answer;
    cfg["typo_rate"] = config.typo_rate;
    cfg["filler_rate"] = config.filler_rate;
    cfg["seed"] = config.seed;
    cfg["out"] = out_dir;
    print_config("corpus-gen", cfg);

    const auto [training, eval] = faqrank::generate_synthetic(config);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    faqrank::save_training_corpus(training, dir / "answers.jsonl");
    faqrank::save_eval_corpus(eval, dir / "eval.jsonl");
    if (emit_dict) {
        std::string freq;
        for (const auto& [word, count] : faqrank::token_frequencies(training)) {
            freq += word + " " + std::to_string(count) + "\n";
        }
        faqrank::atomic_write_file(dir / "freq.txt", freq);
    }

    const faqrank::CorpusStats stats = faqrank::corpus_stats(training);
    std::printf("answers: %zu\n", stats.n_answers);
    std::printf("training pairs (%s): %zu\n", to_string(training.variant()), stats.n_pairs);
    std::printf("queries per answer: mean %.4f, sd %.4f\n", stats.mean_queries_per_answer,
                stats.sd_queries_per_answer);
    std::printf("eval queries: %zu\n", eval.items.size());
    return 0;
}

int cmd_train(const CorpusOptions& corpus_opts, const RankerOptions& ranker_opts,
              std::uint64_t seed, const std::string& out_path) {
    ordered_json cfg = corpus_config_json(corpus_opts);
    cfg.update(ranker_config_json(ranker_opts, seed));
    cfg["out"] = out_path;
    print_config("train", cfg);

    const LoadedCorpora corpora = load_corpora(corpus_opts, false);
    const auto ranker = train_ranker(ranker_opts, corpora.training, seed);
    faqrank::save_ranker(*ranker, out_path);
    std::printf("trained %s ranker over %zu answers -> %s\n", ranker->kind(),
                ranker->answer_ids().size(), out_path.c_str());
    return 0;
}

int cmd_rank(const std::string& model_path, const std::string& rerank_path,
             const std::string& spellcheck, const std::string& dict_path,
             const std::string& query, std::size_t k) {
    ordered_json cfg;
    cfg["model"] = model_path;
    if (!rerank_path.empty()) cfg["rerank"] = rerank_path;
    cfg["spellcheck"] = spellcheck;
    if (!dict_path.empty()) cfg["dict"] = dict_path;
    cfg["k"] = k;
    print_config("rank", cfg);

    const auto ranker = faqrank::load_ranker(model_path);
    std::optional<faqrank::Reranker> reranker;
    if (!rerank_path.empty()) reranker.emplace(faqrank::Reranker::load(rerank_path));
    std::optional<faqrank::SpellDictionary> dict;
    if (spellcheck == "on") {
        if (dict_path.empty()) throw faqrank::Error("--spellcheck on requires --dict");
        dict.emplace(faqrank::SpellDictionary::from_frequency_file(dict_path));
    }

    const auto answer_one = [&](const std::string& q) {
        std::string effective = q;
        if (dict) {
            effective = dict->correct_query(q);
            if (effective != q) std::printf("corrected: %s\n", effective.c_str());
        }
        faqrank::RankedList list = ranker->rank(effective, k);
        if (reranker) {
            list.query = q;  // similarity features see the raw query
            list = reranker->rerank(list);
        }
        print_ranked(list);
    };

    if (!query.empty()) {
        answer_one(query);
        return 0;
    }
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        answer_one(line);
        std::printf("\n");
    }
    return 0;
}

int cmd_evaluate(const CorpusOptions& corpus_opts, const RankerOptions& ranker_opts,
                 const std::string& model_path, const std::string& spellcheck,
                 const std::string& dict_path, const faqrank::CrossValConfig& cv_base,
                 std::uint64_t seed, const std::string& out_path,
                 const std::string& reranker_out) {
    faqrank::CrossValConfig cv = cv_base;
    cv.seed = seed;
    cv.spellcheck = spellcheck == "on";
    cv.gbrt.seed = seed;

    ordered_json cfg = corpus_config_json(corpus_opts);
    if (model_path.empty()) {
        cfg.update(ranker_config_json(ranker_opts, seed));
    } else {
        cfg["model"] = model_path;
    }
    cfg["spellcheck"] = spellcheck;
    if (!dict_path.empty()) cfg["dict"] = dict_path;
    cfg["folds"] = cv.folds;
    cfg["repetitions"] = cv.repetitions;
    cfg["gbrt"] = {{"n_trees", cv.gbrt.n_trees},
                   {"max_depth", cv.gbrt.max_depth},
                   {"learning_rate", cv.gbrt.learning_rate},
                   {"min_samples_leaf", cv.gbrt.min_samples_leaf}};
    cfg["seed"] = seed;
    cfg["out"] = out_path;
    print_config("evaluate", cfg);

    const LoadedCorpora corpora = load_corpora(corpus_opts, true);
    if (corpora.eval.items.empty()) throw faqrank::Error("evaluation corpus is empty");

    std::unique_ptr<faqrank::Ranker> ranker;
    if (!model_path.empty()) {
        ranker = faqrank::load_ranker(model_path);
    } else {
        ranker = train_ranker(ranker_opts, corpora.training, seed);
    }

    const std::optional<faqrank::SpellDictionary> dict =
        make_dictionary(spellcheck, dict_path, &corpora.training);

    const faqrank::EvalReport full =
        faqrank::evaluate_baseline(*ranker, corpora.eval, dict ? &*dict : nullptr);
    const faqrank::CrossValResult cv_result =
        faqrank::cross_validate(*ranker, corpora.eval, faqrank::answer_texts(corpora.training),
                                cv, dict ? &*dict : nullptr);

    // table mirroring the baseline/re-ranking comparison
    ordered_json imp_topn = ordered_json::object();
    ordered_json improvement;
    std::printf("%-10s %12s %12s %12s\n", "metric", "baseline", "re-ranking", "improvement");
    const auto print_row = [](const std::string& label, double base, double rr,
                              const std::optional<double>& rel) {
        char buf[32];
        if (rel) {
            std::snprintf(buf, sizeof(buf), "%+.2f%%", *rel * 100.0);
        } else {
            std::snprintf(buf, sizeof(buf), "n/a");
        }
        std::printf("%-10s %12.4f %12.4f %12s\n", label.c_str(), base, rr, buf);
    };
    for (std::size_t n = 1; n <= 10; ++n) {
        const double base = cv_result.baseline.top_n[n - 1];
        const double rr = cv_result.reranked.top_n[n - 1];
        std::optional<double> rel;
        if (base > 0) rel = faqrank::relative_improvement(base, rr);
        print_row("top-" + std::to_string(n), base, rr, rel);
        if (rel) {
            imp_topn[std::to_string(n)] = *rel;
        } else {
            imp_topn[std::to_string(n)] = nullptr;
        }
    }
    {
        const double base = cv_result.baseline.mrr_at_10;
        const double rr = cv_result.reranked.mrr_at_10;
        std::optional<double> rel;
        if (base > 0) rel = faqrank::relative_improvement(base, rr);
        print_row("MRR@10", base, rr, rel);
        improvement["top_n"] = std::move(imp_topn);
        if (rel) {
            improvement["mrr_at_10"] = *rel;
        } else {
            improvement["mrr_at_10"] = nullptr;
        }
    }

    if (!reranker_out.empty()) {
        // deployable similarity model trained on the full evaluation corpus
        std::vector<faqrank::QueryAnswerPair> pairs;
        std::vector<std::string> queries;
        for (const auto& item : corpora.eval.items) queries.push_back(item.query);
        if (dict) queries = dict->correct_queries(queries);
        for (std::size_t i = 0; i < corpora.eval.items.size(); ++i) {
            for (const auto& id : corpora.eval.items[i].answer_ids) {
                pairs.push_back({queries[i], id});
            }
        }
        const faqrank::AnswerTexts texts = faqrank::answer_texts(corpora.training);
        const faqrank::RerankTrainingSet set =
            faqrank::build_training_set(*ranker, pairs, texts, seed);
        const faqrank::Reranker reranker{
            set.y.empty() ? faqrank::GbrtModel::constant(0.5, faqrank::kFeatureDim, cv.gbrt)
                          : faqrank::GbrtModel::fit(set.x, set.y, cv.gbrt),
            texts};
        reranker.save(reranker_out);
        std::printf("reranker trained on %zu retained pairs -> %s\n", set.n_retained,
                    reranker_out.c_str());
    }

    ordered_json out;
    out["config"] = cfg;
    out["baseline_full_corpus"] = full.to_json();
    out["cross_validation"] = {{"baseline", cv_result.baseline.to_json()},
                               {"reranked", cv_result.reranked.to_json()}};
    out["relative_improvement"] = std::move(improvement);
    faqrank::atomic_write_file(out_path, out.dump(2) + "\n");
    std::printf("report -> %s\n", out_path.c_str());
    return 0;
}

int cmd_spellcheck(const std::string& dict_path, const std::string& query) {
    ordered_json cfg;
    cfg["dict"] = dict_path;
    print_config("spellcheck", cfg);
    const faqrank::SpellDictionary dict =
        faqrank::SpellDictionary::from_frequency_file(dict_path);
    if (!query.empty()) {
        std::printf("%s\n", dict.correct_query(query).c_str());
        return 0;
    }
    std::string line;
    while (std::getline(std::cin, line)) {
        std::printf("%s\n", dict.correct_query(line).c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"retrieval-based FAQ answering with GBRT re-ranking"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a TOML/INI config file");

    // corpus-gen
    auto* gen = app.add_subcommand("corpus-gen", "write a synthetic answers/eval corpus");
    faqrank::SynthConfig synth;
    std::string gen_out = ".";
    bool emit_dict = false;
    gen->add_option("--answers", synth.n_answers, "number of answers");
    gen->add_option("--vocab", synth.vocab_per_topic, "keywords per answer");
    gen->add_option("--queries", synth.queries_per_answer, "queries per answer and annotator");
    gen->add_option("--typo", synth.typo_rate, "per-token typo probability");
    gen->add_option("--filler", synth.filler_rate, "filler insertion probability");
    gen->add_option("--seed", synth.seed, "generator seed");
    gen->add_option("--out", gen_out, "output directory");
    gen->add_flag("--emit-dict", emit_dict, "also write freq.txt token frequencies");

    // train
    auto* train = app.add_subcommand("train", "train a baseline ranker");
    CorpusOptions train_corpus;
    RankerOptions train_ranker_opts;
    std::uint64_t train_seed = 0;
    std::string train_out = "model.json";
    add_corpus_options(train, train_corpus, false);
    add_ranker_options(train, train_ranker_opts);
    train->add_option("--seed", train_seed, "training seed");
    train->add_option("--out", train_out, "model artifact path");

    // rank
    auto* rank = app.add_subcommand("rank", "rank answers for a query (or stdin REPL)");
    std::string rank_model, rank_rerank, rank_query, rank_dict;
    std::string rank_spell = "off";
    std::size_t rank_k = 10;
    rank->add_option("--model", rank_model, "ranker artifact")->required();
    rank->add_option("--rerank", rank_rerank, "reranker artifact");
    rank->add_option("--query", rank_query, "single query (REPL on stdin when absent)");
    rank->add_option("--spellcheck", rank_spell, "on|off")->check(CLI::IsMember({"on", "off"}));
    rank->add_option("--dict", rank_dict, "word-frequency file for the spellchecker");
    rank->add_option("--k", rank_k, "number of results");

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "evaluate baseline and re-ranking");
    CorpusOptions eval_corpus;
    RankerOptions eval_ranker_opts;
    faqrank::CrossValConfig cv;
    std::string eval_model, eval_dict, eval_out = "report.json", eval_reranker_out;
    std::string eval_spell = "off";
    std::uint64_t eval_seed = 0;
    add_corpus_options(eval, eval_corpus, true);
    add_ranker_options(eval, eval_ranker_opts);
    eval->add_option("--model", eval_model, "pre-trained ranker artifact (skips training)");
    eval->add_option("--spellcheck", eval_spell, "on|off")->check(CLI::IsMember({"on", "off"}));
    eval->add_option("--dict", eval_dict,
                     "word-frequency file (defaults to corpus token frequencies)");
    eval->add_option("--folds", cv.folds, "cross-validation folds");
    eval->add_option("--reps", cv.repetitions, "cross-validation repetitions");
    eval->add_option("--trees", cv.gbrt.n_trees, "re-ranker boosting stages");
    eval->add_option("--depth", cv.gbrt.max_depth, "re-ranker tree depth");
    eval->add_option("--gbrt-learning-rate", cv.gbrt.learning_rate, "re-ranker shrinkage");
    eval->add_option("--seed", eval_seed, "evaluation seed");
    eval->add_option("--out", eval_out, "report JSON path");
    eval->add_option("--reranker-out", eval_reranker_out,
                     "train a final reranker on the whole eval corpus and save it");

    // spellcheck
    auto* spell = app.add_subcommand("spellcheck", "correct queries (single or stdin REPL)");
    std::string spell_dict, spell_query;
    spell->add_option("--dict", spell_dict, "word-frequency file")->required();
    spell->add_option("--query", spell_query, "single query (REPL on stdin when absent)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_corpus_gen(synth, gen_out, emit_dict);
        if (train->parsed()) {
            return cmd_train(train_corpus, train_ranker_opts, train_seed, train_out);
        }
        if (rank->parsed()) {
            return cmd_rank(rank_model, rank_rerank, rank_spell, rank_dict, rank_query, rank_k);
        }
        if (eval->parsed()) {
            return cmd_evaluate(eval_corpus, eval_ranker_opts, eval_model, eval_spell, eval_dict,
                                cv, eval_seed, eval_out, eval_reranker_out);
        }
        if (spell->parsed()) return cmd_spellcheck(spell_dict, spell_query);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

// Micro-benchmark comparing the OpenMP kernels against their serial
// reference implementations on a synthetic corpus. The parallel variants
// must also produce identical output, which is checked on the fly.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "faqrank/corpus.hpp"
#include "faqrank/eval.hpp"
#include "faqrank/ranker.hpp"
#include "faqrank/spellcheck.hpp"

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    std::vector<double> samples;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

void report(const char* name, double serial_ms, double parallel_ms, bool equal) {
    std::printf("%-28s %10.2f ms %10.2f ms %7.2fx  %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, equal ? "outputs equal" : "OUTPUT MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP kernel benchmark"};
    std::size_t n_answers = 2000;
    std::size_t n_queries = 2000;
    int reps = 5;
    app.add_option("--answers", n_answers, "synthetic corpus size");
    app.add_option("--queries", n_queries, "number of benchmark queries");
    app.add_option("--reps", reps, "repetitions per measurement (median)");
    CLI11_PARSE(app, argc, argv);

    std::printf("threads: %d\n", omp_get_max_threads());

    faqrank::SynthConfig config;
    config.n_answers = n_answers;
    config.vocab_per_topic = 5;
    config.queries_per_answer = 3;
    config.typo_rate = 0.2;
    config.filler_rate = 0.3;
    config.seed = 7;
    const auto [corpus, eval] = faqrank::generate_synthetic(config);

    std::vector<std::string> queries;
    for (const auto& item : eval.items) {
        queries.push_back(item.query);
        if (queries.size() == n_queries) break;
    }

    std::printf("%zu answers, %zu queries\n\n", corpus.answers().size(), queries.size());
    std::printf("%-28s %13s %13s %8s\n", "kernel", "serial", "openmp", "speedup");

    const faqrank::CountRanker count = faqrank::CountRanker::train(corpus);
    {
        std::vector<double> serial_out, parallel_out;
        const double s = time_ms(
            [&] {
                for (const auto& q : queries) serial_out = count.score_all_serial(q);
            },
            reps);
        const double p = time_ms(
            [&] {
                for (const auto& q : queries) parallel_out = count.score_all(q);
            },
            reps);
        report("count score_all", s, p, serial_out == parallel_out);
    }

    faqrank::EmbedParams embed_params;
    embed_params.epochs = 5;
    embed_params.seed = 7;
    const faqrank::EmbeddingRanker embed = faqrank::EmbeddingRanker::train(corpus, embed_params);
    {
        std::vector<double> serial_out, parallel_out;
        const double s = time_ms(
            [&] {
                for (const auto& q : queries) serial_out = embed.score_all_serial(q);
            },
            reps);
        const double p = time_ms(
            [&] {
                for (const auto& q : queries) parallel_out = embed.score_all(q);
            },
            reps);
        report("embedding score_all", s, p, serial_out == parallel_out);
    }

    {
        std::vector<faqrank::RankedList> serial_out, parallel_out;
        const double s =
            time_ms([&] { serial_out = faqrank::rank_all_serial(count, queries, 10); }, reps);
        const double p = time_ms([&] { parallel_out = faqrank::rank_all(count, queries, 10); },
                                 reps);
        bool equal = serial_out.size() == parallel_out.size();
        for (std::size_t i = 0; equal && i < serial_out.size(); ++i) {
            for (std::size_t k = 0; equal && k < serial_out[i].entries.size(); ++k) {
                equal = serial_out[i].entries[k].answer_id ==
                            parallel_out[i].entries[k].answer_id &&
                        serial_out[i].entries[k].confidence ==
                            parallel_out[i].entries[k].confidence;
            }
        }
        report("rank_all (count, k=10)", s, p, equal);
    }

    {
        const faqrank::SpellDictionary dict =
            faqrank::SpellDictionary::from_counts(faqrank::token_frequencies(corpus), 2);
        std::vector<std::string> serial_out, parallel_out;
        const double s =
            time_ms([&] { serial_out = dict.correct_queries_serial(queries); }, reps);
        const double p = time_ms([&] { parallel_out = dict.correct_queries(queries); }, reps);
        report("spellcheck correct_queries", s, p, serial_out == parallel_out);
    }

    return 0;
}

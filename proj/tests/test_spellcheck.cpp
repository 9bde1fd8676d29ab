#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "faqrank/spellcheck.hpp"
#include "faqrank/util.hpp"

using namespace faqrank;

namespace {

using Counts = std::vector<std::pair<std::string, std::uint64_t>>;

// exponential-time reference distance for short strings; validates the DP
std::uint32_t slow_dl(std::u32string_view a, std::u32string_view b) {
    if (a.empty()) return static_cast<std::uint32_t>(b.size());
    if (b.empty()) return static_cast<std::uint32_t>(a.size());
    std::uint32_t best = slow_dl(a.substr(0, a.size() - 1), b) + 1;
    best = std::min(best, slow_dl(a, b.substr(0, b.size() - 1)) + 1);
    best = std::min(best, slow_dl(a.substr(0, a.size() - 1), b.substr(0, b.size() - 1)) +
                              (a.back() == b.back() ? 0u : 1u));
    if (a.size() >= 2 && b.size() >= 2 && a[a.size() - 1] == b[b.size() - 2] &&
        a[a.size() - 2] == b[b.size() - 1]) {
        best = std::min(best, slow_dl(a.substr(0, a.size() - 2), b.substr(0, b.size() - 2)) + 1);
    }
    return best;
}

std::string random_word(Rng& rng, std::size_t max_len) {
    std::string w;
    const std::size_t len = 1 + rng.below(max_len);
    for (std::size_t i = 0; i < len; ++i) {
        w.push_back(static_cast<char>('a' + rng.below(6)));  // small alphabet forces collisions
    }
    return w;
}

// brute-force corrector: scan the whole dictionary, no delete index
std::string oracle_correct(const Counts& dict, std::uint32_t max_edit, const std::string& token) {
    const std::u32string tok = utf8_decode(token);
    bool found = false;
    std::uint32_t best_d = 0;
    std::string best_word;
    std::uint64_t best_freq = 0;
    for (const auto& [word, freq] : dict) {
        const std::uint32_t d = damerau_levenshtein(tok, utf8_decode(word));
        if (d > max_edit) continue;
        if (!found || d < best_d || (d == best_d && freq > best_freq) ||
            (d == best_d && freq == best_freq && word < best_word)) {
            found = true;
            best_d = d;
            best_word = word;
            best_freq = freq;
        }
    }
    return found ? best_word : token;
}

}  // namespace

TEST_CASE("damerau_levenshtein hand cases") {
    const auto d = [](std::string_view a, std::string_view b) {
        return damerau_levenshtein(utf8_decode(a), utf8_decode(b));
    };
    CHECK(d("", "") == 0);
    CHECK(d("abc", "abc") == 0);
    CHECK(d("abc", "ab") == 1);
    CHECK(d("abc", "abcd") == 1);
    CHECK(d("abc", "axc") == 1);
    CHECK(d("ab", "ba") == 1);        // transposition counts once
    CHECK(d("bimdung", "bindung") == 1);
    CHECK(d("kitten", "sitting") == 3);
    CHECK(d("verträge", "verträge") == 0);
    CHECK(d("müde", "mude") == 1);    // code-point level, not bytes
}

TEST_CASE("damerau_levenshtein agrees with an exponential reference") {
    Rng rng(77);
    for (int i = 0; i < 400; ++i) {
        const std::u32string a = utf8_decode(random_word(rng, 5));
        const std::u32string b = utf8_decode(random_word(rng, 5));
        CHECK(damerau_levenshtein(a, b) == slow_dl(a, b));
    }
}

TEST_CASE("dictionary construction") {
    const auto path = std::filesystem::temp_directory_path() / "faqrank_freq.txt";
    {
        std::ofstream out(path, std::ios::trunc);
        out << "bindung 500\ntarife 300\n";
    }
    const SpellDictionary dict = SpellDictionary::from_frequency_file(path);
    CHECK(dict.size() == 2);
    CHECK(dict.contains("bindung"));
    CHECK(dict.frequency("tarife") == 300);

    {
        std::ofstream out(path, std::ios::trunc);
        out << "wort abc\n";
    }
    CHECK_THROWS_WITH_AS(SpellDictionary::from_frequency_file(path),
                         doctest::Contains("non-numeric"), Error);
    CHECK_THROWS_AS(SpellDictionary::from_frequency_file("/nonexistent/freq.txt"), Error);
}

TEST_CASE("delete variant depth controls reachable corrections") {
    const SpellDictionary d1 = SpellDictionary::from_counts({{"abc", 10}}, 1);
    CHECK(d1.correct_token("bc") == "abc");   // one deletion away
    CHECK(d1.correct_token("ac") == "abc");
    CHECK(d1.correct_token("ab") == "abc");
    CHECK(d1.correct_token("a") == "a");      // distance 2 is out of reach

    const SpellDictionary d2 = SpellDictionary::from_counts({{"abc", 10}}, 2);
    CHECK(d2.correct_token("a") == "abc");
    CHECK(d2.correct_token("c") == "abc");
    CHECK(d2.correct_token("x") == "x");
}

TEST_CASE("correct_token picks minimal distance, then frequency, then lexicographic") {
    const SpellDictionary dict = SpellDictionary::from_counts(
        {{"bindung", 500}, {"bildung", 100}, {"haus", 5}, {"haut", 5}, {"maus", 80}}, 2);

    CHECK(dict.correct_token("bindung") == "bindung");  // distance 0 wins
    CHECK(dict.correct_token("bimdung") == "bindung");  // distance 1 beats bildung at 2
    CHECK(dict.correct_token("qqqqqq") == "qqqqqq");    // no candidate in range
    CHECK(dict.correct_token("hauz") == "haus");        // freq tie, lexicographic
    CHECK(dict.correct_token("mauss") == "maus");
    CHECK(dict.correct_token("hacs") == "haus");        // distance 1: haus only
}

TEST_CASE("correct_token output is the input or a dictionary word") {
    Rng rng(3121);
    Counts counts;
    std::set<std::string> vocab;
    for (int i = 0; i < 60; ++i) {
        const std::string w = random_word(rng, 6);
        if (vocab.insert(w).second) counts.emplace_back(w, 1 + rng.below(1000));
    }
    const SpellDictionary dict = SpellDictionary::from_counts(counts, 2);
    for (int i = 0; i < 500; ++i) {
        const std::string token = random_word(rng, 7);
        const std::string corrected = dict.correct_token(token);
        CHECK((corrected == token || vocab.count(corrected) == 1));
    }
}

TEST_CASE("symmetric-delete lookup matches a brute-force dictionary scan") {
    Rng rng(90210);
    for (int round = 0; round < 10; ++round) {
        Counts counts;
        std::set<std::string> seen;
        for (int i = 0; i < 40; ++i) {
            const std::string w = random_word(rng, 6);
            if (seen.insert(w).second) counts.emplace_back(w, 1 + rng.below(50));
        }
        const std::uint32_t max_edit = 1 + static_cast<std::uint32_t>(rng.below(2));
        const SpellDictionary dict = SpellDictionary::from_counts(counts, max_edit);
        for (int i = 0; i < 200; ++i) {
            const std::string token = random_word(rng, 7);
            CAPTURE(token);
            CHECK(dict.correct_token(token) == oracle_correct(counts, max_edit, token));
        }
    }
}

TEST_CASE("single-edit corruptions resolve to a word within distance 1") {
    Rng rng(404);
    Counts counts;
    std::set<std::string> vocab;
    while (counts.size() < 50) {
        const std::string w = random_word(rng, 6);
        if (w.size() >= 2 && vocab.insert(w).second) counts.emplace_back(w, 1 + rng.below(100));
    }
    const SpellDictionary dict = SpellDictionary::from_counts(counts, 2);
    for (const auto& [word, freq] : counts) {
        for (int k = 0; k < 5; ++k) {
            std::string corrupted = word;
            const std::size_t pos = rng.below(corrupted.size());
            corrupted[pos] = static_cast<char>('a' + rng.below(8));
            if (corrupted == word) continue;
            const std::string fixed = dict.correct_token(corrupted);
            const std::uint32_t d =
                damerau_levenshtein(utf8_decode(corrupted), utf8_decode(fixed));
            CAPTURE(word);
            CAPTURE(corrupted);
            CHECK(dict.contains(fixed));
            CHECK(d <= 1);
        }
    }
}

TEST_CASE("correct_query corrects tokens independently") {
    const SpellDictionary dict = SpellDictionary::from_counts(
        {{"tarife", 100}, {"ohne", 100}, {"bindung", 100}}, 2);
    CHECK(dict.correct_query("") == "");
    CHECK(dict.correct_query("tarife ohne bindung") == "tarife ohne bindung");
    CHECK(dict.correct_query("  tarife   ohne bindung ") == "tarife ohne bindung");
    CHECK(dict.correct_query("tarife ohne bimdung") == "tarife ohne bindung");
    CHECK(dict.correct_query("Tarife, ohne bimdung!") == "tarife ohne bindung");
}

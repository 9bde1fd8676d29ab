#include "faqrank/textproc.hpp"

#include <algorithm>
#include <map>

#include "faqrank/corpus.hpp"
#include "faqrank/util.hpp"

namespace faqrank {
namespace {

bool is_space_cp(char32_t c) {
    switch (c) {
        case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
        case 0x0085: case 0x00A0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return c >= 0x2000 && c <= 0x200A;
    }
}

bool is_strip_punct(char32_t c) {
    if (c < 0x80) {
        return (c >= U'!' && c <= U'/') || (c >= U':' && c <= U'@') ||
               (c >= U'[' && c <= U'`') || (c >= U'{' && c <= U'~');
    }
    switch (c) {
        case 0x00A1: case 0x00AB: case 0x00BB: case 0x00BF:
        case 0x2013: case 0x2014: case 0x2018: case 0x2019: case 0x201A:
        case 0x201C: case 0x201D: case 0x201E: case 0x2026:
            return true;
        default:
            return false;
    }
}

char32_t lower_cp(char32_t c) {
    if (c >= U'A' && c <= U'Z') return c + 32;
    switch (c) {
        case 0x00C4: return 0x00E4;  // Ä
        case 0x00D6: return 0x00F6;  // Ö
        case 0x00DC: return 0x00FC;  // Ü
        case 0x1E9E: return 0x00DF;  // ẞ
        default: return c;
    }
}

}  // namespace

TokenSeq tokenize(std::string_view text) {
    const std::u32string cps = utf8_decode(text);
    TokenSeq out;
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && is_space_cp(cps[i])) ++i;
        std::size_t begin = i;
        while (i < cps.size() && !is_space_cp(cps[i])) ++i;
        if (i == begin) continue;
        std::size_t end = i;
        while (begin < end && is_strip_punct(cps[begin])) ++begin;
        while (end > begin && is_strip_punct(cps[end - 1])) --end;
        if (begin == end) continue;
        std::u32string tok;
        tok.reserve(end - begin);
        for (std::size_t j = begin; j < end; ++j) tok.push_back(lower_cp(cps[j]));
        out.push_back(utf8_encode(tok));
    }
    return out;
}

TokenSeq stem_all(const TokenSeq& tokens) {
    TokenSeq out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(stem(t));
    return out;
}

std::vector<std::vector<std::string>> ngrams(const TokenSeq& seq, std::size_t n) {
    if (n == 0) throw Error("ngrams: n must be positive");
    std::vector<std::vector<std::string>> out;
    if (seq.size() < n) return out;
    out.reserve(seq.size() - n + 1);
    for (std::size_t i = 0; i + n <= seq.size(); ++i) {
        out.emplace_back(seq.begin() + static_cast<std::ptrdiff_t>(i),
                         seq.begin() + static_cast<std::ptrdiff_t>(i + n));
    }
    return out;
}

Vocabulary Vocabulary::build(const TrainingCorpus& corpus) {
    if (corpus.answers().empty()) throw Error("build_vocab: empty corpus");
    Vocabulary v;
    for (const auto& pair : corpus.pairs()) {
        TokenSeq tokens = tokenize(pair.query);
        // df counts documents (queries), not occurrences; keep first-seen order
        TokenSeq uniq;
        uniq.reserve(tokens.size());
        for (auto& t : tokens) {
            if (std::find(uniq.begin(), uniq.end(), t) == uniq.end()) uniq.push_back(std::move(t));
        }
        for (auto& t : uniq) {
            auto it = v.index_.find(t);
            if (it == v.index_.end()) {
                const auto idx = static_cast<std::uint32_t>(v.terms_.size());
                v.index_.emplace(t, idx);
                v.terms_.push_back(std::move(t));
                v.df_.push_back(1);
            } else {
                ++v.df_[it->second];
            }
        }
    }
    return v;
}

Vocabulary Vocabulary::from_terms(std::vector<std::string> terms, std::vector<std::uint32_t> df) {
    if (terms.size() != df.size()) throw Error("vocabulary: terms/df size mismatch");
    Vocabulary v;
    v.terms_ = std::move(terms);
    v.df_ = std::move(df);
    for (std::size_t i = 0; i < v.terms_.size(); ++i) {
        v.index_.emplace(v.terms_[i], static_cast<std::uint32_t>(i));
    }
    return v;
}

std::optional<std::uint32_t> Vocabulary::lookup(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

CountVector bow_vector(const TokenSeq& seq, const Vocabulary& vocab) {
    std::map<std::uint32_t, std::uint32_t> counts;
    for (const auto& t : seq) {
        if (auto idx = vocab.lookup(t)) ++counts[*idx];
    }
    return CountVector(counts.begin(), counts.end());
}

}  // namespace faqrank

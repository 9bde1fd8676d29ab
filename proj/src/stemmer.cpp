#include "faqrank/stemmer.hpp"

#include <algorithm>
#include <array>

#include "faqrank/util.hpp"

namespace faqrank {
namespace {

constexpr char32_t kAUml = U'ä';  // ä
constexpr char32_t kOUml = U'ö';  // ö
constexpr char32_t kUUml = U'ü';  // ü
constexpr char32_t kSz = U'ß';    // ß

bool is_vowel(char32_t c) {
    return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u' || c == U'y' ||
           c == kAUml || c == kOUml || c == kUUml;
}

// valid endings before a removable 's' / 'st'
bool is_s_ending(char32_t c) {
    return c == U'b' || c == U'd' || c == U'f' || c == U'g' || c == U'h' || c == U'k' ||
           c == U'l' || c == U'm' || c == U'n' || c == U'r' || c == U't';
}

bool is_st_ending(char32_t c) { return is_s_ending(c) && c != U'r'; }

bool ends_with(const std::u32string& w, std::u32string_view suf) {
    return w.size() >= suf.size() && std::equal(suf.rbegin(), suf.rend(), w.rbegin());
}

struct Regions {
    std::size_t p1;
    std::size_t p2;
};

// R1 starts after the first non-vowel that follows a vowel (but never before
// position 3); R2 repeats the rule inside R1.
Regions mark_regions(const std::u32string& w) {
    const std::size_t n = w.size();
    Regions r{n, n};
    if (n < 3) return r;
    std::size_t i = 0;
    while (i < n && !is_vowel(w[i])) ++i;
    while (i < n && is_vowel(w[i])) ++i;
    if (i >= n) return r;
    ++i;  // past the non-vowel
    r.p1 = std::max<std::size_t>(i, 3);
    while (i < n && !is_vowel(w[i])) ++i;
    while (i < n && is_vowel(w[i])) ++i;
    if (i >= n) return r;
    r.p2 = i + 1;
    return r;
}

void step1(std::u32string& w, std::size_t p1) {
    // longest of: ern | em en er es | e s; longest match commits even if the
    // region test then fails
    if (ends_with(w, U"ern")) {
        if (w.size() - 3 >= p1) w.erase(w.size() - 3);
        return;
    }
    if (ends_with(w, U"em") || ends_with(w, U"er")) {
        if (w.size() - 2 >= p1) w.erase(w.size() - 2);
        return;
    }
    if (ends_with(w, U"en") || ends_with(w, U"es")) {
        if (w.size() - 2 >= p1) {
            w.erase(w.size() - 2);
            if (ends_with(w, U"niss")) w.pop_back();  // kenntniss -> kenntnis
        }
        return;
    }
    if (ends_with(w, U"e")) {
        if (w.size() - 1 >= p1) {
            w.erase(w.size() - 1);
            if (ends_with(w, U"niss")) w.pop_back();
        }
        return;
    }
    if (ends_with(w, U"s")) {
        if (w.size() - 1 >= p1 && w.size() >= 2 && is_s_ending(w[w.size() - 2])) {
            w.erase(w.size() - 1);
        }
        return;
    }
}

void step2(std::u32string& w, std::size_t p1) {
    if (ends_with(w, U"est")) {
        if (w.size() - 3 >= p1) w.erase(w.size() - 3);
        return;
    }
    if (ends_with(w, U"en") || ends_with(w, U"er")) {
        if (w.size() - 2 >= p1) w.erase(w.size() - 2);
        return;
    }
    if (ends_with(w, U"st")) {
        // the 'st' must sit after at least 3 letters and a valid st-ending
        if (w.size() - 2 >= p1 && w.size() >= 6 && is_st_ending(w[w.size() - 3])) {
            w.erase(w.size() - 2);
        }
        return;
    }
}

void step3(std::u32string& w, std::size_t p1, std::size_t p2) {
    const auto in_r2 = [&](std::size_t pos) { return pos >= p2; };

    if (ends_with(w, U"lich") || ends_with(w, U"heit")) {
        if (!in_r2(w.size() - 4)) return;
        w.erase(w.size() - 4);
        if ((ends_with(w, U"er") || ends_with(w, U"en")) && w.size() - 2 >= p1) {
            w.erase(w.size() - 2);
        }
        return;
    }
    if (ends_with(w, U"keit")) {
        if (!in_r2(w.size() - 4)) return;
        w.erase(w.size() - 4);
        if (ends_with(w, U"lich") && in_r2(w.size() - 4)) {
            w.erase(w.size() - 4);
        } else if (ends_with(w, U"ig") && in_r2(w.size() - 2)) {
            w.erase(w.size() - 2);
        }
        return;
    }
    if (ends_with(w, U"isch")) {
        if (in_r2(w.size() - 4) && !(w.size() >= 5 && w[w.size() - 5] == U'e')) {
            w.erase(w.size() - 4);
        }
        return;
    }
    if (ends_with(w, U"end") || ends_with(w, U"ung")) {
        if (!in_r2(w.size() - 3)) return;
        w.erase(w.size() - 3);
        if (ends_with(w, U"ig") && !(w.size() >= 3 && w[w.size() - 3] == U'e') &&
            in_r2(w.size() - 2)) {
            w.erase(w.size() - 2);
        }
        return;
    }
    if (ends_with(w, U"ig") || ends_with(w, U"ik")) {
        if (in_r2(w.size() - 2) && !(w.size() >= 3 && w[w.size() - 3] == U'e')) {
            w.erase(w.size() - 2);
        }
        return;
    }
}

}  // namespace

namespace {

std::string snowball_pass(std::string_view token) {
    std::u32string w = utf8_decode(token);

    // prelude: ß -> ss, then mark u/y between vowels as consonants
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == kSz) {
            w[i] = U's';
            w.insert(w.begin() + static_cast<std::ptrdiff_t>(i) + 1, U's');
        }
    }
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
        if ((w[i] == U'u' || w[i] == U'y') && is_vowel(w[i - 1]) && is_vowel(w[i + 1])) {
            w[i] = (w[i] == U'u') ? U'U' : U'Y';
        }
    }

    const Regions r = mark_regions(w);
    step1(w, r.p1);
    step2(w, r.p1);
    step3(w, r.p1, r.p2);

    for (char32_t& c : w) {
        if (c == U'U') c = U'u';
        else if (c == U'Y') c = U'y';
        else if (c == kAUml) c = U'a';
        else if (c == kOUml) c = U'o';
        else if (c == kUUml) c = U'u';
    }
    return utf8_encode(w);
}

}  // namespace

std::string stem(std::string_view token) {
    // One Snowball pass is not idempotent: regions are marked before any
    // removal, so a stripped word can expose another strippable suffix
    // (verlängerung -> verlanger -> verlang). stem() is the fixed point.
    // Terminates: a changed pass either folds ß/umlauts away for good or
    // shortens the word.
    std::string current(token);
    for (;;) {
        std::string next = snowball_pass(current);
        if (next == current) return current;
        current = std::move(next);
    }
}

}  // namespace faqrank

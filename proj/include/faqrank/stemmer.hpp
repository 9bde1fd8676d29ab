#ifndef FAQRANK_STEMMER_HPP
#define FAQRANK_STEMMER_HPP

#include <string>
#include <string_view>

namespace faqrank {

/// Snowball German suffix stripper. Expects a lowercase token; umlauts are
/// folded to their base vowel on the way out (verträge -> vertrag). Idempotent.
std::string stem(std::string_view token);

}  // namespace faqrank

#endif

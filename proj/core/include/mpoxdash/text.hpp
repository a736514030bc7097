#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mpoxdash {

/// NFC-normalizes UTF-8 input. Ill-formed sequences become U+FFFD and NUL
/// code points are dropped, so the output always satisfies the Tweet text
/// invariant.
std::string nfc_normalize(std::string_view utf8);

/// The single token definition shared by relevance filtering, the index,
/// trends and lexicons: maximal runs of letters (L*) and decimal digits (Nd)
/// taken from the NFC form, each code point simple-lowercased. Everything
/// else, `#` and `@` included, separates tokens.
std::vector<std::string> tokenize(std::string_view utf8);

/// Unicode case folding followed by trimming of leading/trailing white space.
std::string fold_and_trim(std::string_view utf8);

}  // namespace mpoxdash

#include "mpoxdash/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <stdexcept>

namespace mpoxdash {
namespace {

const icu::Normalizer2& nfc() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw std::runtime_error(std::string("ICU NFC unavailable: ") + u_errorName(status));
    return n;
  }();
  return *instance;
}

bool plain_ascii(std::string_view s) {
  for (unsigned char c : s)
    if (c == 0 || c >= 0x80) return false;
  return true;
}

// Well-formed UTF-8 without NULs: ill-formed sequences become U+FFFD.
std::string scrub(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  const auto len = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(p, i, len, c);
    if (c == 0) continue;
    if (c < 0) c = 0xFFFD;
    char buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, c);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t n = 0;
  U8_APPEND_UNSAFE(buf, n, c);
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

std::string nfc_normalize(std::string_view utf8) {
  if (plain_ascii(utf8)) return std::string(utf8);
  const std::string clean = scrub(utf8);
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString in = icu::UnicodeString::fromUTF8(clean);
  if (nfc().isNormalized(in, status) && U_SUCCESS(status)) return clean;
  status = U_ZERO_ERROR;
  const icu::UnicodeString normalized = nfc().normalize(in, status);
  if (U_FAILURE(status)) throw std::runtime_error(std::string("NFC normalization failed: ") + u_errorName(status));
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::vector<std::string> tokenize(std::string_view utf8) {
  const std::string text = nfc_normalize(utf8);
  std::vector<std::string> tokens;
  std::string current;
  const auto* p = reinterpret_cast<const uint8_t*>(text.data());
  const auto len = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(p, i, len, c);
    if (c >= 0 && u_isalnum(c)) {
      append_utf8(current, u_tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string fold_and_trim(std::string_view utf8) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(nfc_normalize(utf8));
  s.foldCase(U_FOLD_CASE_DEFAULT);
  int32_t begin = 0;
  int32_t end = s.length();
  while (begin < end && u_isUWhiteSpace(s.char32At(begin))) begin = s.moveIndex32(begin, 1);
  while (end > begin) {
    const int32_t prev = s.moveIndex32(end, -1);
    if (!u_isUWhiteSpace(s.char32At(prev))) break;
    end = prev;
  }
  std::string out;
  s.tempSubStringBetween(begin, end).toUTF8String(out);
  return out;
}

}  // namespace mpoxdash

#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "mpoxdash/text.hpp"

using namespace mpoxdash;

// Expected values computed with Python's unicodedata.normalize("NFC", ...).
TEST_CASE("nfc_normalize matches a reference normalizer on hand-picked strings") {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"e\xcc\x81", "\xc3\xa9"},
      {"Cafe\xcc\x81 au lait", "Caf\xc3\xa9 au lait"},
      {"A\xcc\x8a", "\xc3\x85"},
      {"\xe2\x84\xab ngstrom", "\xc3\x85 ngstrom"},
      {"\xe1\xba\x9b\xcc\xa3", "\xe1\xba\x9b\xcc\xa3"},
      {"n\xcc\x83o", "\xc3\xb1o"},
      {"\xe1\x84\x80\xe1\x85\xa1\xe1\x86\xa8", "\xea\xb0\x81"},
      {"\xc3\x85", "\xc3\x85"},
      {"plain ascii mpox", "plain ascii mpox"},
      {"\xe0\xa5\x98", "\xe0\xa4\x95\xe0\xa4\xbc"},
      {"\xe2\x84\xa6", "\xce\xa9"},
      {"\xc3\xa9t\xc3\xa9", "\xc3\xa9t\xc3\xa9"},
      {"o\xcc\x88\xcc\x81", "\xc3\xb6\xcc\x81"},
      {"A\xcc\xa3\xcc\x82", "\xe1\xba\xac"},
      {"\xef\xac\x81 ligature", "\xef\xac\x81 ligature"},
      {"I\xcc\x87stanbul", "\xc4\xb0stanbul"},
      {"u\xcc\x88" "ber", "\xc3\xbc" "ber"},
      {"\xe0\xa4\x95\xe0\xa4\xbc", "\xe0\xa4\x95\xe0\xa4\xbc"},
      {"\xe1\xb8\x8b\xcc\xa3", "\xe1\xb8\x8d\xcc\x87"},
      {"a\xcc\xa8\xcc\x81 ogonek", "\xc4\x85\xcc\x81 ogonek"},
  };
  REQUIRE(cases.size() == 20);
  for (const auto& [in, expected] : cases) {
    CAPTURE(in);
    CHECK(nfc_normalize(in) == expected);
    CHECK(nfc_normalize(expected) == expected);
  }
}

TEST_CASE("nfc_normalize scrubs NUL and ill-formed UTF-8") {
  CHECK(nfc_normalize(std::string("a\0b", 3)) == "ab");
  CHECK(nfc_normalize(std::string("caf\xc3\xa9\0", 6)) == "caf\xc3\xa9");
  CHECK(nfc_normalize("bad \xff byte") == "bad \xef\xbf\xbd byte");
  CHECK(nfc_normalize("trunc \xe2\x84") == "trunc \xef\xbf\xbd");
}

// Reference tokens from a Python implementation of the same character-class
// rule: unicodedata.category(c) in L* or Nd, lowercased.
TEST_CASE("tokenize agrees with a character-class reference implementation") {
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
      {"Mpox is BACK\x3f!", {"mpox", "is", "back"}},
      {"", {}},
      {"#mpox @WHO mpox-2024", {"mpox", "who", "mpox", "2024"}},
      {"\xc3\x87" "a va\x3f Tr\xc3\xa8s BIEN", {"\xc3\xa7" "a", "va", "tr\xc3\xa8s", "bien"}},
      {"MPOX\xf0\x9d\x95\x8f" "2024", {"mpox\xf0\x9d\x95\x8f" "2024"}},
      {"\xe6\x97\xa5\xe6\x9c\xac\xe8\xaa\x9e\xe3\x81\xae\xe3\x83\x86\xe3\x82\xad\xe3\x82\xb9\xe3\x83\x88 mpox",
       {"\xe6\x97\xa5\xe6\x9c\xac\xe8\xaa\x9e\xe3\x81\xae\xe3\x83\x86\xe3\x82\xad\xe3\x82\xb9\xe3\x83\x88", "mpox"}},
      {"\xd9\xa3 digits \xd9\xa4\xd9\xa5", {"\xd9\xa3", "digits", "\xd9\xa4\xd9\xa5"}},
      {"\xc2\xbd fraction", {"fraction"}},
      {"e\xcc\x81" "cole", {"\xc3\xa9" "cole"}},
      {"emoji\xf0\x9f\x98\xb7mpox", {"emoji", "mpox"}},
      {"under_score", {"under", "score"}},
      {"tab\x09sep\x0aline", {"tab", "sep", "line"}},
      {"\xc3\x9cn\xc3\xaf" "c\xc3\xb6" "d\xc3\xa9", {"\xc3\xbcn\xc3\xaf" "c\xc3\xb6" "d\xc3\xa9"}},
      {"vaccine's", {"vaccine", "s"}},
      {"\xe0\xa5\xa7\xe0\xa5\xa8\xe0\xa5\xa9 devanagari", {"\xe0\xa5\xa7\xe0\xa5\xa8\xe0\xa5\xa9", "devanagari"}},
      {"x\xc2\xb2", {"x"}},
      {"\xe2\x85\xab roman", {"roman"}},
      {"\xef\xac\x81 ligature", {"\xef\xac\x81", "ligature"}},
      {"MPOX\xe3\x80\x80\xe5\x85\xa8\xe8\xa7\x92", {"mpox", "\xe5\x85\xa8\xe8\xa7\x92"}},
      {"\xce\x91\xce\x98\xce\x97\xce\x9d\xce\x91 athens", {"\xce\xb1\xce\xb8\xce\xb7\xce\xbd\xce\xb1", "athens"}},
  };
  for (const auto& [in, expected] : cases) {
    CAPTURE(in);
    CHECK(tokenize(in) == expected);
  }
}

TEST_CASE("tokenize treats hashtags and mentions as plain tokens") {
  CHECK(tokenize("Mpox is BACK?!") == std::vector<std::string>{"mpox", "is", "back"});
  CHECK(tokenize("#mpox") == std::vector<std::string>{"mpox"});
  CHECK(tokenize("smallpox").front() != "mpox");
}

TEST_CASE("fold_and_trim") {
  CHECK(fold_and_trim("  Austin, TX ") == "austin, tx");
  CHECK(fold_and_trim("austin, tx") == "austin, tx");
  CHECK(fold_and_trim("\xe2\x80\x83" "KINSHASA\t") == "kinshasa");  // em space
  CHECK(fold_and_trim("   ").empty());
  CHECK(fold_and_trim("Stra\xc3\x9f" "e") == "strasse");
}

#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mpoxdash/csv.hpp"

using namespace mpoxdash;
using Rows = std::vector<std::vector<std::string>>;

namespace {
Rows read_all(const std::string& text, std::size_t* malformed = nullptr) {
  std::istringstream in(text);
  CsvReader reader(in);
  Rows rows;
  std::vector<std::string> row;
  for (;;) {
    auto r = reader.next(row);
    if (r == CsvReader::Row::end) break;
    if (r == CsvReader::Row::malformed) {
      if (malformed) ++*malformed;
      continue;
    }
    rows.push_back(row);
  }
  return rows;
}
}  // namespace

// Expected rows from Python's csv.reader(strict=True), blank rows dropped.
TEST_CASE("CsvReader matches a standard CSV parser on quoting edge cases") {
  const std::string data =
      "id,text,n\r\n1,\"hello, world\",3\r\n2,\"multi\nline \"\"quoted\"\"\",4\n\n3,,5\r\n4,\"\",6\n5,plain "
      "text,7\n6,\"trailing sep\",\n";
  const Rows expected = {{"id", "text", "n"},       {"1", "hello, world", "3"}, {"2", "multi\nline \"quoted\"", "4"},
                         {"3", "", "5"},            {"4", "", "6"},             {"5", "plain text", "7"},
                         {"6", "trailing sep", ""}};
  CHECK(read_all(data) == expected);
}

TEST_CASE("CsvReader reports malformed rows and recovers on the next line") {
  std::size_t bad = 0;
  const auto rows = read_all("a,b\n1,x\"y\n2,\"ok\"junk\n3,fine\n", &bad);
  CHECK(bad == 2);
  CHECK(rows == Rows{{"a", "b"}, {"3", "fine"}});
}

TEST_CASE("CsvReader treats an unterminated quote as one malformed row") {
  std::size_t bad = 0;
  const auto rows = read_all("a,b\n1,\"never closed\n2,x\n", &bad);
  CHECK(bad == 1);
  CHECK(rows == Rows{{"a", "b"}});
}

TEST_CASE("CsvReader handles a missing final newline and empty input") {
  CHECK(read_all("a,b\n1,2") == Rows{{"a", "b"}, {"1", "2"}});
  CHECK(read_all("").empty());
  CHECK(read_all("\n\n").empty());
}

#pragma once

#include <istream>
#include <string>
#include <vector>

namespace mpoxdash {

/// Streaming RFC-4180 reader. Quoted fields may contain separators, doubled
/// quotes and line breaks. A row with a stray quote inside an unquoted field,
/// text after a closing quote, or an unterminated quote is reported as
/// malformed; reading resumes at the next line.
class CsvReader {
 public:
  enum class Row { ok, malformed, end };

  explicit CsvReader(std::istream& in, char separator = ',') : in_(in), sep_(separator) {}

  /// Reads the next non-blank row into `fields`.
  Row next(std::vector<std::string>& fields);

 private:
  void skip_rest_of_line();

  std::istream& in_;
  char sep_;
};

}  // namespace mpoxdash

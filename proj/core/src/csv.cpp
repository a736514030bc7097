#include "mpoxdash/csv.hpp"

#include <streambuf>

namespace mpoxdash {
namespace {
constexpr int kEof = std::char_traits<char>::eof();
}

void CsvReader::skip_rest_of_line() {
  std::streambuf* buf = in_.rdbuf();
  for (int c = buf->sbumpc(); c != kEof; c = buf->sbumpc()) {
    if (c == '\n') return;
    if (c == '\r') {
      if (buf->sgetc() == '\n') buf->sbumpc();
      return;
    }
  }
}

CsvReader::Row CsvReader::next(std::vector<std::string>& fields) {
  std::streambuf* buf = in_.rdbuf();
  fields.clear();

  // Skip blank lines.
  for (;;) {
    const int c = buf->sgetc();
    if (c == kEof) return Row::end;
    if (c != '\n' && c != '\r') break;
    buf->sbumpc();
  }

  std::string field;
  for (;;) {
    int c = buf->sbumpc();
    if (c == '"') {
      // Quoted field.
      for (;;) {
        c = buf->sbumpc();
        if (c == kEof) return Row::malformed;
        if (c != '"') {
          field.push_back(static_cast<char>(c));
          continue;
        }
        const int after = buf->sgetc();
        if (after == '"') {
          field.push_back('"');
          buf->sbumpc();
          continue;
        }
        break;
      }
      c = buf->sbumpc();
      if (c != sep_ && c != '\n' && c != '\r' && c != kEof) {
        skip_rest_of_line();
        return Row::malformed;
      }
    } else {
      while (c != sep_ && c != '\n' && c != '\r' && c != kEof) {
        if (c == '"') {
          skip_rest_of_line();
          return Row::malformed;
        }
        field.push_back(static_cast<char>(c));
        c = buf->sbumpc();
      }
    }

    fields.push_back(std::move(field));
    field.clear();
    if (c == sep_) continue;
    if (c == '\r' && buf->sgetc() == '\n') buf->sbumpc();
    return Row::ok;
  }
}

}  // namespace mpoxdash

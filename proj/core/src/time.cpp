#include "mpoxdash/time.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "mpoxdash/error.hpp"

namespace mpoxdash {
namespace {

using namespace std::chrono;

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  std::optional<int> digits(std::size_t n) {
    if (pos_ + n > s_.size()) return std::nullopt;
    int value = 0;
    for (std::size_t i = 0; i < n; ++i) {
      char c = s_[pos_ + i];
      if (c < '0' || c > '9') return std::nullopt;
      value = value * 10 + (c - '0');
    }
    pos_ += n;
    return value;
  }
  void skip_digits() {
    while (!done() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  std::string_view word() {
    std::size_t start = pos_;
    while (!done() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::optional<Timestamp> assemble(int y, int mo, int d, int h, int mi, int sec, int offset_minutes) {
  if (y < 0 || y > 9999) return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  // 60 tolerates a leap second by folding it into the next minute.
  if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
  Timestamp ts = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} - minutes{offset_minutes};
  if (ts < sys_days{year{0} / 1 / 1} || ts >= sys_days{year{10000} / 1 / 1}) return std::nullopt;
  return ts;
}

// Parses `Z`, `+HH:MM`, `+HHMM`, `+HH` or nothing.
std::optional<int> parse_offset(Cursor& c) {
  if (c.done()) return 0;
  if (c.eat('Z') || c.eat('z')) return 0;
  int sign = 0;
  if (c.eat('+')) sign = 1;
  else if (c.eat('-')) sign = -1;
  else return std::nullopt;
  auto hh = c.digits(2);
  if (!hh) return std::nullopt;
  int mm = 0;
  if (!c.done()) {
    c.eat(':');
    auto m = c.digits(2);
    if (!m) return std::nullopt;
    mm = *m;
  }
  if (*hh > 23 || mm > 59) return std::nullopt;
  return sign * (*hh * 60 + mm);
}

std::optional<Timestamp> parse_iso(std::string_view s) {
  Cursor c(s);
  auto y = c.digits(4);
  if (!y || !c.eat('-')) return std::nullopt;
  auto mo = c.digits(2);
  if (!mo || !c.eat('-')) return std::nullopt;
  auto d = c.digits(2);
  if (!d) return std::nullopt;
  if (c.done()) return assemble(*y, *mo, *d, 0, 0, 0, 0);
  if (!c.eat('T') && !c.eat(' ') && !c.eat('t')) return std::nullopt;
  auto h = c.digits(2);
  if (!h || !c.eat(':')) return std::nullopt;
  auto mi = c.digits(2);
  if (!mi) return std::nullopt;
  int sec = 0;
  if (c.eat(':')) {
    auto s2 = c.digits(2);
    if (!s2) return std::nullopt;
    sec = *s2;
    if (c.eat('.') || c.eat(',')) c.skip_digits();  // sub-second precision is dropped
  }
  c.eat(' ');
  auto off = parse_offset(c);
  if (!off || !c.done()) return std::nullopt;
  return assemble(*y, *mo, *d, *h, *mi, sec, *off);
}

constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

// `Wed Aug 14 19:02:11 +0000 2024`
std::optional<Timestamp> parse_classic(std::string_view s) {
  Cursor c(s);
  if (c.word().size() != 3 || !c.eat(' ')) return std::nullopt;
  auto mon = c.word();
  int mo = 0;
  for (std::size_t i = 0; i < kMonths.size(); ++i)
    if (kMonths[i] == mon) mo = static_cast<int>(i) + 1;
  if (mo == 0 || !c.eat(' ')) return std::nullopt;
  auto d = c.digits(2);
  if (!d || !c.eat(' ')) return std::nullopt;
  auto h = c.digits(2);
  if (!h || !c.eat(':')) return std::nullopt;
  auto mi = c.digits(2);
  if (!mi || !c.eat(':')) return std::nullopt;
  auto sec = c.digits(2);
  if (!sec || !c.eat(' ')) return std::nullopt;
  int sign = c.eat('+') ? 1 : (c.eat('-') ? -1 : 0);
  if (sign == 0) return std::nullopt;
  auto oh = c.digits(2);
  auto om = c.digits(2);
  if (!oh || !om || !c.eat(' ')) return std::nullopt;
  auto y = c.digits(4);
  if (!y || !c.done()) return std::nullopt;
  return assemble(*y, mo, *d, *h, *mi, *sec, sign * (*oh * 60 + *om));
}

std::optional<Timestamp> parse_epoch(std::string_view s) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || value < 0) return std::nullopt;
  if (s.size() >= 13) value /= 1000;
  Timestamp ts{seconds{value}};
  if (ts >= sys_days{year{10000} / 1 / 1}) return std::nullopt;
  return ts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.find_first_not_of("0123456789") == std::string_view::npos) return parse_epoch(text);
  if (std::isalpha(static_cast<unsigned char>(text.front()))) return parse_classic(text);
  return parse_iso(text);
}

std::string format_timestamp(Timestamp ts) {
  const auto d = floor<days>(ts);
  const year_month_day ymd{d};
  const hh_mm_ss hms{ts - d};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::optional<Day> parse_day(std::string_view text) {
  if (text.size() != 10) return std::nullopt;
  Cursor c(text);
  auto y = c.digits(4);
  if (!y || !c.eat('-')) return std::nullopt;
  auto mo = c.digits(2);
  if (!mo || !c.eat('-')) return std::nullopt;
  auto d = c.digits(2);
  if (!d) return std::nullopt;
  year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

std::string format_day(Day d) {
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

DateRange::DateRange(Day from, Day to) : from_(from), to_(to) {
  if (from > to) throw InvalidRange("range start " + format_day(from) + " is after end " + format_day(to));
}

DateRange DateRange::everything() {
  return DateRange(sys_days{year{0} / 1 / 1}, sys_days{year{9999} / 12 / 31});
}

}  // namespace mpoxdash

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mpoxdash {

using Timestamp = std::chrono::sys_seconds;
using Day = std::chrono::sys_days;

/// UTC calendar day containing `ts`.
inline Day day_of(Timestamp ts) { return std::chrono::floor<std::chrono::days>(ts); }

/// Accepts the timestamp shapes seen in tweet exports:
///   ISO-8601 with `T` or space separator, optional fractional seconds,
///   `Z` / `+HH:MM` / `+HHMM` offsets (no offset means UTC);
///   the classic API form `Wed Aug 14 19:02:11 +0000 2024`;
///   integer epoch seconds, or epoch milliseconds when 13+ digits.
/// Results are normalized to UTC. Years outside 0000..9999 are rejected.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_timestamp(Timestamp ts);

/// Strict `YYYY-MM-DD`.
std::optional<Day> parse_day(std::string_view text);
std::string format_day(Day day);

/// Inclusive range of UTC days.
class DateRange {
 public:
  /// Throws InvalidRange when from > to.
  DateRange(Day from, Day to);

  static DateRange everything();

  Day from() const noexcept { return from_; }
  Day to() const noexcept { return to_; }
  bool contains(Day d) const noexcept { return from_ <= d && d <= to_; }
  bool contains(Timestamp ts) const noexcept { return contains(day_of(ts)); }
  std::int64_t length_days() const noexcept { return (to_ - from_).count() + 1; }

  bool operator==(const DateRange&) const = default;

 private:
  Day from_;
  Day to_;
};

}  // namespace mpoxdash

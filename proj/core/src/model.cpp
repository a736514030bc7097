#include "mpoxdash/model.hpp"

#include <charconv>
#include <cmath>

#include "mpoxdash/error.hpp"
#include "mpoxdash/text.hpp"

namespace mpoxdash {

ValidationError::ValidationError(std::vector<FieldError> errors)
    : std::runtime_error([&] {
        std::string what = "validation failed";
        for (const auto& e : errors) what += "; " + e.field + ": " + e.message;
        return what;
      }()),
      errors_(std::move(errors)) {}

std::string_view to_string(Source source) {
  switch (source) {
    case Source::stream_sample: return "stream_sample";
    case Source::hydrated_csv: return "hydrated_csv";
    case Source::capture_ndjson: return "capture_ndjson";
  }
  return "?";
}

std::optional<Source> source_from_string(std::string_view text) {
  for (Source s : {Source::stream_sample, Source::hydrated_csv, Source::capture_ndjson})
    if (to_string(s) == text) return s;
  return std::nullopt;
}

std::string_view to_string(ClusterLabel label) {
  switch (label) {
    case ClusterLabel::cynicism: return "cynicism";
    case ClusterLabel::covid_comparison: return "covid_comparison";
    case ClusterLabel::government_action: return "government_action";
    case ClusterLabel::misinformation: return "misinformation";
    case ClusterLabel::uncategorized: return "uncategorized";
  }
  return "?";
}

std::optional<ClusterLabel> cluster_label_from_string(std::string_view text) {
  for (ClusterLabel l : kAllClusterLabels)
    if (to_string(l) == text) return l;
  return std::nullopt;
}

std::string_view to_string(Polarity polarity) {
  switch (polarity) {
    case Polarity::negative: return "negative";
    case Polarity::neutral: return "neutral";
    case Polarity::positive: return "positive";
  }
  return "?";
}

Polarity polarity_for(double raw, double tau) {
  if (raw < -tau) return Polarity::negative;
  if (raw > tau) return Polarity::positive;
  return Polarity::neutral;
}

namespace {

// Accepts plain non-negative integers and integral decimals such as "12.0",
// which dataframe exports emit for count columns containing gaps.
std::uint64_t parse_count(const std::string& text, std::string_view field) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return value;
  double d = 0;
  auto [dptr, dec] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (dec == std::errc{} && dptr == s.data() + s.size() && d >= 0 && d < 1.8e19 && std::floor(d) == d)
    return static_cast<std::uint64_t>(d);
  throw MalformedRecord(std::string(field) + ": not a non-negative integer: '" + text + "'");
}

}  // namespace

Tweet make_tweet(const RawRecord& raw, Source source, std::string source_file) {
  if (!raw.id || raw.id->empty()) throw MalformedRecord("id: missing");
  if (!raw.created_at) throw MalformedRecord("created_at: missing");
  auto ts = parse_timestamp(*raw.created_at);
  if (!ts) throw MalformedRecord("created_at: unparseable '" + *raw.created_at + "'");
  if (!raw.text) throw MalformedRecord("text: missing");

  Tweet t;
  t.id = nfc_normalize(*raw.id);
  if (t.id.empty()) throw MalformedRecord("id: missing");
  t.created_at = *ts;
  t.text = nfc_normalize(*raw.text);
  if (raw.author_handle) t.author_handle = nfc_normalize(*raw.author_handle);
  if (raw.location) t.location = nfc_normalize(*raw.location);
  if (raw.lang) t.lang = nfc_normalize(*raw.lang);
  t.provenance.source = source;
  t.provenance.source_file = std::move(source_file);

  auto count = [&](const std::optional<std::string>& value, std::string_view field) -> std::uint64_t {
    if (!value || value->empty()) {
      t.provenance.counts_imputed = true;
      return 0;
    }
    return parse_count(*value, field);
  };
  t.engagement.like_count = count(raw.like_count, "like_count");
  t.engagement.reply_count = count(raw.reply_count, "reply_count");
  t.engagement.retweet_count = count(raw.retweet_count, "retweet_count");
  return t;
}

}  // namespace mpoxdash

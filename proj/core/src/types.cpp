#include "skinspec/types.hpp"

#include <charconv>
#include <cstdio>

#include "skinspec/error.hpp"

namespace skinspec {

std::string_view to_string(Group g) {
  switch (g) {
    case Group::healthy: return "healthy";
    case Group::pancreatic: return "pancreatic";
    case Group::sepsis: return "sepsis";
  }
  return "?";
}

std::string_view to_string(Site s) { return s == Site::hand ? "hand" : "thigh"; }

Group parse_group(std::string_view text) {
  if (text == "healthy") return Group::healthy;
  if (text == "pancreatic") return Group::pancreatic;
  if (text == "sepsis") return Group::sepsis;
  fail_validation("unknown group label '" + std::string(text) +
                  "' (expected healthy, pancreatic or sepsis)");
}

Site parse_site(std::string_view text) {
  if (text == "hand") return Site::hand;
  if (text == "thigh") return Site::thigh;
  fail_validation("unknown site '" + std::string(text) + "' (expected hand or thigh)");
}

namespace {

int read_fixed(std::string_view text, std::size_t pos, std::size_t len, std::string_view whole) {
  int value = 0;
  if (pos + len > text.size()) fail_validation("truncated timestamp '" + std::string(whole) + "'");
  const char* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc{} || ptr != first + len) {
    fail_validation("malformed timestamp '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  const std::string_view whole = text;
  if (text.back() == 'Z') text.remove_suffix(1);

  if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
    fail_validation("malformed timestamp '" + std::string(whole) + "'");
  }
  const int y = read_fixed(text, 0, 4, whole);
  const int mo = read_fixed(text, 5, 2, whole);
  const int d = read_fixed(text, 8, 2, whole);
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(mo)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) fail_validation("invalid calendar date in '" + std::string(whole) + "'");

  int h = 0, mi = 0, s = 0;
  if (text.size() > 10) {
    if ((text[10] != 'T' && text[10] != ' ') || text.size() < 16 || text[13] != ':') {
      fail_validation("malformed timestamp '" + std::string(whole) + "'");
    }
    h = read_fixed(text, 11, 2, whole);
    mi = read_fixed(text, 14, 2, whole);
    if (text.size() > 16) {
      if (text[16] != ':' || text.size() != 19) {
        fail_validation("malformed timestamp '" + std::string(whole) + "'");
      }
      s = read_fixed(text, 17, 2, whole);
    }
    if (h > 23 || mi > 59 || s > 60) fail_validation("invalid time of day in '" + std::string(whole) + "'");
  }
  return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} +
         std::chrono::seconds{s};
}

std::string format_timestamp(Timestamp t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::year_month_day ymd{day};
  const std::chrono::hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                int(hms.minutes().count()), int(hms.seconds().count()));
  return buf;
}

}  // namespace skinspec

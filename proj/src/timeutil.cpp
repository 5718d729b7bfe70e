#include "iopscan/timeutil.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace iopscan {

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

std::optional<Timestamp> assemble(int y, int mo, int d, int h, int mi, int sec, int offset_minutes) {
  using namespace std::chrono;
  if (mo < 1 || mo > 12 || h > 23 || mi > 59 || sec > 60) return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  auto t = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} - minutes{offset_minutes};
  return time_point_cast<seconds>(t);
}

std::optional<Timestamp> parse_iso(std::string_view s) {
  int y, mo, d, h, mi, sec;
  if (s.size() < 19) return std::nullopt;
  if (!read_int(s, 0, 4, y) || s[4] != '-' || !read_int(s, 5, 2, mo) || s[7] != '-' ||
      !read_int(s, 8, 2, d) || (s[10] != 'T' && s[10] != ' ') || !read_int(s, 11, 2, h) ||
      s[13] != ':' || !read_int(s, 14, 2, mi) || s[16] != ':' || !read_int(s, 17, 2, sec)) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  int offset = 0;
  if (pos == s.size() || (s[pos] == 'Z' && pos + 1 == s.size())) {
    offset = 0;
  } else if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
    int oh, om;
    if (!read_int(s, pos + 1, 2, oh) || !read_int(s, pos + 4, 2, om)) return std::nullopt;
    offset = (s[pos] == '-' ? -1 : 1) * (oh * 60 + om);
  } else {
    return std::nullopt;
  }
  return assemble(y, mo, d, h, mi, sec, offset);
}

// "Mon Jun 01 12:30:00 +0000 2015"
std::optional<Timestamp> parse_classic(std::string_view s) {
  static constexpr std::array<std::string_view, 12> kMonths = {
      "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  if (s.size() != 30 || s[3] != ' ' || s[7] != ' ' || s[10] != ' ' || s[19] != ' ' ||
      s[25] != ' ') {
    return std::nullopt;
  }
  int mo = 0;
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (s.substr(4, 3) == kMonths[i]) mo = static_cast<int>(i) + 1;
  }
  int d, h, mi, sec, oh, om, y;
  if (mo == 0 || !read_int(s, 8, 2, d) || !read_int(s, 11, 2, h) || s[13] != ':' ||
      !read_int(s, 14, 2, mi) || s[16] != ':' || !read_int(s, 17, 2, sec) ||
      (s[20] != '+' && s[20] != '-') || !read_int(s, 21, 2, oh) || !read_int(s, 23, 2, om) ||
      !read_int(s, 26, 4, y)) {
    return std::nullopt;
  }
  int offset = (s[20] == '-' ? -1 : 1) * (oh * 60 + om);
  return assemble(y, mo, d, h, mi, sec, offset);
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  if (!text.empty() && std::isdigit(static_cast<unsigned char>(text.front()))) {
    return parse_iso(text);
  }
  return parse_classic(text);
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  auto day_point = floor<days>(ts);
  year_month_day ymd{day_point};
  hh_mm_ss hms{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour, int minute, int second) {
  auto ts = assemble(year, static_cast<int>(month), static_cast<int>(day), hour, minute, second, 0);
  if (!ts) throw std::invalid_argument("invalid calendar date");
  return *ts;
}

Timestamp now_utc() {
  return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

}  // namespace iopscan

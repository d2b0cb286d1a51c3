#include "meolb/timeutil.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace meolb {

namespace {

int read_digits(std::string_view text, std::size_t& pos, std::size_t count) {
  int value = 0;
  for (std::size_t i = 0; i < count; ++i, ++pos) {
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
      throw std::invalid_argument("malformed timestamp '" + std::string(text) + "'");
    }
    value = value * 10 + (text[pos] - '0');
  }
  return value;
}

void expect(std::string_view text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw std::invalid_argument("malformed timestamp '" + std::string(text) + "'");
  }
  ++pos;
}

}  // namespace

TimePoint parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  std::size_t pos = 0;
  const int y = read_digits(text, pos, 4);
  expect(text, pos, '-');
  const int mo = read_digits(text, pos, 2);
  expect(text, pos, '-');
  const int d = read_digits(text, pos, 2);
  expect(text, pos, 'T');
  const int hh = read_digits(text, pos, 2);
  expect(text, pos, ':');
  const int mm = read_digits(text, pos, 2);
  expect(text, pos, ':');
  const int ss = read_digits(text, pos, 2);
  int ms = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    ms = read_digits(text, pos, 3);
  }
  expect(text, pos, 'Z');
  if (pos != text.size()) {
    throw std::invalid_argument("trailing characters in timestamp '" + std::string(text) + "'");
  }

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) {
    throw std::invalid_argument("timestamp out of range '" + std::string(text) + "'");
  }
  return time_point_cast<milliseconds>(sys_days{ymd}) + hours{hh} + minutes{mm} + seconds{ss} +
         milliseconds{ms};
}

std::string format_timestamp(TimePoint t) {
  using namespace std::chrono;
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  auto rest = t - day_point;
  const auto h = duration_cast<hours>(rest);
  rest -= h;
  const auto m = duration_cast<minutes>(rest);
  rest -= m;
  const auto s = duration_cast<seconds>(rest);
  rest -= s;
  const auto ms = rest.count();
  std::string out = fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}", static_cast<int>(ymd.year()),
                                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                                h.count(), m.count(), s.count());
  if (ms != 0) out += fmt::format(".{:03d}", ms);
  out += 'Z';
  return out;
}

}  // namespace meolb

#include "perdura/time.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace perdura {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::dangling_ref: return "DANGLING_REF";
    case Errc::invariant_violation: return "INVARIANT_VIOLATION";
    case Errc::duplicate_id: return "DUPLICATE_ID";
    case Errc::unknown_class: return "UNKNOWN_CLASS";
    case Errc::unknown_individual: return "UNKNOWN_INDIVIDUAL";
    case Errc::unknown_element: return "UNKNOWN_ELEMENT";
    case Errc::name_collision: return "NAME_COLLISION";
    case Errc::instant_mismatch: return "INSTANT_MISMATCH";
    case Errc::kind_mismatch: return "KIND_MISMATCH";
    case Errc::insufficient_answers: return "INSUFFICIENT_ANSWERS";
    case Errc::session_complete: return "SESSION_COMPLETE";
    case Errc::syntax_error: return "SYNTAX_ERROR";
    case Errc::undeclared_entity: return "UNDECLARED_ENTITY";
    case Errc::duplicate_entity: return "DUPLICATE_ENTITY";
    case Errc::cyclic_subtype: return "CYCLIC_SUBTYPE";
    case Errc::not_functional: return "NOT_FUNCTIONAL";
    case Errc::malformed_cq: return "MALFORMED_CQ";
    case Errc::dangling_mapping: return "DANGLING_MAPPING";
    case Errc::schema_mismatch: return "SCHEMA_MISMATCH";
    case Errc::usage: return "USAGE";
    case Errc::io: return "IO";
  }
  return "UNKNOWN";
}

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

// Proleptic Gregorian day count (Howard Hinnant's civil calendar algorithms).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool is_leap(std::int64_t y) {
  return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
}

unsigned last_day_of_month(std::int64_t y, unsigned m) {
  constexpr std::array<unsigned, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return lengths[m - 1];
}

int parse_fixed_uint(std::string_view text, size_t pos, size_t len) {
  int value = 0;
  for (size_t i = pos; i < pos + len; ++i) {
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
      return -1;
    value = value * 10 + (text[i] - '0');
  }
  return value;
}

}  // namespace

TimeInstant TimeInstant::parse(std::string_view iso) {
  auto bad = [&]() -> TimeInstant {
    fail(Errc::syntax_error, "invalid instant '" + std::string(iso) +
                                 "' (expected YYYY-MM-DD or YYYY-MM-DDTHH:MM:SSZ)");
  };
  if (iso.size() != 10 && iso.size() != 20) return bad();
  const int year = parse_fixed_uint(iso, 0, 4);
  const int month = parse_fixed_uint(iso, 5, 2);
  const int day = parse_fixed_uint(iso, 8, 2);
  if (year < 0 || month < 1 || month > 12 || iso[4] != '-' || iso[7] != '-')
    return bad();
  if (day < 1 ||
      day > static_cast<int>(last_day_of_month(year, static_cast<unsigned>(month))))
    return bad();
  std::int64_t secs =
      days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) *
      kSecondsPerDay;
  if (iso.size() == 20) {
    const int hh = parse_fixed_uint(iso, 11, 2);
    const int mm = parse_fixed_uint(iso, 14, 2);
    const int ss = parse_fixed_uint(iso, 17, 2);
    if (iso[10] != 'T' || iso[13] != ':' || iso[16] != ':' || iso[19] != 'Z')
      return bad();
    if (hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss < 0 || ss > 59) return bad();
    secs += hh * 3600 + mm * 60 + ss;
  }
  return from_seconds(secs);
}

TimeInstant TimeInstant::from_days(std::int64_t days_since_epoch) {
  return from_seconds(days_since_epoch * kSecondsPerDay);
}

TimeInstant TimeInstant::from_seconds(std::int64_t seconds_since_epoch) {
  TimeInstant t;
  t.seconds_ = seconds_since_epoch;
  return t;
}

std::int64_t TimeInstant::days() const {
  std::int64_t d = seconds_ / kSecondsPerDay;
  if (seconds_ % kSecondsPerDay < 0) --d;
  return d;
}

std::string TimeInstant::to_string() const {
  const std::int64_t day = days();
  std::int64_t year = 0;
  unsigned month = 0, dom = 0;
  civil_from_days(day, year, month, dom);
  char buf[48];
  const std::int64_t rem = seconds_ - day * kSecondsPerDay;
  if (rem == 0) {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u", static_cast<long long>(year),
                  month, dom);
  } else {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(year), month, dom,
                  static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
  }
  return buf;
}

TimeInterval::TimeInterval(TimeInstant s, std::optional<TimeInstant> e)
    : start(s), end(e) {
  if (end && *end < start)
    fail(Errc::invariant_violation,
         "interval end " + end->to_string() + " precedes start " + start.to_string());
}

bool TimeInterval::contains(TimeInstant t) const {
  if (is_degenerate()) return t == start;
  if (t < start) return false;
  return !end || t < *end;
}

std::vector<TimeInterval> normalize_intervals(std::vector<TimeInterval> intervals) {
  auto upper = [](const TimeInterval& iv) {
    // OPEN sorts after every bounded end.
    return iv.end ? std::pair<int, std::int64_t>(0, iv.end->seconds())
                  : std::pair<int, std::int64_t>(1, 0);
  };
  std::sort(intervals.begin(), intervals.end(),
            [&](const TimeInterval& a, const TimeInterval& b) {
              if (a.start != b.start) return a.start < b.start;
              return upper(a) < upper(b);
            });

  // Pass 1: merge proper intervals that overlap or abut.
  std::vector<TimeInterval> proper;
  std::vector<TimeInstant> points;
  for (const auto& iv : intervals) {
    if (iv.is_degenerate()) {
      points.push_back(iv.start);
      continue;
    }
    if (!proper.empty()) {
      TimeInterval& last = proper.back();
      const bool reaches = !last.end || !(*last.end < iv.start);
      if (reaches) {
        if (last.end && (!iv.end || *last.end < *iv.end)) last.end = iv.end;
        continue;
      }
    }
    proper.push_back(iv);
  }

  // Pass 2: keep only instants not covered by a proper interval, deduplicated.
  std::vector<TimeInterval> result;
  auto next_point = points.begin();
  auto emit_points_before = [&](std::optional<TimeInstant> bound) {
    TimeInstant last_emitted;
    bool any = false;
    while (next_point != points.end() && (!bound || *next_point < *bound)) {
      if (!any || last_emitted != *next_point) {
        result.push_back(TimeInterval::at_instant(*next_point));
        last_emitted = *next_point;
        any = true;
      }
      ++next_point;
    }
  };
  for (const auto& iv : proper) {
    emit_points_before(iv.start);
    // Skip instants inside [start, end).
    while (next_point != points.end() && iv.contains(*next_point)) ++next_point;
    result.push_back(iv);
    if (!iv.end) {
      next_point = points.end();
      break;
    }
  }
  emit_points_before(std::nullopt);
  return result;
}

bool intervals_subset(const std::vector<TimeInterval>& inner,
                      const std::vector<TimeInterval>& outer) {
  for (const auto& in : inner) {
    bool covered = false;
    for (const auto& out : outer) {
      if (in.is_degenerate()) {
        if (out.contains(in.start)) {
          covered = true;
          break;
        }
        continue;
      }
      if (out.is_degenerate()) continue;
      const bool start_ok = !(in.start < out.start);
      const bool end_ok = !out.end || (in.end && !(*out.end < *in.end));
      if (start_ok && end_ok) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

bool intervals_overlap(const TimeInterval& a, const TimeInterval& b) {
  if (a.is_degenerate()) return b.contains(a.start);
  if (b.is_degenerate()) return a.contains(b.start);
  const bool a_before_b_end = !b.end || a.start < *b.end;
  const bool b_before_a_end = !a.end || b.start < *a.end;
  return a_before_b_end && b_before_a_end;
}

bool intervals_overlap(const std::vector<TimeInterval>& a,
                       const std::vector<TimeInterval>& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (intervals_overlap(x, y)) return true;
  return false;
}

Extent::Extent(std::set<std::string> spatial, std::vector<TimeInterval> temporal)
    : spatial_(std::move(spatial)),
      temporal_(normalize_intervals(std::move(temporal))) {}

void Extent::add_interval(TimeInterval interval) {
  temporal_.push_back(interval);
  temporal_ = normalize_intervals(std::move(temporal_));
}

Extent Extent::merge(const Extent& a, const Extent& b) {
  std::set<std::string> spatial = a.spatial_;
  spatial.insert(b.spatial_.begin(), b.spatial_.end());
  std::vector<TimeInterval> temporal = a.temporal_;
  temporal.insert(temporal.end(), b.temporal_.begin(), b.temporal_.end());
  return Extent(std::move(spatial), std::move(temporal));
}

}  // namespace perdura

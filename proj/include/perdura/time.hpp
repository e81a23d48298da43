#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "perdura/errors.hpp"

namespace perdura {

/// A calendar instant (UTC). Day granularity is the baseline resolution;
/// a time-of-day part is accepted and preserved. Internally stored as
/// seconds since 1970-01-01T00:00:00Z (proleptic Gregorian).
class TimeInstant {
 public:
  TimeInstant() = default;

  /// Accepts "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SSZ".
  static TimeInstant parse(std::string_view iso);
  static TimeInstant from_days(std::int64_t days_since_epoch);
  static TimeInstant from_seconds(std::int64_t seconds_since_epoch);

  std::int64_t seconds() const { return seconds_; }
  /// Floor of the containing calendar day.
  std::int64_t days() const;

  /// Canonical text form: date-only when the instant falls on a day
  /// boundary, full "YYYY-MM-DDTHH:MM:SSZ" otherwise.
  std::string to_string() const;

  auto operator<=>(const TimeInstant&) const = default;

 private:
  std::int64_t seconds_ = 0;
};

/// Half-open interval [start, end); an absent end means the interval is
/// ongoing (OPEN) and extends beyond every instant. A degenerate interval
/// with start == end denotes the single instant itself and is reserved for
/// zero-duration objects (events).
struct TimeInterval {
  TimeInstant start;
  std::optional<TimeInstant> end;

  TimeInterval() = default;
  TimeInterval(TimeInstant s, std::optional<TimeInstant> e);

  static TimeInterval open_ended(TimeInstant s) { return {s, std::nullopt}; }
  static TimeInterval at_instant(TimeInstant t) { return {t, t}; }

  bool is_open() const { return !end.has_value(); }
  bool is_degenerate() const { return end && *end == start; }

  /// Point membership; a degenerate interval contains exactly its instant.
  bool contains(TimeInstant t) const;

  bool operator==(const TimeInterval&) const = default;
};

/// Sorts, merges overlapping and abutting proper intervals, absorbs
/// degenerate instants covered by proper intervals, and drops duplicate
/// instants. The result is the canonical form; idempotent.
std::vector<TimeInterval> normalize_intervals(std::vector<TimeInterval> intervals);

/// True when every point of `inner` lies inside `outer`; both sides must be
/// normalized.
bool intervals_subset(const std::vector<TimeInterval>& inner,
                      const std::vector<TimeInterval>& outer);

/// True when the two intervals share at least one instant. A degenerate
/// interval overlaps iff the other side contains its point.
bool intervals_overlap(const TimeInterval& a, const TimeInterval& b);

/// True when any interval of `a` overlaps any interval of `b`.
bool intervals_overlap(const std::vector<TimeInterval>& a,
                       const std::vector<TimeInterval>& b);

/// A spatio-temporal extension: opaque spatial-region tokens plus a
/// normalized set of disjoint time intervals. Equality of extents is the
/// extensionalist identity criterion for 4D objects.
class Extent {
 public:
  Extent() = default;
  Extent(std::set<std::string> spatial, std::vector<TimeInterval> temporal);

  const std::set<std::string>& spatial() const { return spatial_; }
  const std::vector<TimeInterval>& temporal() const { return temporal_; }

  bool empty() const { return spatial_.empty() && temporal_.empty(); }

  void add_spatial(std::string token) { spatial_.insert(std::move(token)); }
  void add_interval(TimeInterval interval);

  /// Union of two extents, normalized.
  static Extent merge(const Extent& a, const Extent& b);

  bool operator==(const Extent&) const = default;

 private:
  std::set<std::string> spatial_;
  std::vector<TimeInterval> temporal_;  // always normalized
};

}  // namespace perdura

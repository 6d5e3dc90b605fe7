#pragma once

#include <algorithm>
#include <cmath>

namespace mobadda {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double length(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return length(b - a); }

// Moves `from` toward `to` by at most `step` units; never overshoots.
inline Vec2 move_toward(Vec2 from, Vec2 to, double step) {
  const Vec2 d = to - from;
  const double len = length(d);
  if (len <= step || len == 0.0) return to;
  return from + d * (step / len);
}

inline Vec2 clamp_to(Vec2 p, Vec2 extent) {
  return {std::clamp(p.x, 0.0, extent.x), std::clamp(p.y, 0.0, extent.y)};
}

// Point at arc length `s` along a polyline (clamped to the ends).
template <typename Range>
Vec2 point_along(const Range& polyline, double s) {
  auto it = std::begin(polyline);
  const auto end = std::end(polyline);
  if (it == end) return {};
  Vec2 prev = *it;
  for (++it; it != end; ++it) {
    const double seg = distance(prev, *it);
    if (s <= seg) return move_toward(prev, *it, std::max(0.0, s));
    s -= seg;
    prev = *it;
  }
  return prev;
}

template <typename Range>
double polyline_length(const Range& polyline) {
  double total = 0.0;
  auto it = std::begin(polyline);
  const auto end = std::end(polyline);
  if (it == end) return 0.0;
  Vec2 prev = *it;
  for (++it; it != end; ++it) {
    total += distance(prev, *it);
    prev = *it;
  }
  return total;
}

}  // namespace mobadda

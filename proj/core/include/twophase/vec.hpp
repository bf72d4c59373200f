#pragma once

#include <cmath>

namespace twophase {

/// Plane vector. 1D data lives in the x component with y == 0, so gradient
/// and flux code is dimension-agnostic.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator*(Vec2 v, double s) { return s * v; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 v) { return dot(v, v); }
inline double norm(Vec2 v) { return std::sqrt(norm2(v)); }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// 90-degree counterclockwise rotation.
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

}  // namespace twophase

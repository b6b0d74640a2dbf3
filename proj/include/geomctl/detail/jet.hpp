#pragma once

#include <array>
#include <cmath>

namespace geomctl::detail {

// Truncated Taylor jet (value, first and second time derivative).
struct Jet {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;
};

inline Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
inline Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
inline Jet operator-(Jet a) { return {-a.v, -a.d, -a.dd}; }
inline Jet operator*(Jet a, Jet b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}
inline Jet operator*(double s, Jet a) { return {s * a.v, s * a.d, s * a.dd}; }

inline Jet reciprocal(Jet a) {
  const double r = 1.0 / a.v;
  return {r, -a.d * r * r, (2.0 * a.d * a.d * r - a.dd) * r * r};
}
inline Jet operator/(Jet a, Jet b) { return a * reciprocal(b); }

inline Jet sqrt(Jet a) {
  const double s = std::sqrt(a.v);
  const double ds = a.d / (2.0 * s);
  return {s, ds, (a.dd - 2.0 * ds * ds) / (2.0 * s)};
}

using JetVec = std::array<Jet, 3>;

inline Jet dot(const JetVec& a, const JetVec& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline JetVec cross(const JetVec& a, const JetVec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline JetVec scale(Jet s, const JetVec& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline JetVec sub(const JetVec& a, const JetVec& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline JetVec normalize(const JetVec& a) { return scale(reciprocal(sqrt(dot(a, a))), a); }

}  // namespace geomctl::detail

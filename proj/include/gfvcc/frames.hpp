#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace gfvcc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kThird = 2.0 * std::numbers::pi / 3.0;

using Complex = std::complex<double>;

/// Instantaneous per-phase signal triple (voltages or currents, per-unit).
struct ThreePhase {
    double a{0.0};
    double b{0.0};
    double c{0.0};

    ThreePhase operator+(const ThreePhase& o) const { return {a + o.a, b + o.b, c + o.c}; }
    ThreePhase operator-(const ThreePhase& o) const { return {a - o.a, b - o.b, c - o.c}; }
    ThreePhase operator*(double s) const { return {a * s, b * s, c * s}; }
};

/// Two-component vector in a rotating (d,q) or stationary (alpha,beta) frame.
/// Interchangeable with the complex number x + j*y.
struct Vec2 {
    double x{0.0};
    double y{0.0};

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
    Complex to_complex() const { return {x, y}; }
    static Vec2 from_complex(Complex z) { return {z.real(), z.imag()}; }
};

/// Positive- and negative-sequence pair extracted from a three-phase signal.
struct SequencePair {
    Vec2 pos;
    Vec2 neg;
};

/// Amplitude-invariant projection onto the rotating frame at angle theta.
/// A balanced unit-amplitude cosine set locked to theta maps to (1, 0).
inline Vec2 park(double theta, const ThreePhase& abc) {
    const double ca = std::cos(theta);
    const double cb = std::cos(theta - kThird);
    const double cc = std::cos(theta + kThird);
    const double sa = std::sin(theta);
    const double sb = std::sin(theta - kThird);
    const double sc = std::sin(theta + kThird);
    return {(2.0 / 3.0) * (ca * abc.a + cb * abc.b + cc * abc.c),
            (2.0 / 3.0) * (-sa * abc.a - sb * abc.b - sc * abc.c)};
}

/// Zero-sequence-free pseudoinverse of park(); park(theta, inv_park(theta, v)) == v.
inline ThreePhase inv_park(double theta, const Vec2& dq) {
    const double ta = theta;
    const double tb = theta - kThird;
    const double tc = theta + kThird;
    return {std::cos(ta) * dq.x - std::sin(ta) * dq.y,
            std::cos(tb) * dq.x - std::sin(tb) * dq.y,
            std::cos(tc) * dq.x - std::sin(tc) * dq.y};
}

/// Clarke transform (park at theta = 0): abc -> stationary alpha/beta.
inline Vec2 clarke(const ThreePhase& abc) { return park(0.0, abc); }

inline ThreePhase inv_clarke(const Vec2& ab) { return inv_park(0.0, ab); }

/// 2-D rotation by theta; norm-preserving.
inline Vec2 rotate(double theta, const Vec2& v) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double theta) {
    theta = std::remainder(theta, kTwoPi);
    if (theta <= -std::numbers::pi) theta += kTwoPi;
    return theta;
}

inline bool finite(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); }
inline bool finite(const ThreePhase& v) {
    return std::isfinite(v.a) && std::isfinite(v.b) && std::isfinite(v.c);
}

}  // namespace gfvcc

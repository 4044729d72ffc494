#pragma once

#include <cmath>

#include "gfvcc/frames.hpp"

namespace gfvcc {

namespace detail {
// Coefficients are considered stale once the requested center frequency moves
// by more than this (rad/s); realizes real-time adaptive retuning.
inline constexpr double kRetuneTol = 1e-9;
}  // namespace detail

/// First-order low-pass, bilinear discretization, unit DC gain.
class LowPassFilter {
  public:
    LowPassFilter() = default;
    explicit LowPassFilter(double corner_rad_s) : corner_(corner_rad_s) {}

    /// Steady-state pre-charge: output equals input from the first step.
    void init(double value) {
        state_ = value;
        prev_in_ = value;
    }

    double step(double input, double dt) {
        // Trapezoidal update of y' = wc (u - y).
        const double a = corner_ * dt / 2.0;
        const double y = ((1.0 - a) * state_ + a * (input + prev_in_)) / (1.0 + a);
        state_ = y;
        prev_in_ = input;
        return y;
    }

    double value() const { return state_; }

  private:
    double corner_{2.0 * std::numbers::pi * 10.0};
    double state_{0.0};
    double prev_in_{0.0};
};

/// First-order high-pass (complement of the low-pass), zero DC gain.
class HighPassFilter {
  public:
    HighPassFilter() = default;
    explicit HighPassFilter(double corner_rad_s) : lpf_(corner_rad_s) {}

    void init(double value) { lpf_.init(value); }

    double step(double input, double dt) { return input - lpf_.step(input, dt); }

  private:
    LowPassFilter lpf_;
};

/// Two-channel first-order high-pass for dq signals.
class HighPassFilter2 {
  public:
    HighPassFilter2() = default;
    explicit HighPassFilter2(double corner_rad_s) : x_(corner_rad_s), y_(corner_rad_s) {}

    void init(const Vec2& v) {
        x_.init(v.x);
        y_.init(v.y);
    }

    Vec2 step(const Vec2& v, double dt) { return {x_.step(v.x, dt), y_.step(v.y, dt)}; }

  private:
    HighPassFilter x_;
    HighPassFilter y_;
};

/// Two-channel first-order low-pass for dq signals.
class LowPassFilter2 {
  public:
    LowPassFilter2() = default;
    explicit LowPassFilter2(double corner_rad_s) : x_(corner_rad_s), y_(corner_rad_s) {}

    void init(const Vec2& v) {
        x_.init(v.x);
        y_.init(v.y);
    }

    Vec2 step(const Vec2& v, double dt) { return {x_.step(v.x, dt), y_.step(v.y, dt)}; }

  private:
    LowPassFilter x_;
    LowPassFilter y_;
};

/// Adaptive biquad notch (s^2 + 4w^2) / (s^2 + 4 zeta w s + 4 w^2): rejects
/// exactly twice the supplied center frequency, unit DC gain. Coefficients are
/// recomputed whenever the center frequency input changes.
class NotchFilter {
  public:
    NotchFilter() = default;
    explicit NotchFilter(double zeta) : zeta_(zeta) {}

    void init(double value) {
        // DC pre-charge: with unit DC gain the internal DF2T states settle to
        // s1 = (b1 - a1) v, s2 = (b2 - a2) v for a held input v.
        precharge_ = value;
        tone_ = false;
        primed_ = false;
    }

    /// Pre-charge for a pure 2w input tone: this channel carries
    /// Re(u e^{j 2w t}) with phasor `u` at the init instant. The states are
    /// set to the sinusoidal steady state, so the (notched) output starts at
    /// its asymptotic value instead of passing the tone through.
    void init_tone(const Complex& u) {
        tone_phasor_ = u;
        tone_ = true;
        primed_ = false;
    }

    double step(double input, double omega_rad_s, double dt) {
        retune(omega_rad_s, dt);
        if (!primed_) {
            if (tone_) {
                const Complex z = std::polar(1.0, 2.0 * omega_rad_s * dt);
                const Complex num = b0_ + b1_ / z + b2_ / (z * z);
                const Complex den = 1.0 + a1_ / z + a2_ / (z * z);
                const Complex y = num / den * tone_phasor_;
                const Complex s2 = (b2_ * tone_phasor_ - a2_ * y) / z;
                const Complex s1 = (b1_ * tone_phasor_ - a1_ * y + s2) / z;
                s1_ = s1.real();
                s2_ = s2.real();
            } else {
                // DC steady state with unit gain: out = in = v
                s1_ = (1.0 - b0_) * precharge_;
                s2_ = (b2_ - a2_) * precharge_;
            }
            primed_ = true;
        }
        const double out = b0_ * input + s1_;
        s1_ = b1_ * input - a1_ * out + s2_;
        s2_ = b2_ * input - a2_ * out;
        return out;
    }

    double zeta() const { return zeta_; }

  private:
    void retune(double omega, double dt) {
        if (std::abs(omega - omega_cached_) <= detail::kRetuneTol && dt == dt_cached_) return;
        omega_cached_ = omega;
        dt_cached_ = dt;
        // RBJ notch at w0 = 2*omega with Q = 1/(2*zeta); the discrete zero sits
        // exactly on the unit circle at w0 so a 2w tone is annihilated.
        const double w0 = 2.0 * omega * dt;
        const double cw = std::cos(w0);
        const double alpha = std::sin(w0) * zeta_;
        const double a0 = 1.0 + alpha;
        b0_ = 1.0 / a0;
        b1_ = -2.0 * cw / a0;
        b2_ = 1.0 / a0;
        a1_ = b1_;
        a2_ = (1.0 - alpha) / a0;
    }

    double zeta_{0.7};
    double omega_cached_{-1.0};
    double dt_cached_{-1.0};
    double b0_{1.0}, b1_{0.0}, b2_{0.0}, a1_{0.0}, a2_{0.0};
    double s1_{0.0}, s2_{0.0};
    double precharge_{0.0};
    Complex tone_phasor_{0.0, 0.0};
    bool tone_{false};
    bool primed_{true};
};

/// Two-channel adaptive notch for dq signals.
class NotchFilter2 {
  public:
    NotchFilter2() = default;
    explicit NotchFilter2(double zeta) : x_(zeta), y_(zeta) {}

    void init(const Vec2& v) {
        x_.init(v.x);
        y_.init(v.y);
    }

    /// Pre-charge for a positively rotating 2w quadrature pair whose phasor
    /// at the init instant is `v0`: x carries Re(u e^{j2wt}), y carries
    /// Im(u e^{j2wt}) = Re(-ju e^{j2wt}).
    void init_tone(const Vec2& v0) {
        const Complex u = v0.to_complex();
        x_.init_tone(u);
        y_.init_tone(Complex{0.0, -1.0} * u);
    }

    Vec2 step(const Vec2& v, double omega_rad_s, double dt) {
        return {x_.step(v.x, omega_rad_s, dt), y_.step(v.y, omega_rad_s, dt)};
    }

  private:
    NotchFilter x_;
    NotchFilter y_;
};

/// Adaptive band-pass a_ff s / (s^2 + a_ff s + w_r^2) with unit gain at the
/// center frequency; the center tracks the supplied w_r.
class BandPassFilter {
  public:
    BandPassFilter() = default;
    explicit BandPassFilter(double bandwidth_rad_s) : bandwidth_(bandwidth_rad_s) {}

    /// Pre-charge for a steady sinusoidal input Re{u z^n}, z = e^{jw dt}, so
    /// the pass-band tone flows through without a startup transient.
    void init(const Complex& u, double center_rad_s, double dt) {
        retune(center_rad_s, dt);
        const Complex z = std::polar(1.0, center_rad_s * dt);
        const Complex h =
            b0_ * (1.0 - 1.0 / (z * z)) / (1.0 + a1_ / z + a2_ / (z * z));
        const Complex s2 = (-b0_ - a2_ * h) * u / z;
        const Complex s1 = (-a1_ * h * u + s2) / z;
        s1_ = s1.real();
        s2_ = s2.real();
    }

    double step(double input, double center_rad_s, double dt) {
        retune(center_rad_s, dt);
        const double out = b0_ * input + s1_;
        s1_ = -a1_ * out + s2_;
        s2_ = -b0_ * input - a2_ * out;
        return out;
    }

  private:
    void retune(double center, double dt) {
        if (std::abs(center - center_cached_) <= detail::kRetuneTol && dt == dt_cached_) return;
        center_cached_ = center;
        dt_cached_ = dt;
        // RBJ constant-peak band-pass, Q = w0 / bandwidth.
        const double w0 = center * dt;
        const double cw = std::cos(w0);
        const double q = center / bandwidth_;
        const double alpha = std::sin(w0) / (2.0 * q);
        const double a0 = 1.0 + alpha;
        b0_ = alpha / a0;
        a1_ = -2.0 * cw / a0;
        a2_ = (1.0 - alpha) / a0;
    }

    double bandwidth_{2.0 * std::numbers::pi * 200.0};
    double center_cached_{-1.0};
    double dt_cached_{-1.0};
    double b0_{0.0}, a1_{0.0}, a2_{0.0};
    double s1_{0.0}, s2_{0.0};
};

/// Two-channel adaptive band-pass for stationary-frame signals.
class BandPassFilter2 {
  public:
    BandPassFilter2() = default;
    explicit BandPassFilter2(double bandwidth_rad_s) : x_(bandwidth_rad_s), y_(bandwidth_rad_s) {}

    /// Pre-charge for the rotating phasor v0 e^{jwt} sampled at t = 0.
    void init(const Vec2& v0, double center_rad_s, double dt) {
        const Complex v = v0.to_complex();
        x_.init(v, center_rad_s, dt);
        y_.init(Complex{0.0, -1.0} * v, center_rad_s, dt);
    }

    Vec2 step(const Vec2& v, double center_rad_s, double dt) {
        return {x_.step(v.x, center_rad_s, dt), y_.step(v.y, center_rad_s, dt)};
    }

  private:
    BandPassFilter x_;
    BandPassFilter y_;
};

/// Positive/negative sequence extraction: park at +/- theta followed by the
/// adaptive notch that strips the 2w cross-coupling terms.
class SequenceExtractor {
  public:
    SequenceExtractor() = default;
    explicit SequenceExtractor(double zeta) : pos_(zeta), neg_(zeta) {}

    /// Assumes a balanced (positive-sequence only) operating point, so the
    /// negative-frame input is a pure 2w tone with this instantaneous value.
    void init(const ThreePhase& abc, double theta) {
        pos_.init(park(theta, abc));
        neg_.init_tone(park(-theta, abc));
    }

    SequencePair step(const ThreePhase& abc, double theta, double omega_rad_s, double dt) {
        return {pos_.step(park(theta, abc), omega_rad_s, dt),
                neg_.step(park(-theta, abc), omega_rad_s, dt)};
    }

  private:
    NotchFilter2 pos_;
    NotchFilter2 neg_;
};

}  // namespace gfvcc

#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "gfvcc/frames.hpp"

namespace gfvcc {

/// Peak phase-current magnitudes a/b/c given positive and negative sequence
/// phasors in their own rotating frames:
///   I_x = sqrt(|i+|^2 + |i-|^2 + 2 Re{ i+ i- e^{j 2 lambda_x} })
/// with lambda_a = 0, lambda_b = -2pi/3, lambda_c = +2pi/3.
inline std::array<double, 3> phase_current_magnitudes(const Vec2& ipos, const Vec2& ineg) {
    const Complex p = ipos.to_complex();
    const Complex n = ineg.to_complex();
    const double pp = std::norm(p);
    const double nn = std::norm(n);
    const Complex cross = p * n;
    std::array<double, 3> out{};
    const std::array<double, 3> lambda{0.0, -kThird, kThird};
    for (int k = 0; k < 3; ++k) {
        const double m2 =
            pp + nn + 2.0 * (cross * std::polar(1.0, 2.0 * lambda[k])).real();
        out[k] = std::sqrt(std::max(m2, 0.0));
    }
    return out;
}

struct LimiterResult {
    Vec2 ipos;
    Vec2 ineg;
    double gamma{1.0};  // scaling applied to the positive-sequence reference
};

/// Balanced radial limiter: negative sequence forced to zero, positive
/// sequence scaled onto the |i| = I_lim circle if outside it.
inline LimiterResult limit_balanced(const Vec2& ipos, double i_lim) {
    const double mag = ipos.norm();
    LimiterResult r{ipos, Vec2{0.0, 0.0}, 1.0};
    if (mag > i_lim && mag > 0.0) {
        r.gamma = i_lim / mag;
        r.ipos = ipos * r.gamma;
    }
    return r;
}

/// Equal downscaling: both sequences shrink by the same factor so the worst
/// phase peak lands exactly on I_lim.
inline LimiterResult limit_equal_downscale(const Vec2& ipos, const Vec2& ineg, double i_lim) {
    const auto mags = phase_current_magnitudes(ipos, ineg);
    const double worst = *std::max_element(mags.begin(), mags.end());
    LimiterResult r{ipos, ineg, 1.0};
    if (worst > i_lim && worst > 0.0) {
        const double g = i_lim / worst;
        r.gamma = g;
        r.ipos = ipos * g;
        r.ineg = ineg * g;
    }
    return r;
}

/// Negative-sequence-priority limiter: keeps i- untouched and shrinks only i+
/// so the worst phase peak meets I_lim. With P = |i+|, N = |i-| and
/// R_x = Re{ i+ i- e^{j 2 lambda_x} } for the worst phase, the scale is
///   gamma = ( sqrt( P^2 (I_lim^2 - N^2) + R_x^2 ) - R_x ) / P^2.
/// If even i+ = 0 violates the limit, i- itself is shrunk radially.
inline LimiterResult limit_ns_priority(const Vec2& ipos, const Vec2& ineg, double i_lim) {
    const auto mags = phase_current_magnitudes(ipos, ineg);
    const double worst = *std::max_element(mags.begin(), mags.end());
    LimiterResult r{ipos, ineg, 1.0};
    if (worst <= i_lim) return r;

    const double nmag = ineg.norm();
    if (nmag >= i_lim) {
        // Cannot honor the priority request: fall back to i- alone at the limit.
        r.gamma = 0.0;
        r.ipos = Vec2{0.0, 0.0};
        r.ineg = nmag > 0.0 ? ineg * (i_lim / nmag) : ineg;
        return r;
    }

    const double pmag = ipos.norm();
    if (pmag <= 0.0) return r;  // worst <= nmag < i_lim already handled above

    // The worst phase is invariant under scaling of i+ (only R_x changes sign
    // with gamma > 0 keeping its phase), so solve on the current worst phase.
    const auto worst_it = std::max_element(mags.begin(), mags.end());
    const int idx = static_cast<int>(worst_it - mags.begin());
    const std::array<double, 3> lambda{0.0, -kThird, kThird};
    const Complex cross = ipos.to_complex() * ineg.to_complex();
    const double rx = (cross * std::polar(1.0, 2.0 * lambda[idx])).real();

    const double disc = pmag * pmag * (i_lim * i_lim - nmag * nmag) + rx * rx;
    const double g = (std::sqrt(std::max(disc, 0.0)) - rx) / (pmag * pmag);
    r.gamma = std::clamp(g, 0.0, 1.0);
    r.ipos = ipos * r.gamma;
    return r;
}

}  // namespace gfvcc

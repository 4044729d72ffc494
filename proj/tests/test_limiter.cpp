#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gfvcc/limiter.hpp"

using namespace gfvcc;
using Catch::Approx;

namespace {

// per-phase instantaneous waveform reconstructed from the two sequences
double phase_waveform(const Vec2& ipos, const Vec2& ineg, int phase, double theta) {
    const ThreePhase abc = inv_park(theta, ipos) + inv_park(-theta, ineg);
    return phase == 0 ? abc.a : (phase == 1 ? abc.b : abc.c);
}

// numerical peak over one fundamental period: dense sampling of the squared
// waveform plus one parabolic refinement around the coarse maximum
double waveform_peak(const Vec2& ipos, const Vec2& ineg, int phase) {
    constexpr int kSamples = 2048;
    double best = -1.0;
    int best_i = 0;
    for (int i = 0; i < kSamples; ++i) {
        const double th = kTwoPi * i / kSamples;
        const double f = phase_waveform(ipos, ineg, phase, th);
        if (f * f > best) {
            best = f * f;
            best_i = i;
        }
    }
    const double h = kTwoPi / kSamples;
    const double t0 = kTwoPi * best_i / kSamples;
    auto g = [&](double th) {
        const double f = phase_waveform(ipos, ineg, phase, th);
        return f * f;
    };
    const double gm = g(t0 - h), g0 = g(t0), gp = g(t0 + h);
    const double denom = gm - 2.0 * g0 + gp;
    double th_star = t0;
    if (std::abs(denom) > 1e-300) th_star = t0 + 0.5 * h * (gm - gp) / denom;
    return std::sqrt(std::max({g0, g(th_star)}));
}

double worst_waveform_peak(const Vec2& ipos, const Vec2& ineg) {
    double w = 0.0;
    for (int p = 0; p < 3; ++p) w = std::max(w, waveform_peak(ipos, ineg, p));
    return w;
}

// bisection on the positive-sequence scale until the worst waveform peak
// meets the limit
double bisect_gamma(const Vec2& ipos, const Vec2& ineg, double i_lim) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = (lo + hi) / 2.0;
        if (worst_waveform_peak(ipos * mid, ineg) > i_lim) hi = mid;
        else lo = mid;
    }
    return (lo + hi) / 2.0;
}

}  // namespace

TEST_CASE("phase magnitudes: balanced case", "[limiter]") {
    const auto m = phase_current_magnitudes(Vec2{0.6, -0.8}, Vec2{0.0, 0.0});
    for (int p = 0; p < 3; ++p) CHECK(m[p] == Approx(1.0).margin(1e-12));
}

TEST_CASE("phase magnitudes: worked example", "[limiter]") {
    const auto m = phase_current_magnitudes(Vec2{1.0, 0.0}, Vec2{0.5, 0.0});
    CHECK(m[0] == Approx(1.5).margin(1e-12));
    CHECK(m[1] == Approx(std::sqrt(0.75)).margin(1e-12));
    CHECK(m[2] == Approx(std::sqrt(0.75)).margin(1e-12));
}

TEST_CASE("phase magnitudes invariant under counter-rotation", "[limiter]") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(-1.5, 1.5), ang(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Vec2 ip{val(rng), val(rng)};
        const Vec2 in{val(rng), val(rng)};
        const double phi = ang(rng);
        const auto m0 = phase_current_magnitudes(ip, in);
        const auto m1 = phase_current_magnitudes(rotate(phi, ip), rotate(-phi, in));
        for (int p = 0; p < 3; ++p) CHECK(m1[p] == Approx(m0[p]).margin(1e-12));
    }
}

TEST_CASE("phase magnitude formula matches the waveform peak", "[limiter]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> val(-1.5, 1.5);
    for (int i = 0; i < 500; ++i) {
        const Vec2 ip{val(rng), val(rng)};
        const Vec2 in{val(rng), val(rng)};
        const auto m = phase_current_magnitudes(ip, in);
        for (int p = 0; p < 3; ++p)
            CHECK(m[p] == Approx(waveform_peak(ip, in, p)).margin(1e-6));
    }
}

TEST_CASE("balanced limiter projects radially", "[limiter]") {
    const auto keep = limit_balanced(Vec2{0.6, 0.8}, 1.2);
    CHECK(keep.gamma == 1.0);
    CHECK(keep.ipos.x == 0.6);

    const auto cut = limit_balanced(Vec2{1.2, 1.6}, 1.2);
    CHECK(cut.ipos.x == Approx(0.72));
    CHECK(cut.ipos.y == Approx(0.96));
    CHECK(cut.ipos.norm() == Approx(1.2).margin(1e-12));
    CHECK(std::atan2(cut.ipos.y, cut.ipos.x) == Approx(std::atan2(1.6, 1.2)).margin(1e-12));
}

TEST_CASE("equal downscaling meets the limit and preserves the ratio", "[limiter]") {
    const auto keep = limit_equal_downscale(Vec2{0.5, 0.0}, Vec2{0.1, 0.0}, 1.2);
    CHECK(keep.gamma == 1.0);

    const auto cut = limit_equal_downscale(Vec2{1.0, 0.0}, Vec2{0.5, 0.0}, 1.2);
    CHECK(cut.gamma == Approx(0.8));
    CHECK(cut.ipos.x == Approx(0.8));
    CHECK(cut.ineg.x == Approx(0.4));
    CHECK(worst_waveform_peak(cut.ipos, cut.ineg) == Approx(1.2).margin(1e-6));

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> val(-1.5, 1.5);
    for (int i = 0; i < 500; ++i) {
        const Vec2 ip{val(rng), val(rng)};
        const Vec2 in{val(rng), val(rng)};
        const auto r = limit_equal_downscale(ip, in, 1.2);
        const Complex ratio_in = in.to_complex() / ip.to_complex();
        const Complex ratio_out = r.ineg.to_complex() / r.ipos.to_complex();
        CHECK(std::abs(ratio_out - ratio_in) < 1e-9);
        const auto m = phase_current_magnitudes(r.ipos, r.ineg);
        for (double v : m) CHECK(v <= 1.2 + 1e-9);
    }
}

TEST_CASE("priority limiter worked example", "[limiter]") {
    const auto r = limit_ns_priority(Vec2{1.0, 0.0}, Vec2{0.5, 0.0}, 1.2);
    CHECK(r.gamma == Approx(0.7).margin(1e-12));
    CHECK(r.ipos.x == Approx(0.7).margin(1e-12));
    CHECK(r.ineg.x == Approx(0.5));
    const auto m = phase_current_magnitudes(r.ipos, r.ineg);
    CHECK(*std::max_element(m.begin(), m.end()) == Approx(1.2).margin(1e-12));
}

TEST_CASE("priority limiter case split", "[limiter]") {
    // negative sequence alone violates: radial fallback, i+ dropped
    const auto fb = limit_ns_priority(Vec2{0.2, 0.1}, Vec2{1.3, 0.0}, 1.2);
    CHECK(fb.ipos.norm() == 0.0);
    CHECK(fb.ineg.norm() == Approx(1.2).margin(1e-12));

    // no violation: untouched
    const auto keep = limit_ns_priority(Vec2{0.5, 0.0}, Vec2{0.1, 0.0}, 1.2);
    CHECK(keep.gamma == 1.0);
    CHECK(keep.ipos.x == 0.5);
    CHECK(keep.ineg.x == 0.1);

    // zero positive sequence with violation resolved by convention
    const auto zp = limit_ns_priority(Vec2{0.0, 0.0}, Vec2{1.5, 0.0}, 1.2);
    CHECK(zp.ipos.norm() == 0.0);
    CHECK(zp.ineg.norm() == Approx(1.2).margin(1e-12));
}

TEST_CASE("priority limiter matches the bisection oracle", "[limiter]") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> val(-1.5, 1.5), lim(0.5, 2.0);
    int engaged = 0;
    for (int i = 0; i < 2000 && engaged < 500; ++i) {
        const Vec2 ip{val(rng), val(rng)};
        const Vec2 in{val(rng), val(rng)};
        const double i_lim = lim(rng);
        const auto m = phase_current_magnitudes(ip, in);
        if (*std::max_element(m.begin(), m.end()) <= i_lim) continue;
        if (in.norm() >= i_lim) continue;
        ++engaged;
        const auto r = limit_ns_priority(ip, in, i_lim);
        CHECK(r.gamma == Approx(bisect_gamma(ip, in, i_lim)).margin(1e-9));
        const auto mm = phase_current_magnitudes(r.ipos, r.ineg);
        CHECK(*std::max_element(mm.begin(), mm.end()) == Approx(i_lim).margin(1e-9));
    }
    REQUIRE(engaged > 100);
}

TEST_CASE("limiter safety under random inputs", "[limiter]") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (int i = 0; i < 20000; ++i) {
        const Vec2 ip{val(rng), val(rng)};
        const Vec2 in{val(rng), val(rng)};
        for (auto r : {limit_equal_downscale(ip, in, 1.2), limit_ns_priority(ip, in, 1.2)}) {
            const auto m = phase_current_magnitudes(r.ipos, r.ineg);
            for (double v : m) CHECK(v <= 1.2 + 1e-9);
        }
        const auto rb = limit_balanced(ip, 1.2);
        CHECK(rb.ipos.norm() <= 1.2 + 1e-9);
    }
}

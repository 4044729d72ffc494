#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gfvcc/frames.hpp"
#include "gfvcc/scenario.hpp"

namespace gfvcc {

/// Uniformly sampled simulation output; row-major with named columns.
struct Trajectory {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw std::runtime_error("trajectory: no column named " + name);
    }
};

inline std::vector<std::string> trajectory_columns(std::size_t converter_count) {
    std::vector<std::string> cols{"t_s"};
    for (std::size_t k = 0; k < converter_count; ++k) {
        const std::string s = "_" + std::to_string(k);
        for (const char* base :
             {"vpcc_a", "vpcc_b", "vpcc_c", "ic_a", "ic_b", "ic_c", "p", "q", "freq_hz",
              "vv", "fault_flag", "id_pos_ref", "iq_pos_ref", "id_neg_ref", "iq_neg_ref",
              "limiter_gamma"})
            cols.push_back(base + s);
    }
    cols.push_back("ig_a");
    cols.push_back("ig_b");
    cols.push_back("ig_c");
    return cols;
}

/// Flat, ordered key-value report.
using MetricsReport = std::vector<std::pair<std::string, double>>;

namespace detail {

/// Single-bin DFT of samples y at frequency f (Hz), assuming uniform spacing
/// dt starting at t0 = 0; returns the (amplitude-scaled) complex bin.
inline Complex dft_bin(const std::vector<double>& y, double dt, double f) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < y.size(); ++i)
        acc += y[i] * std::polar(1.0, -kTwoPi * f * static_cast<double>(i) * dt);
    return acc * (2.0 / static_cast<double>(y.size()));
}

}  // namespace detail

/// Computes the metrics report from a trajectory. The steady analysis window
/// is the last 60% of the fault interval, or the last 60% of the run when the
/// scenario has no fault. Window-based metrics shorter than two fundamental
/// periods are reported as unavailable (`*_available = 0`).
inline MetricsReport compute_metrics(const Trajectory& traj, const Scenario& sc) {
    MetricsReport rep;
    if (traj.rows.empty()) return rep;

    const double f0 = sc.grid_freq_hz;
    const double t_end = traj.rows.back()[0];
    double w0, w1;
    if (sc.fault) {
        const double span = sc.fault->t_clear - sc.fault->t_start;
        w0 = sc.fault->t_clear - 0.6 * span;
        w1 = sc.fault->t_clear;
    } else {
        w0 = 0.4 * t_end;
        w1 = t_end;
    }

    const double dt = traj.rows.size() > 1 ? traj.rows[1][0] - traj.rows[0][0] : 0.0;
    const double period = 1.0 / f0;
    const auto n_cycles = static_cast<long>(std::floor((w1 - w0) / period + 1e-9));
    const bool window_ok = n_cycles >= 2 && dt > 0.0;
    // trim the window to an integer number of fundamental periods ending at w1
    const double tw0 = w1 - static_cast<double>(n_cycles) * period;

    auto in_window = [&](double t) { return t >= tw0 - dt / 2.0 && t < w1 - dt / 2.0; };

    for (std::size_t k = 0; k < sc.converters.size(); ++k) {
        const std::string s = "_" + std::to_string(k);
        const std::string pfx = "c" + std::to_string(k) + "_";
        const auto ci_t = traj.column("t_s");
        const auto ci_p = traj.column("p" + s);
        const auto ci_f = traj.column("freq_hz" + s);
        const auto ci_idp = traj.column("id_pos_ref" + s);
        const auto ci_iqp = traj.column("iq_pos_ref" + s);
        const std::array<std::size_t, 3> ci_ic{traj.column("ic_a" + s),
                                               traj.column("ic_b" + s),
                                               traj.column("ic_c" + s)};
        const std::array<std::size_t, 3> ci_v{traj.column("vpcc_a" + s),
                                              traj.column("vpcc_b" + s),
                                              traj.column("vpcc_c" + s)};

        double max_i = 0.0, max_i_win = 0.0, max_fdev = 0.0;
        double ipos_sum = 0.0;
        std::vector<double> p_win;
        std::vector<std::array<double, 3>> v_win;
        std::size_t n_win = 0;
        for (const auto& row : traj.rows) {
            const double t = row[ci_t];
            for (auto c : ci_ic) max_i = std::max(max_i, std::abs(row[c]));
            max_fdev = std::max(max_fdev, std::abs(row[ci_f] - f0));
            if (in_window(t)) {
                for (auto c : ci_ic) max_i_win = std::max(max_i_win, std::abs(row[c]));
                ipos_sum += std::hypot(row[ci_idp], row[ci_iqp]);
                p_win.push_back(row[ci_p]);
                v_win.push_back({row[ci_v[0]], row[ci_v[1]], row[ci_v[2]]});
                ++n_win;
            }
        }

        rep.emplace_back(pfx + "max_phase_current_pu", max_i);
        rep.emplace_back(pfx + "window_max_phase_current_pu", max_i_win);
        rep.emplace_back(pfx + "window_mean_ipos_ref_pu",
                         n_win ? ipos_sum / static_cast<double>(n_win) : 0.0);
        rep.emplace_back(pfx + "max_freq_dev_hz", max_fdev);

        rep.emplace_back(pfx + "window_available", window_ok ? 1.0 : 0.0);
        if (window_ok && n_win > 0) {
            // 2w active-power ripple ratio
            double mean_abs_p = 0.0;
            for (double v : p_win) mean_abs_p += std::abs(v);
            mean_abs_p /= static_cast<double>(p_win.size());
            const double bin = std::abs(detail::dft_bin(p_win, dt, 2.0 * f0));
            rep.emplace_back(pfx + "p_ripple_2w_ratio",
                             mean_abs_p > 1e-12 ? bin / mean_abs_p : 0.0);

            // VUF averaged over per-cycle symmetric-component phasors
            const auto per_cycle = static_cast<std::size_t>(std::llround(period / dt));
            const Complex aop = std::polar(1.0, kThird);
            double vuf_sum = 0.0;
            std::size_t cycles = 0;
            for (std::size_t c0 = 0; c0 + per_cycle <= v_win.size(); c0 += per_cycle) {
                std::array<Complex, 3> ph{};
                for (int p = 0; p < 3; ++p) {
                    std::vector<double> y(per_cycle);
                    for (std::size_t i = 0; i < per_cycle; ++i) y[i] = v_win[c0 + i][p];
                    ph[p] = detail::dft_bin(y, dt, f0);
                }
                const Complex vp = (ph[0] + aop * ph[1] + aop * aop * ph[2]) / 3.0;
                const Complex vn = (ph[0] + aop * aop * ph[1] + aop * ph[2]) / 3.0;
                if (std::abs(vp) > 1e-12) {
                    vuf_sum += std::abs(vn) / std::abs(vp);
                    ++cycles;
                }
            }
            rep.emplace_back(pfx + "vuf", cycles ? vuf_sum / static_cast<double>(cycles)
                                                 : 0.0);
        }

        // resynchronization: last sustained violation of |p - p_set| <= 1%
        const double t_ref = sc.fault ? sc.fault->t_clear : 0.0;
        double resync = std::numeric_limits<double>::infinity();
        bool any_after = false;
        double last_bad = -1.0;
        for (const auto& row : traj.rows) {
            const double t = row[ci_t];
            if (t < t_ref) continue;
            any_after = true;
            const double target = sc.converters[k].p_schedule.at(t);
            if (std::abs(row[ci_p] - target) > 0.01) last_bad = t;
        }
        if (any_after) {
            if (last_bad < 0.0) resync = 0.0;
            else if (last_bad < traj.rows.back()[0]) resync = last_bad + dt - t_ref;
        }
        rep.emplace_back(pfx + "resync_time_s", resync);
    }

    return rep;
}

}  // namespace gfvcc

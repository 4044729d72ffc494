#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfvcc/control.hpp"
#include "gfvcc/metrics.hpp"
#include "gfvcc/plant.hpp"
#include "gfvcc/scenario.hpp"

namespace gfvcc {

/// Thrown on numerical divergence; carries the trajectory up to the failure.
struct SimulationDiverged : std::runtime_error {
    SimulationDiverged(const std::string& msg, double t, Trajectory partial)
        : std::runtime_error(msg + " (t=" + std::to_string(t) + " s)"),
          time(t),
          trajectory(std::move(partial)) {}
    double time;
    Trajectory trajectory;
};

struct SimulationResult {
    Trajectory trajectory;
    MetricsReport metrics;
    double max_kcl_residual = 0.0;
};

/// Runs one scenario: plant at dt_plant, controllers every T_c with
/// zero-order-held bridge voltage and one control period of computation
/// delay. Deterministic; one trajectory row per control period (decimated).
inline SimulationResult run_scenario(const Scenario& sc) {
    const double t_c = sc.converters.front().control.t_c;
    const std::size_t n_conv = sc.converters.size();
    const auto n_ctrl =
        static_cast<std::int64_t>(std::floor(sc.duration_s / t_c + 1e-9));
    const auto steps_per = static_cast<std::int64_t>(std::llround(t_c / sc.dt_plant_s));

    Plant plant(sc.plant_params(), sc.fault);
    std::vector<Controller> ctrl;
    for (const auto& cc : sc.converters) ctrl.emplace_back(cc.control);

    std::vector<ThreePhase> held(n_conv);  // bridge voltage applied this period
    if (sc.zero_init) {
        plant.init_zero();
        for (std::size_t k = 0; k < n_conv; ++k)
            ctrl[k].init(ThreePhase{}, ThreePhase{}, 0.0);
    } else {
        plant.init_steady(sc.grid_e_amp);
        const auto m = plant.measure();
        for (std::size_t k = 0; k < n_conv; ++k) {
            ctrl[k].init(m.v_pcc[k], m.i_c[k], 0.0);
            held[k] = plant.bridge_voltage_steady(k, 0.0);
        }
    }

    Trajectory traj;
    traj.columns = trajectory_columns(n_conv);

    std::vector<ThreePhase> next(n_conv);
    try {
        for (std::int64_t m = 0; m < n_ctrl; ++m) {
            const double t = static_cast<double>(m) * t_c;
            const auto meas = plant.measure();

            std::vector<double> row;
            row.reserve(traj.columns.size());
            row.push_back(t);
            for (std::size_t k = 0; k < n_conv; ++k) {
                const double p_set = sc.converters[k].p_schedule.at(t);
                const double q_set = sc.converters[k].q_schedule.at(t);
                const ControlOutput out =
                    ctrl[k].step(meas.v_pcc[k], meas.i_c[k], p_set, q_set, t_c);
                next[k] = out.v_ref;

                const Vec2 v_ab = clarke(meas.v_pcc[k]);
                const Vec2 i_ab = clarke(meas.i_c[k]);
                const double p = v_ab.x * i_ab.x + v_ab.y * i_ab.y;
                const double q = v_ab.y * i_ab.x - v_ab.x * i_ab.y;

                row.push_back(meas.v_pcc[k].a);
                row.push_back(meas.v_pcc[k].b);
                row.push_back(meas.v_pcc[k].c);
                row.push_back(meas.i_c[k].a);
                row.push_back(meas.i_c[k].b);
                row.push_back(meas.i_c[k].c);
                row.push_back(p);
                row.push_back(q);
                row.push_back(out.omega_r / kTwoPi);
                row.push_back(out.v_v);
                row.push_back(out.fault_flag ? 1.0 : 0.0);
                row.push_back(out.i_pos_ref.x);
                row.push_back(out.i_pos_ref.y);
                row.push_back(out.i_neg_ref.x);
                row.push_back(out.i_neg_ref.y);
                row.push_back(out.gamma);
            }
            row.push_back(meas.i_g.a);
            row.push_back(meas.i_g.b);
            row.push_back(meas.i_g.c);
            if (m % sc.output_decimation == 0) traj.rows.push_back(std::move(row));

            // one-period computation delay: this period still runs on the
            // previous output, the fresh one engages next period
            for (std::int64_t i = 0; i < steps_per; ++i) plant.step(held, sc.dt_plant_s);
            held = next;
        }
    } catch (const std::runtime_error& e) {
        throw SimulationDiverged(e.what(), plant.time(), std::move(traj));
    }

    SimulationResult res;
    res.metrics = compute_metrics(traj, sc);
    res.trajectory = std::move(traj);
    res.max_kcl_residual = plant.max_kcl_residual();
    return res;
}

}  // namespace gfvcc

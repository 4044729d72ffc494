#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gfvcc/io.hpp"
#include "gfvcc/simulation.hpp"

using namespace gfvcc;
using Catch::Approx;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json short_fault_doc() {
    return Json{{"duration_s", 0.12},
                {"fault", Json{{"type", "three-phase"},
                               {"r_fault_pu", 0.01},
                               {"start_s", 0.02},
                               {"clear_s", 0.06}}}};
}

}  // namespace

TEST_CASE("schedule interpolation", "[scenario]") {
    Schedule s;
    s.points = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.5}};
    CHECK(s.at(-1.0) == 0.0);
    CHECK(s.at(0.5) == 0.0);
    CHECK(s.at(1.5) == Approx(0.25));
    CHECK(s.at(2.0) == Approx(0.5));
    CHECK(s.at(9.0) == Approx(0.5));
}

TEST_CASE("scenario defaults", "[scenario]") {
    const Scenario sc = load_scenario(Json::object());
    CHECK(sc.duration_s == 3.0);
    CHECK(sc.dt_plant_s == Approx(1.0 / 140000.0));
    CHECK(sc.output_decimation == 1);
    CHECK_FALSE(sc.zero_init);
    CHECK_FALSE(sc.fault.has_value());
    REQUIRE(sc.converters.size() == 1);
    const auto& c = sc.converters[0].control;
    CHECK(c.r_v == 0.045);
    CHECK(c.x_v == 0.18);
    CHECK(c.i_lim == 1.2);
    CHECK(c.frt_mode == FrtMode::VirtualSynchronousCondenser);
    CHECK(c.ns_strategy == NsStrategy::BalancedCurrent);
    CHECK(sc.grid_x_pu == Approx(2.0 / std::sqrt(101.0)));
    CHECK(sc.grid_r_pu == Approx(0.2 / std::sqrt(101.0)));
    CHECK(sc.converters[0].p_schedule.at(1.0) == 0.0);
}

TEST_CASE("scenario parsing covers converters and fault", "[scenario]") {
    Json doc{{"duration_s", 2.0},
             {"grid", Json{{"scr", 10.0}, {"x_over_r", 5.0}}},
             {"fault", Json{{"type", "single-phase-ground"},
                            {"phases", "b"},
                            {"start_s", 0.5},
                            {"clear_s", 1.0},
                            {"lambda", 0.5}}},
             {"converters",
              Json::array({Json{{"control", Json{{"frt_mode", "vector-current-control"}}}},
                           Json{{"p_schedule", Json::array({Json::array({0.0, 0.25})})}}})}};
    const Scenario sc = load_scenario(doc);
    REQUIRE(sc.converters.size() == 2);
    CHECK(sc.converters[0].control.frt_mode == FrtMode::VectorCurrentControl);
    CHECK(sc.converters[1].control.frt_mode == FrtMode::VirtualSynchronousCondenser);
    CHECK(sc.converters[1].p_schedule.at(0.0) == 0.25);
    REQUIRE(sc.fault.has_value());
    CHECK(sc.fault->type == FaultType::SingleLineGround);
    CHECK(sc.fault->phases == std::array<bool, 3>{false, true, false});
    CHECK(sc.fault->lambda == 0.5);
    const double z = 1.0 / 10.0;
    CHECK(sc.grid_x_pu == Approx(z * 5.0 / std::sqrt(26.0)));
    CHECK(sc.grid_r_pu == Approx(sc.grid_x_pu / 5.0));
}

TEST_CASE("scenario validation names the offending key", "[scenario]") {
    CHECK_THROWS_WITH(load_scenario(Json{{"duration_s", -1.0}}),
                      Catch::Matchers::ContainsSubstring("duration_s"));
    CHECK_THROWS_WITH(load_scenario(Json{{"bogus", 1}}),
                      Catch::Matchers::ContainsSubstring("bogus"));
    CHECK_THROWS_WITH(load_scenario(Json{{"converters",
                                          Json::array({Json{{"control",
                                                             Json{{"v_rec_pu", 0.7}}}}})}}),
                      Catch::Matchers::ContainsSubstring("v_rec_pu"));
    CHECK_THROWS_WITH(
        load_scenario(Json{{"converters",
                            Json::array({Json{{"control", Json{{"frt_mode", "nope"}}}}})}}),
        Catch::Matchers::ContainsSubstring("frt_mode"));
    CHECK_THROWS_WITH(load_scenario(Json{{"dt_plant_s", 1e-5}}),
                      Catch::Matchers::ContainsSubstring("dt_plant_s"));
    CHECK_THROWS_WITH(load_scenario(Json{{"fault", Json{{"type", "three-phase"},
                                                        {"start_s", 1.0},
                                                        {"clear_s", 0.5}}}}),
                      Catch::Matchers::ContainsSubstring("clear_s"));
    CHECK_THROWS_WITH(load_scenario(Json{{"fault", Json{{"type", "single-phase-ground"},
                                                        {"phases", "ab"},
                                                        {"start_s", 0.1},
                                                        {"clear_s", 0.2}}}}),
                      Catch::Matchers::ContainsSubstring("phases"));
}

TEST_CASE("overrides apply atomically", "[scenario]") {
    Json doc = Json::object();
    apply_override(doc, "duration_s=2.0");
    CHECK(doc.at("duration_s") == 2.0);

    apply_override(doc, "grid.scr=3.0");
    CHECK(doc.at("grid").at("scr") == 3.0);

    // control.* shorthand broadcasts to every converter
    doc["converters"] = Json::array({Json::object(), Json::object()});
    apply_override(doc, "control.frt_mode=vector-current-control");
    apply_override(doc, "control.i_lim_pu=1.5");
    const Scenario sc = load_scenario(doc);
    CHECK(sc.converters[0].control.frt_mode == FrtMode::VectorCurrentControl);
    CHECK(sc.converters[1].control.frt_mode == FrtMode::VectorCurrentControl);
    CHECK(sc.converters[1].control.i_lim == 1.5);

    // indexed form targets a single converter
    apply_override(doc, "converters[1].control.i_lim_pu=1.0");
    CHECK(load_scenario(doc).converters[0].control.i_lim == 1.5);
    CHECK(load_scenario(doc).converters[1].control.i_lim == 1.0);

    // a failing override must not modify the document
    const Json before = doc;
    CHECK_THROWS_AS(apply_override(doc, "control.v_rec_pu=0.5"), ScenarioError);
    CHECK(doc == before);
    CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ScenarioError);
    CHECK(doc == before);
    CHECK_THROWS_AS(apply_override(doc, "converters[5].control.k_g=1"), ScenarioError);
    CHECK(doc == before);

    apply_override(doc, "p_schedule=[[0,0.25]]");
    CHECK(load_scenario(doc).converters[0].p_schedule.at(0.0) == 0.25);
}

TEST_CASE("presets all load", "[scenario]") {
    const auto presets = preset_scenarios();
    CHECK(presets.size() == 9);
    for (const auto& [name, doc] : presets) {
        INFO(name);
        CHECK_NOTHROW(load_scenario(doc));
    }
    CHECK(load_scenario(presets.back().second).converters.size() == 2);
}

TEST_CASE("trajectory columns and row cadence", "[sim]") {
    const auto cols = trajectory_columns(2);
    CHECK(cols.front() == "t_s");
    CHECK(cols.back() == "ig_c");
    CHECK(cols.size() == 1 + 2 * 16 + 3);
    CHECK(std::find(cols.begin(), cols.end(), "limiter_gamma_1") != cols.end());
    CHECK(std::find(cols.begin(), cols.end(), "iq_neg_ref_0") != cols.end());

    Scenario sc = load_scenario(Json{{"duration_s", 0.1}});
    auto res = run_scenario(sc);
    CHECK(res.trajectory.columns == trajectory_columns(1));
    CHECK(res.trajectory.rows.size() == 1400);
    CHECK(res.trajectory.rows[1][0] == Approx(1.0 / 14000.0));

    sc.output_decimation = 10;
    CHECK(run_scenario(sc).trajectory.rows.size() == 140);

    // zero-duration run produces an empty (but well-formed) trajectory
    const auto empty = run_scenario(load_scenario(Json{{"duration_s", 0.0}}));
    CHECK(empty.trajectory.rows.empty());
    CHECK(empty.metrics.empty());
}

TEST_CASE("simulation is deterministic", "[sim]") {
    const Scenario sc = load_scenario(short_fault_doc());
    const auto a = run_scenario(sc);
    const auto b = run_scenario(sc);
    REQUIRE(a.trajectory.rows.size() == b.trajectory.rows.size());
    for (std::size_t r = 0; r < a.trajectory.rows.size(); ++r)
        for (std::size_t c = 0; c < a.trajectory.rows[r].size(); ++c)
            REQUIRE(a.trajectory.rows[r][c] == b.trajectory.rows[r][c]);

    write_trajectory_csv("det_a.csv", a.trajectory);
    write_trajectory_csv("det_b.csv", b.trajectory);
    CHECK(slurp("det_a.csv") == slurp("det_b.csv"));
    std::remove("det_a.csv");
    std::remove("det_b.csv");
}

TEST_CASE("steady initialization starts at equilibrium", "[sim]") {
    const auto res = run_scenario(load_scenario(Json{{"duration_s", 0.25}}));
    const auto& tr = res.trajectory;
    const auto ci_ig = tr.column("ig_a");
    const auto ci_p = tr.column("p_0");
    double max_ig = 0.0, max_p = 0.0;
    for (const auto& row : tr.rows) {
        max_ig = std::max(max_ig, std::abs(row[ci_ig]));
        max_p = std::max(max_p, std::abs(row[ci_p]));
    }
    CHECK(max_ig < 0.05);
    CHECK(max_p < 0.02);
    CHECK(res.max_kcl_residual < 1e-9);
}

TEST_CASE("power setpoint is tracked in steady state", "[sim]") {
    Json doc{{"duration_s", 1.0},
             {"converters",
              Json::array({Json{{"p_schedule", Json::array({Json::array({0.0, 0.0}),
                                                            Json::array({0.2, 0.25})})}}})}};
    const auto res = run_scenario(load_scenario(doc));
    const auto& tr = res.trajectory;
    const auto ci_t = tr.column("t_s");
    const auto ci_p = tr.column("p_0");
    double worst = 0.0;
    for (const auto& row : tr.rows)
        if (row[ci_t] > 0.9) worst = std::max(worst, std::abs(row[ci_p] - 0.25));
    CHECK(worst < 0.01);
}

TEST_CASE("synthetic metrics: ripple, vuf, frequency", "[metrics]") {
    const Scenario sc = load_scenario(Json::object());  // no fault: window = last 60%
    const double dt = 1.0 / 14000.0, w = kTwoPi * 50.0;
    auto build = [&](double ripple, double vneg) {
        Trajectory tr;
        tr.columns = trajectory_columns(1);
        for (int i = 0; i < 14000; ++i) {
            const double t = i * dt;
            std::vector<double> row(tr.columns.size(), 0.0);
            row[0] = t;
            const std::array<double, 3> shift{0.0, -kThird, kThird};
            for (int p = 0; p < 3; ++p) {
                row[tr.column("vpcc_a_0") + p] =
                    std::cos(w * t + shift[p]) + vneg * std::cos(w * t - shift[p]);
                row[tr.column("ic_a_0") + p] = 0.3 * std::cos(w * t + shift[p]);
            }
            row[tr.column("p_0")] = 0.25 * (1.0 + ripple * std::cos(2.0 * w * t + 0.3));
            row[tr.column("freq_hz_0")] = 50.0;
            row[tr.column("id_pos_ref_0")] = 0.25;
            row[tr.column("limiter_gamma_0")] = 1.0;
            tr.rows.push_back(std::move(row));
        }
        return tr;
    };

    auto value = [](const MetricsReport& rep, const std::string& key) {
        for (const auto& [k, v] : rep)
            if (k == key) return v;
        FAIL("missing metric " + key);
        return 0.0;
    };

    const auto clean = compute_metrics(build(0.0, 0.0), sc);
    CHECK(value(clean, "c0_window_available") == 1.0);
    CHECK(value(clean, "c0_p_ripple_2w_ratio") < 1e-6);
    CHECK(value(clean, "c0_vuf") < 1e-6);
    CHECK(value(clean, "c0_max_freq_dev_hz") == 0.0);
    CHECK(value(clean, "c0_max_phase_current_pu") == Approx(0.3).epsilon(1e-6));
    CHECK(value(clean, "c0_window_mean_ipos_ref_pu") == Approx(0.25));

    const auto rippled = compute_metrics(build(0.10, 0.0), sc);
    CHECK(value(rippled, "c0_p_ripple_2w_ratio") == Approx(0.10).margin(1e-3));

    const auto unbalanced = compute_metrics(build(0.0, 0.2), sc);
    CHECK(value(unbalanced, "c0_vuf") == Approx(0.2).margin(1e-6));
}

TEST_CASE("trajectory and metrics files round-trip", "[io]") {
    const Scenario sc = load_scenario(Json{{"duration_s", 0.02}});
    const auto res = run_scenario(sc);
    write_trajectory_csv("rt_traj.csv", res.trajectory);
    const Trajectory back = read_trajectory_csv("rt_traj.csv");
    REQUIRE(back.columns == res.trajectory.columns);
    REQUIRE(back.rows.size() == res.trajectory.rows.size());
    for (std::size_t r = 0; r < back.rows.size(); ++r)
        for (std::size_t c = 0; c < back.rows[r].size(); ++c)
            REQUIRE(back.rows[r][c] == res.trajectory.rows[r][c]);
    std::remove("rt_traj.csv");

    write_metrics("rt_metrics.txt", res.metrics);
    const MetricsReport mback = read_metrics("rt_metrics.txt");
    REQUIRE(mback.size() == res.metrics.size());
    for (std::size_t i = 0; i < mback.size(); ++i) {
        CHECK(mback[i].first == res.metrics[i].first);
        CHECK(mback[i].second == res.metrics[i].second);
    }
    std::remove("rt_metrics.txt");
}

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gfvcc/control.hpp"
#include "gfvcc/plant.hpp"

namespace gfvcc {

using Json = nlohmann::json;

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Piecewise-linear schedule: (time_s, value) points, held flat outside.
struct Schedule {
    std::vector<std::pair<double, double>> points{{0.0, 0.0}};

    double at(double t) const {
        if (points.empty()) return 0.0;
        if (t <= points.front().first) return points.front().second;
        if (t >= points.back().first) return points.back().second;
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (t <= points[i].first) {
                const auto& [t0, v0] = points[i - 1];
                const auto& [t1, v1] = points[i];
                const double f = (t - t0) / (t1 - t0);
                return v0 + f * (v1 - v0);
            }
        }
        return points.back().second;
    }
};

struct ConverterConfig {
    ConverterFilter filter;
    ControlParams control;
    Schedule p_schedule;
    Schedule q_schedule;
};

struct Scenario {
    double duration_s = 3.0;
    double dt_plant_s = 1.0 / 140000.0;
    int output_decimation = 1;
    std::uint64_t seed = 0;
    bool zero_init = false;
    double grid_e_amp = 1.0;
    double grid_freq_hz = 50.0;
    double grid_r_pu = 0.2 / std::sqrt(101.0);
    double grid_x_pu = 2.0 / std::sqrt(101.0);
    std::optional<FaultSpec> fault;
    std::vector<ConverterConfig> converters{ConverterConfig{}};

    PlantParams plant_params() const {
        PlantParams p;
        p.converters.clear();
        for (const auto& c : converters) p.converters.push_back(c.filter);
        p.r_g = grid_r_pu;
        p.x_g = grid_x_pu;
        p.e_amp = grid_e_amp;
        p.omega_g = kTwoPi * grid_freq_hz;
        p.omega_n = converters.front().control.omega_n;
        return p;
    }
};

namespace detail {

inline Json default_control_json() {
    return Json{{"r_v_pu", 0.045},
                {"x_v_pu", 0.18},
                {"k_pll_p", 0.1},
                {"k_pll_i", 1.4},
                {"k_g", 20.0},
                {"k_v", 75.0},
                {"r_ad_pu", 0.66},
                {"r_ad_neg_pu", 0.66},
                {"k_cc_p", 0.56},
                {"alpha_ff_hz", 200.0},
                {"i_lim_pu", 1.2},
                {"k_i_downreg", 10.0},
                {"y_v_neg_real_pu", 1.247504990019960},
                {"y_v_neg_imag_pu", 24.950099800399198},
                {"v_v0_pu", 1.0},
                {"freq_hz", 50.0},
                {"v_trig_pu", 0.8},
                {"v_rec_pu", 0.85},
                {"t_c_s", 1.0 / 14000.0},
                {"frt_mode", "virtual-synchronous-condenser"},
                {"ns_strategy", "balanced-current"},
                {"ns_active_damping", true},
                {"limiter", "negative-sequence-priority"},
                {"vsc_integrator_policy", "freeze-and-reset"},
                {"lpf_f_hz", 10.0},
                {"lpf_v_hz", 10.0},
                {"hp_hz", 20.0},
                {"ad_lp_hz", 300.0},
                {"ns_v_lp_hz", 10.0},
                {"ns_i_cap_pu", 1.0},
                {"notch_zeta", 0.7},
                {"eps_v_pu", 0.05},
                {"pll_fault_gain_mult", 1.0},
                {"q_set_tracking", false},
                {"vv_recovery_rate_pu_s", 10.0},
                {"pll_freq_clamp_hz", 0.0},
                {"delay_comp_periods", 1.5}};
}

inline Json default_converter_json() {
    return Json{{"filter", Json{{"r_f_pu", 0.002},
                                {"x_f_pu", 0.04},
                                {"c_f_pu", 0.05},
                                {"r_l_pu", 0.001},
                                {"x_l_pu", 0.02}}},
                {"control", default_control_json()},
                {"p_schedule", Json::array({Json::array({0.0, 0.0})})},
                {"q_schedule", Json::array({Json::array({0.0, 0.0})})}};
}

inline Json default_fault_json() {
    return Json{{"type", "three-phase"}, {"phases", ""},      {"r_fault_pu", 0.01},
                {"lambda", 0.0},         {"start_s", 0.5},    {"clear_s", 1.0}};
}

inline Json default_scenario_json() {
    return Json{{"duration_s", 3.0},
                {"dt_plant_s", 1.0 / 140000.0},
                {"output_decimation", 1},
                {"seed", 0},
                {"init", "steady"},
                {"grid", Json{{"scr", 5.0},
                              {"x_over_r", 10.0},
                              {"r_g_pu", 0.0},
                              {"x_g_pu", 0.0},
                              {"e_amp_pu", 1.0},
                              {"freq_hz", 50.0}}},
                {"fault", default_fault_json()},
                {"converters", Json::array({default_converter_json()})}};
}

inline void check_known_keys(const Json& doc, const Json& tmpl, const std::string& path) {
    if (!doc.is_object()) return;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string key_path = path.empty() ? it.key() : path + "." + it.key();
        if (!tmpl.contains(it.key()))
            throw ScenarioError("unknown key: " + key_path);
        const Json& tv = tmpl.at(it.key());
        if (tv.is_object()) {
            if (!it.value().is_object())
                throw ScenarioError("expected object at key: " + key_path);
            check_known_keys(it.value(), tv, key_path);
        } else if (it.key() == "converters") {
            if (!it.value().is_array())
                throw ScenarioError("expected array at key: " + key_path);
            const Json conv_tmpl = default_converter_json();
            for (std::size_t i = 0; i < it.value().size(); ++i)
                check_known_keys(it.value()[i], conv_tmpl,
                                 key_path + "[" + std::to_string(i) + "]");
        }
    }
}

/// Deep merge of `doc` over `base`; arrays and scalars replace wholesale.
inline Json merge(Json base, const Json& doc) {
    if (!doc.is_object() || !base.is_object()) return doc;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (base.contains(it.key()))
            base[it.key()] = merge(base[it.key()], it.value());
        else
            base[it.key()] = it.value();
    }
    return base;
}

template <typename T>
T get(const Json& j, const std::string& key, const std::string& path) {
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ScenarioError("invalid value for key: " + path + key);
    }
}

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ScenarioError(msg);
}

inline FaultType parse_fault_type(const std::string& s, const std::string& path) {
    if (s == "three-phase") return FaultType::ThreePhase;
    if (s == "single-phase-ground") return FaultType::SingleLineGround;
    if (s == "phase-phase") return FaultType::LineLine;
    if (s == "phase-phase-ground") return FaultType::LineLineGround;
    throw ScenarioError("invalid value for key: " + path + "type");
}

inline FrtMode parse_frt_mode(const std::string& s, const std::string& path) {
    if (s == "vector-current-control") return FrtMode::VectorCurrentControl;
    if (s == "virtual-synchronous-condenser") return FrtMode::VirtualSynchronousCondenser;
    if (s == "voltage-downregulation") return FrtMode::VoltageDownregulation;
    throw ScenarioError("invalid value for key: " + path + "frt_mode");
}

inline NsStrategy parse_ns_strategy(const std::string& s, const std::string& path) {
    if (s == "balanced-current") return NsStrategy::BalancedCurrent;
    if (s == "power-oscillation-suppression") return NsStrategy::PowerOscillationSuppression;
    if (s == "voltage-balancing") return NsStrategy::VoltageBalancing;
    throw ScenarioError("invalid value for key: " + path + "ns_strategy");
}

inline Schedule parse_schedule(const Json& j, const std::string& path, double duration) {
    Schedule s;
    s.points.clear();
    require(j.is_array() && !j.empty(), "invalid value for key: " + path);
    double prev = -1.0;
    for (const auto& pt : j) {
        require(pt.is_array() && pt.size() == 2 && pt[0].is_number() && pt[1].is_number(),
                "invalid schedule point in: " + path);
        const double t = pt[0].get<double>();
        require(t >= prev, "schedule times must be non-decreasing: " + path);
        require(t >= 0.0 && t <= duration, "schedule time outside [0, duration_s]: " + path);
        s.points.emplace_back(t, pt[1].get<double>());
        prev = t;
    }
    return s;
}

}  // namespace detail

/// Parses and fully validates a scenario document; defaults applied first,
/// every constraint violation names the offending key.
inline Scenario load_scenario(const Json& doc) {
    using namespace detail;
    check_known_keys(doc, default_scenario_json(), "");

    // converters: the user's list replaces the default list; each entry is
    // merged over the default converter
    Json base = default_scenario_json();
    Json merged = merge(base, doc);
    Json conv_list = Json::array();
    const Json user_convs =
        doc.contains("converters") ? doc.at("converters") : Json::array({Json::object()});
    require(user_convs.is_array() && !user_convs.empty(),
            "converters must be a non-empty array");
    for (const auto& uc : user_convs) conv_list.push_back(merge(default_converter_json(), uc));
    merged["converters"] = conv_list;

    Scenario sc;
    sc.duration_s = get<double>(merged, "duration_s", "");
    require(sc.duration_s >= 0.0, "duration_s must be >= 0");
    sc.dt_plant_s = get<double>(merged, "dt_plant_s", "");
    require(sc.dt_plant_s > 0.0, "dt_plant_s must be > 0");
    sc.output_decimation = get<int>(merged, "output_decimation", "");
    require(sc.output_decimation >= 1, "output_decimation must be >= 1");
    sc.seed = get<std::uint64_t>(merged, "seed", "");
    const std::string init = get<std::string>(merged, "init", "");
    require(init == "steady" || init == "zero", "init must be 'steady' or 'zero'");
    sc.zero_init = init == "zero";

    const Json& grid = merged.at("grid");
    sc.grid_e_amp = get<double>(grid, "e_amp_pu", "grid.");
    sc.grid_freq_hz = get<double>(grid, "freq_hz", "grid.");
    require(sc.grid_freq_hz > 0.0, "grid.freq_hz must be > 0");
    const double rg = get<double>(grid, "r_g_pu", "grid.");
    const double xg = get<double>(grid, "x_g_pu", "grid.");
    if (rg != 0.0 || xg != 0.0) {
        require(xg > 0.0, "grid.x_g_pu must be > 0 when set directly");
        sc.grid_r_pu = rg;
        sc.grid_x_pu = xg;
    } else {
        const double scr = get<double>(grid, "scr", "grid.");
        const double xr = get<double>(grid, "x_over_r", "grid.");
        require(scr > 0.0, "grid.scr must be > 0");
        require(xr > 0.0, "grid.x_over_r must be > 0");
        const double z = 1.0 / scr;
        sc.grid_x_pu = z * xr / std::sqrt(1.0 + xr * xr);
        sc.grid_r_pu = sc.grid_x_pu / xr;
    }

    if (doc.contains("fault")) {
        const Json& f = merged.at("fault");
        FaultSpec spec;
        spec.type = parse_fault_type(get<std::string>(f, "type", "fault."), "fault.");
        spec.phases = default_fault_phases(spec.type);
        const std::string phases = get<std::string>(f, "phases", "fault.");
        if (!phases.empty()) {
            spec.phases = {false, false, false};
            for (char c : phases) {
                require(c >= 'a' && c <= 'c', "fault.phases must use characters a/b/c");
                spec.phases[c - 'a'] = true;
            }
            int n = spec.phases[0] + spec.phases[1] + spec.phases[2];
            const int want = spec.type == FaultType::ThreePhase       ? 3
                             : spec.type == FaultType::SingleLineGround ? 1
                                                                        : 2;
            require(n == want, "fault.phases count does not match fault.type");
        }
        spec.r_fault = get<double>(f, "r_fault_pu", "fault.");
        require(spec.r_fault > 0.0, "fault.r_fault_pu must be > 0");
        spec.lambda = get<double>(f, "lambda", "fault.");
        require(spec.lambda >= 0.0 && spec.lambda <= 1.0, "fault.lambda must be in [0,1]");
        spec.t_start = get<double>(f, "start_s", "fault.");
        spec.t_clear = get<double>(f, "clear_s", "fault.");
        require(spec.t_start >= 0.0 && spec.t_start <= sc.duration_s,
                "fault.start_s outside [0, duration_s]");
        require(spec.t_clear > spec.t_start, "fault.clear_s must exceed fault.start_s");
        require(spec.t_clear <= sc.duration_s, "fault.clear_s outside [0, duration_s]");
        sc.fault = spec;
    }

    sc.converters.clear();
    for (std::size_t i = 0; i < conv_list.size(); ++i) {
        const std::string cp = "converters[" + std::to_string(i) + "].";
        const Json& cj = conv_list[i];
        ConverterConfig cc;
        const Json& fj = cj.at("filter");
        cc.filter.r_f = get<double>(fj, "r_f_pu", cp + "filter.");
        cc.filter.x_f = get<double>(fj, "x_f_pu", cp + "filter.");
        cc.filter.b_c = get<double>(fj, "c_f_pu", cp + "filter.");
        cc.filter.r_l = get<double>(fj, "r_l_pu", cp + "filter.");
        cc.filter.x_l = get<double>(fj, "x_l_pu", cp + "filter.");
        require(cc.filter.x_f > 0 && cc.filter.b_c > 0 && cc.filter.x_l > 0,
                cp + "filter reactances and capacitance must be > 0");
        require(cc.filter.r_f >= 0 && cc.filter.r_l >= 0,
                cp + "filter resistances must be >= 0");

        const Json& ctl = cj.at("control");
        const std::string kp = cp + "control.";
        ControlParams& c = cc.control;
        c.r_v = get<double>(ctl, "r_v_pu", kp);
        c.x_v = get<double>(ctl, "x_v_pu", kp);
        require(c.x_v > 0.0, kp + "x_v_pu must be > 0");
        c.k_pll_p = get<double>(ctl, "k_pll_p", kp);
        c.k_pll_i = get<double>(ctl, "k_pll_i", kp);
        c.k_g = get<double>(ctl, "k_g", kp);
        c.k_v = get<double>(ctl, "k_v", kp);
        c.r_ad = get<double>(ctl, "r_ad_pu", kp);
        c.r_ad_neg = get<double>(ctl, "r_ad_neg_pu", kp);
        require(c.r_ad > 0.0 && c.r_ad_neg > 0.0, kp + "r_ad_pu must be > 0");
        c.k_cc_p = get<double>(ctl, "k_cc_p", kp);
        c.alpha_ff = kTwoPi * get<double>(ctl, "alpha_ff_hz", kp);
        c.i_lim = get<double>(ctl, "i_lim_pu", kp);
        require(c.i_lim > 0.0, kp + "i_lim_pu must be > 0");
        c.k_i_downreg = get<double>(ctl, "k_i_downreg", kp);
        c.y_v_neg = Complex{get<double>(ctl, "y_v_neg_real_pu", kp),
                            get<double>(ctl, "y_v_neg_imag_pu", kp)};
        c.v_v0 = get<double>(ctl, "v_v0_pu", kp);
        c.omega_n = kTwoPi * get<double>(ctl, "freq_hz", kp);
        c.v_trig = get<double>(ctl, "v_trig_pu", kp);
        c.v_rec = get<double>(ctl, "v_rec_pu", kp);
        require(c.v_trig > 0.0 && c.v_trig < 1.2, kp + "v_trig_pu must be in (0, 1.2)");
        require(c.v_rec > 0.0 && c.v_rec < 1.2, kp + "v_rec_pu must be in (0, 1.2)");
        require(c.v_rec > c.v_trig, kp + "v_rec_pu must exceed " + kp + "v_trig_pu");
        c.t_c = get<double>(ctl, "t_c_s", kp);
        require(c.t_c > 0.0, kp + "t_c_s must be > 0");
        c.r_f = cc.filter.r_f;
        c.x_f = cc.filter.x_f;
        c.frt_mode = parse_frt_mode(get<std::string>(ctl, "frt_mode", kp), kp);
        c.ns_strategy = parse_ns_strategy(get<std::string>(ctl, "ns_strategy", kp), kp);
        c.ns_active_damping = get<bool>(ctl, "ns_active_damping", kp);
        const std::string lim = get<std::string>(ctl, "limiter", kp);
        if (lim == "equal-downscale") c.limiter = LimiterKind::EqualDownscale;
        else if (lim == "negative-sequence-priority") c.limiter = LimiterKind::NsPriority;
        else throw ScenarioError("invalid value for key: " + kp + "limiter");
        const std::string pol = get<std::string>(ctl, "vsc_integrator_policy", kp);
        if (pol == "freeze") c.vsc_policy = VscIntegratorPolicy::Freeze;
        else if (pol == "freeze-and-reset") c.vsc_policy = VscIntegratorPolicy::FreezeAndReset;
        else throw ScenarioError("invalid value for key: " + kp + "vsc_integrator_policy");
        c.lpf_f_corner = kTwoPi * get<double>(ctl, "lpf_f_hz", kp);
        c.lpf_v_corner = kTwoPi * get<double>(ctl, "lpf_v_hz", kp);
        c.hp_corner = kTwoPi * get<double>(ctl, "hp_hz", kp);
        c.ad_lp_corner = kTwoPi * get<double>(ctl, "ad_lp_hz", kp);
        require(c.ad_lp_corner > 0.0, kp + "ad_lp_hz must be > 0");
        c.ns_v_lp_corner = kTwoPi * get<double>(ctl, "ns_v_lp_hz", kp);
        require(c.ns_v_lp_corner > 0.0, kp + "ns_v_lp_hz must be > 0");
        c.ns_i_cap = get<double>(ctl, "ns_i_cap_pu", kp);
        require(c.ns_i_cap > 0.0, kp + "ns_i_cap_pu must be > 0");
        c.notch_zeta = get<double>(ctl, "notch_zeta", kp);
        require(c.notch_zeta > 0.0, kp + "notch_zeta must be > 0");
        c.eps_v = get<double>(ctl, "eps_v_pu", kp);
        require(c.eps_v > 0.0, kp + "eps_v_pu must be > 0");
        c.pll_fault_gain_mult = get<double>(ctl, "pll_fault_gain_mult", kp);
        c.q_set_tracking = get<bool>(ctl, "q_set_tracking", kp);
        c.vv_recovery_rate = get<double>(ctl, "vv_recovery_rate_pu_s", kp);
        const double clamp_hz = get<double>(ctl, "pll_freq_clamp_hz", kp);
        c.pll_freq_clamp = clamp_hz > 0.0;
        c.pll_freq_clamp_hz = clamp_hz;
        c.delay_comp_periods = get<double>(ctl, "delay_comp_periods", kp);

        cc.p_schedule = parse_schedule(cj.at("p_schedule"), cp + "p_schedule", sc.duration_s);
        cc.q_schedule = parse_schedule(cj.at("q_schedule"), cp + "q_schedule", sc.duration_s);
        sc.converters.push_back(std::move(cc));
    }

    const double tc0 = sc.converters.front().control.t_c;
    for (const auto& cc : sc.converters)
        require(cc.control.t_c == tc0, "all converters must share the same t_c_s");
    const double ratio = tc0 / sc.dt_plant_s;
    require(std::abs(ratio - std::round(ratio)) <= 1e-12 * ratio && std::round(ratio) >= 1.0,
            "dt_plant_s must divide t_c_s");

    return sc;
}

/// Applies one `dotted.key=value` override to a raw scenario document. A path
/// starting with `control.`, `filter.`, `p_schedule` or `q_schedule` is
/// shorthand for the same key on every converter. Throws without modifying
/// `doc` on any error.
inline void apply_override(Json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ScenarioError("override must be key=value: " + assignment);
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    Json value;
    try {
        value = Json::parse(raw);
    } catch (const Json::exception&) {
        value = raw;  // unquoted strings (e.g. frt_mode names)
    }

    std::vector<std::string> parts;
    std::string cur;
    for (char ch : path) {
        if (ch == '.') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    if (parts.empty() || parts.front().empty())
        throw ScenarioError("empty override key: " + assignment);

    Json trial = doc;
    auto descend = [&](Json& node, std::size_t start) -> Json& {
        Json* n = &node;
        for (std::size_t i = start; i + 1 < parts.size(); ++i) {
            std::string part = parts[i];
            // converters[k] indexing
            const auto br = part.find('[');
            if (br != std::string::npos && part.back() == ']') {
                const std::string name = part.substr(0, br);
                const std::size_t idx = std::stoul(part.substr(br + 1));
                if (!n->contains(name) || !(*n)[name].is_array() ||
                    idx >= (*n)[name].size())
                    throw ScenarioError("override path not found: " + path);
                n = &(*n)[name][idx];
            } else {
                n = &(*n)[part];
            }
        }
        return *n;
    };

    const std::string& head = parts.front();
    if (head == "control" || head == "filter" || head == "p_schedule" ||
        head == "q_schedule") {
        if (!trial.contains("converters"))
            trial["converters"] = Json::array({Json::object()});
        for (auto& conv : trial["converters"]) {
            Json* n = &conv;
            for (std::size_t i = 0; i + 1 < parts.size(); ++i) n = &(*n)[parts[i]];
            (*n)[parts.back()] = value;
        }
    } else {
        Json& n = descend(trial, 0);
        const std::string last = parts.back();
        const auto br = last.find('[');
        if (br != std::string::npos && last.back() == ']') {
            const std::string name = last.substr(0, br);
            const std::size_t idx = std::stoul(last.substr(br + 1));
            if (!n.contains(name) || !n[name].is_array() || idx >= n[name].size())
                throw ScenarioError("override path not found: " + path);
            n[name][idx] = value;
        } else {
            n[last] = value;
        }
    }
    (void)load_scenario(trial);  // overrides never partially apply
    doc = trial;
}

/// Bundled Case Study I scripts; names are stable CLI identifiers.
inline std::vector<std::pair<std::string, Json>> preset_scenarios() {
    using detail::default_scenario_json;
    auto base = [](const std::string& frt, const std::string& ns,
                   const std::string& fault_type) {
        Json j{{"duration_s", 3.0},
               {"fault", Json{{"type", fault_type},
                              {"r_fault_pu", 0.01},
                              {"lambda", 0.0},
                              {"start_s", 0.5},
                              {"clear_s", 1.0}}},
               {"converters",
                Json::array({Json{{"control", Json{{"frt_mode", frt},
                                                   {"ns_strategy", ns}}},
                                  {"p_schedule", Json::array({Json::array({0.0, 0.0}),
                                                              Json::array({1.5, 0.0}),
                                                              Json::array({1.7, 0.25})})}}})}};
        return j;
    };
    // Moderate fault resistances keep the NS current demand inside the
    // limiter's feasible range so the strategies can meet their objectives.
    auto asym = [](const std::string& ns, const std::string& fault_type,
                   double r_fault) {
        Json j{{"duration_s", 2.0},
               {"fault", Json{{"type", fault_type},
                              {"r_fault_pu", r_fault},
                              {"lambda", 0.0},
                              {"start_s", 0.5},
                              {"clear_s", 1.0}}},
               {"converters",
                Json::array({Json{{"control", Json{{"frt_mode", "voltage-downregulation"},
                                                   {"ns_strategy", ns}}},
                                  {"p_schedule",
                                   Json::array({Json::array({0.0, 0.25})})}}})}};
        return j;
    };

    // Modes that keep the PLL running through the fault limit its frequency
    // excursion while the phase realigns after clearing; the frozen-PLL mode
    // does not need it.
    auto clamp_pll = [](Json j) {
        for (auto& c : j["converters"]) c["control"]["pll_freq_clamp_hz"] = 1.5;
        return j;
    };

    std::vector<std::pair<std::string, Json>> out;
    // During a deep fault the PCC voltage is dominated by the converter's own
    // injection, so a fast PLL chases a self-referential phase and resumes far
    // off after clearing; slowing it during the fault keeps the pre-fault
    // phase trajectory.
    Json vcc = clamp_pll(base("vector-current-control", "balanced-current", "three-phase"));
    vcc["converters"][0]["control"]["pll_fault_gain_mult"] = 0.1;
    out.emplace_back("cs1_sym_vcc", std::move(vcc));
    out.emplace_back("cs1_sym_vsc",
                     base("virtual-synchronous-condenser", "balanced-current", "three-phase"));
    out.emplace_back("cs1_sym_downreg",
                     clamp_pll(base("voltage-downregulation", "balanced-current",
                                    "three-phase")));
    out.emplace_back("cs1_slg_suppress",
                     clamp_pll(asym("power-oscillation-suppression", "single-phase-ground", 0.2)));
    out.emplace_back("cs1_slg_balanced",
                     clamp_pll(asym("balanced-current", "single-phase-ground", 0.2)));
    out.emplace_back("cs1_pp_balancing",
                     clamp_pll(asym("voltage-balancing", "phase-phase", 0.3)));
    out.emplace_back("cs1_pp_balanced", clamp_pll(asym("balanced-current", "phase-phase", 0.3)));
    out.emplace_back("cs1_llg_balanced",
                     clamp_pll(asym("balanced-current", "phase-phase-ground", 0.3)));

    Json two = base("virtual-synchronous-condenser", "balanced-current", "three-phase");
    two["converters"].push_back(two["converters"][0]);
    out.emplace_back("cs1_sym_vsc_2conv", std::move(two));
    return out;
}

}  // namespace gfvcc

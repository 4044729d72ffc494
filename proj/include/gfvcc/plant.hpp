#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfvcc/frames.hpp"

namespace gfvcc {

enum class FaultType { ThreePhase, SingleLineGround, LineLine, LineLineGround };

struct FaultSpec {
    FaultType type = FaultType::ThreePhase;
    std::array<bool, 3> phases{true, true, true};
    double r_fault = 0.01;  // pu
    // Fraction of the grid impedance between the common bus and the fault
    // node: bus->node carries lambda Z_g, node->source carries (1-lambda) Z_g.
    // lambda = 0 puts the fault at the common bus; lambda = 1 across the
    // (ideal) source, which is electrically inert.
    double lambda = 0.0;
    double t_start = 0.0;
    double t_clear = 0.0;
};

inline std::array<bool, 3> default_fault_phases(FaultType t) {
    switch (t) {
        case FaultType::ThreePhase: return {true, true, true};
        case FaultType::SingleLineGround: return {true, false, false};
        case FaultType::LineLine:
        case FaultType::LineLineGround: return {true, true, false};
    }
    return {true, true, true};
}

struct ConverterFilter {
    double r_f = 0.002;  // pu
    double x_f = 0.04;   // pu
    double b_c = 0.05;   // pu capacitor susceptance
    double r_l = 0.001;  // pu line to the common bus
    double x_l = 0.02;   // pu
};

struct PlantParams {
    std::vector<ConverterFilter> converters{ConverterFilter{}};
    // grid equivalent; defaults realize SCR 5 with X/R 10 (|Z| = 0.2 pu)
    double r_g = 0.2 / std::sqrt(101.0);
    double x_g = 2.0 / std::sqrt(101.0);
    double e_amp = 1.0;               // infinite-bus amplitude, pu
    double omega_g = kTwoPi * 50.0;   // infinite-bus electrical frequency
    double omega_n = kTwoPi * 50.0;   // per-unit base frequency
    double s_base = 100e3;            // VA
    double v_base = 400.0;            // V (line-to-line rms)
};

struct PlantMeasurements {
    std::vector<ThreePhase> v_pcc;
    std::vector<ThreePhase> i_c;
    ThreePhase i_g{};
};

namespace detail {
inline double ph(const ThreePhase& v, int p) { return p == 0 ? v.a : (p == 1 ? v.b : v.c); }
inline double& ph(ThreePhase& v, int p) { return p == 0 ? v.a : (p == 1 ? v.b : v.c); }
inline constexpr std::array<double, 3> kPhaseShift{0.0, -kThird, kThird};
}  // namespace detail

/// Circuit model: N converters (bridge -> R_f/X_f -> capacitor node ->
/// R_l/X_l -> common bus), grid impedance to an infinite bus, optional
/// per-phase shunt fault at a node splitting the grid impedance. Purely
/// inductive nodes (bus, fault node) are solved algebraically by forcing the
/// derivative of their KCL mismatch to zero, so RK4 preserves the constraints
/// to roundoff.
class Plant {
  public:
    struct State {
        std::vector<ThreePhase> i_f;    // filter inductor currents (converter side)
        std::vector<ThreePhase> v_pcc;  // capacitor voltages
        std::vector<ThreePhase> i_l;    // line currents to the common bus
        ThreePhase i_g1{};              // bus -> fault node (or full branch when merged)
        ThreePhase i_g2{};              // fault node -> source
    };

    Plant(const PlantParams& params, std::optional<FaultSpec> fault)
        : p_(params), fault_(std::move(fault)) {
        const std::size_t n = p_.converters.size();
        if (n == 0) throw std::invalid_argument("plant: converter list empty");
        for (const auto& c : p_.converters)
            if (c.x_f <= 0 || c.b_c <= 0 || c.x_l <= 0 || c.r_f < 0 || c.r_l < 0)
                throw std::invalid_argument("plant: non-positive filter element");
        if (p_.x_g <= 0) throw std::invalid_argument("plant: x_g must be positive");
        s_.i_f.resize(n);
        s_.v_pcc.resize(n);
        s_.i_l.resize(n);
        if (fault_) {
            if (fault_->lambda <= 1e-12) topo_ = Topology::Merged;
            else if (fault_->lambda >= 1.0 - 1e-12) topo_ = Topology::AtSource;
            else topo_ = Topology::Split;
        } else {
            topo_ = Topology::Merged;
        }
        cleared_.fill(false);
        prev_shunt_.fill(0.0);
        have_prev_shunt_.fill(false);
    }

    std::size_t converter_count() const { return p_.converters.size(); }
    const PlantParams& params() const { return p_; }
    const State& state() const { return s_; }
    double time() const { return static_cast<double>(step_idx_) * dt_; }
    double max_kcl_residual() const { return max_kcl_residual_; }

    /// Balanced steady state of the unloaded network: capacitor voltages at
    /// the source phasor, line/grid currents zero, filter current equal to
    /// the capacitor charging current.
    void init_steady(double v0) {
        const Complex e{v0, 0.0};
        for (std::size_t k = 0; k < p_.converters.size(); ++k) {
            const auto& c = p_.converters[k];
            const Complex i_f = Complex{0.0, c.b_c} * e;
            const Complex v_c = e + Complex{c.r_f, c.x_f} * i_f;
            s_.v_pcc[k] = instantiate(e);
            s_.i_f[k] = instantiate(i_f);
            s_.i_l[k] = ThreePhase{};
            v_c0_.push_back(v_c);
        }
        s_.i_g1 = ThreePhase{};
        s_.i_g2 = ThreePhase{};
    }

    void init_zero() {
        v_c0_.assign(p_.converters.size(), Complex{0.0, 0.0});
    }

    /// Steady bridge waveform matching init_steady, for pre-loading the
    /// control delay line.
    ThreePhase bridge_voltage_steady(std::size_t k, double t) const {
        return instantiate(v_c0_.at(k) * std::polar(1.0, p_.omega_g * t));
    }

    PlantMeasurements measure() const {
        PlantMeasurements m;
        m.v_pcc = s_.v_pcc;
        m.i_c = s_.i_f;
        m.i_g = s_.i_g1;
        return m;
    }

    ThreePhase fault_node_voltage() const { return last_v_node_; }
    ThreePhase bus_voltage() const { return last_v_bus_; }
    bool fault_active() const {
        for (int p = 0; p < 3; ++p)
            if (shunt_of(p) != Shunt::None) return true;
        return false;
    }

    /// Advances one RK4 step with zero-order-held bridge voltages, then
    /// handles fault clearing at shunt-current zero crossings.
    void step(const std::vector<ThreePhase>& v_c, double dt) {
        if (v_c.size() != p_.converters.size())
            throw std::invalid_argument("plant: bridge voltage count mismatch");
        if (dt <= 0) throw std::invalid_argument("plant: dt must be positive");
        dt_ = dt;
        const double t = time();

        State k1 = deriv(s_, t, v_c);
        State k2 = deriv(axpy(s_, k1, dt / 2.0), t + dt / 2.0, v_c);
        State k3 = deriv(axpy(s_, k2, dt / 2.0), t + dt / 2.0, v_c);
        State k4 = deriv(axpy(s_, k3, dt), t + dt, v_c);

        accumulate(s_, k1, dt / 6.0);
        accumulate(s_, k2, dt / 3.0);
        accumulate(s_, k3, dt / 3.0);
        accumulate(s_, k4, dt / 6.0);
        ++step_idx_;

        check_finite();
        handle_clearing();
        update_residual();
        // refresh diagnostics at the new state
        (void)deriv(s_, time(), v_c);
    }

  private:
    enum class Topology { Merged, Split, AtSource };
    enum class Shunt { None, Ground, LLPrimary, LLSecondary };

    ThreePhase instantiate(Complex phasor) const {
        ThreePhase out;
        for (int p = 0; p < 3; ++p)
            detail::ph(out, p) = (phasor * std::polar(1.0, detail::kPhaseShift[p])).real();
        return out;
    }

    double source(double t, int p) const {
        return p_.e_amp * std::cos(p_.omega_g * t + detail::kPhaseShift[p]);
    }

    bool fault_on(double, int p) const {
        if (!fault_ || topo_ == Topology::AtSource) return false;
        if (!fault_->phases[p] || cleared_[p]) return false;
        const auto start = static_cast<std::int64_t>(std::llround(fault_->t_start / dt_));
        return step_idx_ >= start;
    }

    Shunt shunt_of(int p) const {
        if (!active_now_[p]) return Shunt::None;
        if (fault_->type == FaultType::LineLine)
            return p == ll_primary_ ? Shunt::LLPrimary : Shunt::LLSecondary;
        return Shunt::Ground;
    }

    void classify() {
        ll_primary_ = -1;
        for (int p = 0; p < 3; ++p) {
            active_now_[p] = fault_on(time(), p);
            if (active_now_[p] && ll_primary_ < 0) ll_primary_ = p;
        }
    }

    static State axpy(const State& s, const State& d, double a) {
        State out = s;
        for (std::size_t k = 0; k < s.i_f.size(); ++k) {
            out.i_f[k] = s.i_f[k] + d.i_f[k] * a;
            out.v_pcc[k] = s.v_pcc[k] + d.v_pcc[k] * a;
            out.i_l[k] = s.i_l[k] + d.i_l[k] * a;
        }
        out.i_g1 = s.i_g1 + d.i_g1 * a;
        out.i_g2 = s.i_g2 + d.i_g2 * a;
        return out;
    }

    static void accumulate(State& s, const State& d, double a) {
        for (std::size_t k = 0; k < s.i_f.size(); ++k) {
            s.i_f[k] = s.i_f[k] + d.i_f[k] * a;
            s.v_pcc[k] = s.v_pcc[k] + d.v_pcc[k] * a;
            s.i_l[k] = s.i_l[k] + d.i_l[k] * a;
        }
        s.i_g1 = s.i_g1 + d.i_g1 * a;
        s.i_g2 = s.i_g2 + d.i_g2 * a;
    }

    double line_mismatch(const State& s, int p) const {
        double sum = 0.0;
        for (const auto& il : s.i_l) sum += detail::ph(il, p);
        return sum - detail::ph(s.i_g1, p);
    }

    double segment_mismatch(const State& s, int p) const {
        return detail::ph(s.i_g1, p) - detail::ph(s.i_g2, p);
    }

    State deriv(const State& s, double t, const std::vector<ThreePhase>& v_c) {
        classify();
        State d;
        const std::size_t n = p_.converters.size();
        d.i_f.resize(n);
        d.v_pcc.resize(n);
        d.i_l.resize(n);

        // a_p: sum of line-derivative numerators excluding the bus voltage;
        // sl: total line admittance-like coefficient (sum of 1/x_l).
        double sl = 0.0;
        for (const auto& c : p_.converters) sl += 1.0 / c.x_l;

        ThreePhase v_bus{}, v_node{};
        std::array<double, 3> a{};
        for (int p = 0; p < 3; ++p) {
            for (std::size_t k = 0; k < n; ++k) {
                const auto& c = p_.converters[k];
                a[p] += (detail::ph(s.v_pcc[k], p) - c.r_l * detail::ph(s.i_l[k], p)) / c.x_l;
            }
        }

        if (topo_ == Topology::Merged || topo_ == Topology::AtSource) {
            // single grid branch, fault node coincides with the common bus
            const double kappa = sl + 1.0 / p_.x_g;
            std::array<double, 3> g{};
            for (int p = 0; p < 3; ++p)
                g[p] = a[p] + (p_.r_g * detail::ph(s.i_g1, p) + source(t, p)) / p_.x_g;

            for (int p = 0; p < 3; ++p) {
                switch (shunt_of(p)) {
                    case Shunt::None:
                        detail::ph(v_bus, p) = g[p] / kappa;
                        break;
                    case Shunt::Ground:
                        detail::ph(v_bus, p) = fault_->r_fault * line_mismatch(s, p);
                        break;
                    case Shunt::LLPrimary: {
                        const int q = ll_partner();
                        const double dd = fault_->r_fault * line_mismatch(s, p);
                        const double ss = (g[p] + g[q]) / kappa;
                        detail::ph(v_bus, p) = (ss + dd) / 2.0;
                        detail::ph(v_bus, q) = (ss - dd) / 2.0;
                        break;
                    }
                    case Shunt::LLSecondary:
                        break;  // filled by the primary
                }
            }
            v_node = v_bus;
            for (int p = 0; p < 3; ++p) {
                const double dig = p_.omega_n *
                                   (detail::ph(v_bus, p) - p_.r_g * detail::ph(s.i_g1, p) -
                                    source(t, p)) /
                                   p_.x_g;
                detail::ph(d.i_g1, p) = dig;
                detail::ph(d.i_g2, p) = dig;
            }
        } else {
            const double x1 = fault_->lambda * p_.x_g;
            const double r1 = fault_->lambda * p_.r_g;
            const double x2 = (1.0 - fault_->lambda) * p_.x_g;
            const double r2 = (1.0 - fault_->lambda) * p_.r_g;
            const double big_q = sl * x1 + 1.0;
            const double kappa = sl / big_q + 1.0 / x2;
            std::array<double, 3> g{};
            for (int p = 0; p < 3; ++p) {
                const double c1 = r1 * detail::ph(s.i_g1, p);
                g[p] = a[p] / big_q - sl * c1 / big_q +
                       (r2 * detail::ph(s.i_g2, p) + source(t, p)) / x2;
            }
            for (int p = 0; p < 3; ++p) {
                switch (shunt_of(p)) {
                    case Shunt::None:
                        detail::ph(v_node, p) = g[p] / kappa;
                        break;
                    case Shunt::Ground:
                        detail::ph(v_node, p) = fault_->r_fault * segment_mismatch(s, p);
                        break;
                    case Shunt::LLPrimary: {
                        const int q = ll_partner();
                        const double dd = fault_->r_fault * segment_mismatch(s, p);
                        const double ss = (g[p] + g[q]) / kappa;
                        detail::ph(v_node, p) = (ss + dd) / 2.0;
                        detail::ph(v_node, q) = (ss - dd) / 2.0;
                        break;
                    }
                    case Shunt::LLSecondary:
                        break;
                }
            }
            for (int p = 0; p < 3; ++p) {
                const double c1 = r1 * detail::ph(s.i_g1, p);
                detail::ph(v_bus, p) = (a[p] * x1 + c1 + detail::ph(v_node, p)) / big_q;
                detail::ph(d.i_g1, p) =
                    p_.omega_n * (detail::ph(v_bus, p) - c1 - detail::ph(v_node, p)) / x1;
                detail::ph(d.i_g2, p) = p_.omega_n *
                                        (detail::ph(v_node, p) - r2 * detail::ph(s.i_g2, p) -
                                         source(t, p)) /
                                        x2;
            }
        }

        for (std::size_t k = 0; k < n; ++k) {
            const auto& c = p_.converters[k];
            for (int p = 0; p < 3; ++p) {
                detail::ph(d.i_f[k], p) =
                    p_.omega_n *
                    (detail::ph(v_c[k], p) - c.r_f * detail::ph(s.i_f[k], p) -
                     detail::ph(s.v_pcc[k], p)) /
                    c.x_f;
                detail::ph(d.v_pcc[k], p) =
                    p_.omega_n * (detail::ph(s.i_f[k], p) - detail::ph(s.i_l[k], p)) / c.b_c;
                detail::ph(d.i_l[k], p) = p_.omega_n *
                                          (detail::ph(s.v_pcc[k], p) -
                                           c.r_l * detail::ph(s.i_l[k], p) -
                                           detail::ph(v_bus, p)) /
                                          c.x_l;
            }
        }

        last_v_bus_ = v_bus;
        last_v_node_ = v_node;
        return d;
    }

    int ll_partner() const {
        for (int p = 0; p < 3; ++p)
            if (active_now_[p] && p != ll_primary_) return p;
        return ll_primary_;
    }

    void handle_clearing() {
        if (!fault_ || topo_ == Topology::AtSource) return;
        const auto clear_step = static_cast<std::int64_t>(std::llround(fault_->t_clear / dt_));
        for (int p = 0; p < 3; ++p) {
            if (!fault_on(time(), p)) {
                have_prev_shunt_[p] = false;
                continue;
            }
            const double ish = topo_ == Topology::Merged ? line_mismatch(s_, p)
                                                         : segment_mismatch(s_, p);
            const bool armed = step_idx_ >= clear_step;
            if (armed && have_prev_shunt_[p] &&
                (ish == 0.0 || (ish > 0.0) != (prev_shunt_[p] > 0.0))) {
                clear_phase(p, ish);
            } else {
                prev_shunt_[p] = ish;
                have_prev_shunt_[p] = true;
            }
        }
    }

    void clear_phase(int p, double ish) {
        if (fault_->type == FaultType::LineLine) {
            // the pair shares one branch: open both phases together
            for (int q = 0; q < 3; ++q) {
                if (!fault_->phases[q] || cleared_[q]) continue;
                cleared_[q] = true;
                reconcile(q);
            }
        } else {
            cleared_[p] = true;
            reconcile(p);
        }
        (void)ish;
    }

    /// After opening a shunt the node KCL must hold without it; the residual
    /// equals the (near-zero) shunt current at the crossing. Absorb it into
    /// the grid branch currents.
    void reconcile(int p) {
        if (topo_ == Topology::Merged) {
            double sum = 0.0;
            for (const auto& il : s_.i_l) sum += detail::ph(il, p);
            detail::ph(s_.i_g1, p) = sum;
            detail::ph(s_.i_g2, p) = sum;
        } else {
            const double avg =
                (detail::ph(s_.i_g1, p) + detail::ph(s_.i_g2, p)) / 2.0;
            detail::ph(s_.i_g1, p) = avg;
            detail::ph(s_.i_g2, p) = avg;
        }
        have_prev_shunt_[p] = false;
    }

    void update_residual() {
        classify();
        double worst = 0.0;
        std::array<double, 3> mism{};
        for (int p = 0; p < 3; ++p) {
            if (topo_ == Topology::Merged || topo_ == Topology::AtSource) {
                mism[p] = line_mismatch(s_, p);
                if (shunt_of(p) == Shunt::None)
                    worst = std::max(worst, std::abs(mism[p]));
            } else {
                worst = std::max(worst, std::abs(line_mismatch(s_, p)));
                mism[p] = segment_mismatch(s_, p);
                if (shunt_of(p) == Shunt::None)
                    worst = std::max(worst, std::abs(mism[p]));
            }
        }
        // line-line branch: the two mismatches must cancel
        if (fault_ && fault_->type == FaultType::LineLine && ll_primary_ >= 0 &&
            shunt_of(ll_primary_) == Shunt::LLPrimary) {
            worst = std::max(worst, std::abs(mism[ll_primary_] + mism[ll_partner()]));
        }
        max_kcl_residual_ = std::max(max_kcl_residual_, worst);
    }

    void check_finite() const {
        for (std::size_t k = 0; k < s_.i_f.size(); ++k)
            if (!finite(s_.i_f[k]) || !finite(s_.v_pcc[k]) || !finite(s_.i_l[k]))
                throw std::runtime_error("plant: non-finite state at t=" +
                                         std::to_string(time()));
        if (!finite(s_.i_g1) || !finite(s_.i_g2))
            throw std::runtime_error("plant: non-finite grid current at t=" +
                                     std::to_string(time()));
    }

    PlantParams p_;
    std::optional<FaultSpec> fault_;
    Topology topo_;
    State s_;
    std::vector<Complex> v_c0_;
    std::int64_t step_idx_{0};
    double dt_{1e-6};
    std::array<bool, 3> cleared_{};
    std::array<double, 3> prev_shunt_{};
    std::array<bool, 3> have_prev_shunt_{};
    std::array<bool, 3> active_now_{};
    int ll_primary_{-1};
    double max_kcl_residual_{0.0};
    ThreePhase last_v_bus_{};
    ThreePhase last_v_node_{};
};

}  // namespace gfvcc

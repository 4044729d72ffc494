#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gfvcc/filters.hpp"
#include "gfvcc/frames.hpp"
#include "gfvcc/limiter.hpp"

namespace gfvcc {

enum class FrtMode { VectorCurrentControl, VirtualSynchronousCondenser, VoltageDownregulation };
enum class NsStrategy { BalancedCurrent, PowerOscillationSuppression, VoltageBalancing };
enum class LimiterKind { EqualDownscale, NsPriority };
enum class VscIntegratorPolicy { Freeze, FreezeAndReset };

struct ControlParams {
    // virtual admittance
    double r_v = 0.045;   // pu
    double x_v = 0.18;    // pu reactance (w_n * L_v)
    // PLL PI gains acting on v_q+ in pu, producing a per-unit frequency offset
    double k_pll_p = 0.1;
    double k_pll_i = 1.4;
    // governor / AVR
    double k_g = 20.0;
    double k_v = 75.0;
    // active damping
    double r_ad = 0.66;
    double r_ad_neg = 0.66;
    // current control
    double k_cc_p = 0.56;
    double alpha_ff = kTwoPi * 200.0;  // rad/s feedforward band-pass bandwidth
    // limits and FRT
    double i_lim = 1.2;
    // cap on the assembled NS reference magnitude; keeps synchronization
    // headroom for the positive sequence under the NS-priority limiter when
    // transients inflate the NS demand
    double ns_i_cap = 1.0;
    double k_i_downreg = 10.0;
    // NS virtual admittance as a gain on negative-frame phasors; reactances
    // appear conjugated in the negative frame, hence 1/conj(Z_f)
    Complex y_v_neg{1.247504990019960, 24.950099800399198};  // 1/(0.002 - j0.04)
    double v_v0 = 1.0;
    double omega_n = kTwoPi * 50.0;
    double v_trig = 0.8;
    double v_rec = 0.85;
    double t_c = 1.0 / 14000.0;
    // converter filter impedance seen by the current controller drop terms
    double r_f = 0.002;
    double x_f = 0.04;
    FrtMode frt_mode = FrtMode::VirtualSynchronousCondenser;
    NsStrategy ns_strategy = NsStrategy::BalancedCurrent;
    bool ns_active_damping = true;
    LimiterKind limiter = LimiterKind::NsPriority;
    VscIntegratorPolicy vsc_policy = VscIntegratorPolicy::FreezeAndReset;
    // filter corners (rad/s)
    double lpf_f_corner = kTwoPi * 10.0;
    double lpf_v_corner = kTwoPi * 10.0;
    double hp_corner = kTwoPi * 20.0;
    // roll-off of the active-damping current reference; the delayed current
    // loop cannot realize a resistor near the output-filter resonance, so the
    // damping path is band-limited well below it
    double ad_lp_corner = kTwoPi * 300.0;
    // smoothing of the NS voltage phasor feeding the NS strategies; the
    // target is DC in the negative frame, so this keeps the laws static at
    // the phasor level while decoupling them from the filter resonance
    double ns_v_lp_corner = kTwoPi * 10.0;
    double notch_zeta = 0.7;
    // guards and options
    double eps_v = 0.05;                 // governor / suppression denominator floor
    double pll_fault_gain_mult = 1.0;    // VCC-mode PLL bandwidth multiplier
    bool q_set_tracking = false;
    double vv_recovery_rate = 10.0;      // pu/s ramp of V_v back to V_v0 after clearing
    bool pll_freq_clamp = false;
    double pll_freq_clamp_hz = 10.0;
    // actuation delay compensated by phase-advancing the references: one
    // control period of computation plus half a period of zero-order hold
    double delay_comp_periods = 1.5;
};

struct ControlOutput {
    ThreePhase v_ref{};        // bridge voltage reference
    Vec2 i_pos_ref{};          // saturated positive-sequence reference (PLL frame)
    Vec2 i_neg_ref{};          // saturated negative-sequence reference
    Vec2 i_pos_ref_raw{};      // pre-limiter references, diagnostics
    Vec2 i_neg_ref_raw{};
    double omega_r = 0.0;      // rad/s
    double theta_r = 0.0;
    double v_v = 1.0;
    bool fault_flag = false;
    double gamma = 1.0;        // limiter scale applied to i+
    bool suppression_clamped = false;
    SequencePair v_seq{};
    SequencePair i_seq{};
};

/// PLL gains from swing-model targets: K_p = K_f/(M V_nom), K_i = V_v/(M X_v).
inline std::pair<double, double> pll_gains_from_inertia(double m, double k_f, double v_v,
                                                        double x_v, double v_nom = 1.0) {
    return {k_f / (m * v_nom), v_v / (m * x_v)};
}

/// d-axis component of the virtual current source: power setpoint plus
/// frequency droop over the filtered voltage, floored denominator.
inline double governor_current(double p_set, double k_g, double domega_filtered_pu,
                               double vd_filtered, double eps_v) {
    return (p_set + k_g * domega_filtered_pu) / std::max(vd_filtered, eps_v);
}

/// Clamped integral voltage regulator producing the q-axis current.
struct AvrIntegrator {
    double state{0.0};
    double step(double err, double k_v, double i_lim, double dt) {
        state = std::clamp(state + k_v * err * dt, -i_lim, i_lim);
        return state;
    }
};

/// Complex first-order virtual admittance X_v/w_n di/dt = v_err - (R_v+jX_v)i,
/// advanced by the exact exponential map (v_err held over the step).
class VirtualAdmittance {
  public:
    VirtualAdmittance(double r_v, double x_v, double omega_n)
        : z_{r_v, x_v}, rate_(omega_n / x_v) {}

    void init(const Vec2& i) { state_ = i.to_complex(); }
    void reset() { state_ = Complex{0.0, 0.0}; }
    Vec2 value() const { return Vec2::from_complex(state_); }

    Vec2 step(const Vec2& v_err, double dt) {
        const Complex i_ss = v_err.to_complex() / z_;
        state_ = i_ss + (state_ - i_ss) * std::exp(-rate_ * z_ * dt);
        return Vec2::from_complex(state_);
    }

  private:
    Complex z_;
    double rate_;
    Complex state_{0.0, 0.0};
};

/// Stationary-frame proportional current control with resistive/inductive
/// drop compensation and externally supplied (already phase-advanced)
/// feedforward. `theta` is the angle used to rotate dq references into the
/// stationary frame.
inline Vec2 current_control(const Vec2& i_pos_ref, const Vec2& i_neg_ref, double theta,
                            const Vec2& i_meas_ab, const Vec2& v_ff, double w_pu,
                            double k_cc_p, double r_f, double x_f) {
    const Vec2 i_pos_ab = rotate(theta, i_pos_ref);
    const Vec2 i_neg_ab = rotate(-theta, i_neg_ref);
    const Vec2 i_sum = i_pos_ab + i_neg_ab;
    const Vec2 i_dif = i_pos_ab - i_neg_ab;
    return (i_sum - i_meas_ab) * k_cc_p + i_sum * r_f +
           Vec2{-i_dif.y, i_dif.x} * (w_pu * x_f) + v_ff;
}

/// Hysteresis fault detector: trip at v <= V_trig, release at v >= V_rec.
inline bool fault_detector_step(bool flag, double v_mag, double v_trig, double v_rec) {
    if (!flag) return v_mag <= v_trig;
    return v_mag < v_rec;
}

/// Negative-sequence reference selection. `i_pos_sat` is the saturated
/// positive-sequence reference (previous control step for suppression, so the
/// limiter/suppression fixed point converges). Returns the reference and a
/// flag marking that the suppression denominator hit its floor.
inline std::pair<Vec2, bool> ns_reference(NsStrategy strategy, const Vec2& v_neg,
                                          const Vec2& v_pos, const Vec2& i_pos_sat,
                                          const Complex& y_v_neg, double eps_v) {
    switch (strategy) {
        case NsStrategy::BalancedCurrent:
            return {Vec2{0.0, 0.0}, false};
        case NsStrategy::PowerOscillationSuppression: {
            Complex vp = v_pos.to_complex();
            bool clamped = false;
            const double mag = std::abs(vp);
            if (mag < eps_v) {
                clamped = true;
                vp = (mag > 0.0) ? vp * (eps_v / mag) : Complex{eps_v, 0.0};
            }
            const Complex ref =
                -(v_neg.to_complex() / std::conj(vp)) * std::conj(i_pos_sat.to_complex());
            return {Vec2::from_complex(ref), clamped};
        }
        case NsStrategy::VoltageBalancing: {
            const Complex ref = y_v_neg * (-v_neg.to_complex());
            return {Vec2::from_complex(ref), false};
        }
    }
    return {Vec2{0.0, 0.0}, false};
}

class Controller {
  public:
    explicit Controller(const ControlParams& p)
        : p_(p),
          v_extract_(p.notch_zeta),
          i_extract_(p.notch_zeta),
          lpf_freq_(p.lpf_f_corner),
          lpf_vd_(p.lpf_v_corner),
          lpf_vmag_(p.lpf_v_corner),
          hp_pos_(p.hp_corner),
          hp_neg_(p.hp_corner),
          ad_lp_pos_(p.ad_lp_corner),
          ad_lp_neg_(p.ad_lp_corner),
          ns_v_lp_(p.ns_v_lp_corner),
          ff_(p.alpha_ff),
          admittance_(p.r_v, p.x_v, p.omega_n) {
        v_v_ = p.v_v0;
        omega_r_ = p.omega_n;
    }

    const ControlParams& params() const { return p_; }
    double theta_r() const { return theta_r_; }
    double omega_r() const { return omega_r_; }
    bool fault_flag() const { return fault_flag_; }
    double v_v() const { return v_v_; }

    /// Pre-charge all filters/integrators so a scenario starting at an
    /// operating point sees no artificial transient.
    void init(const ThreePhase& v_pcc, const ThreePhase& i_c, double theta0) {
        theta_r_ = wrap_angle(theta0);
        omega_r_ = p_.omega_n;
        pll_int_ = 0.0;
        v_extract_.init(v_pcc, theta_r_);
        i_extract_.init(i_c, theta_r_);
        const Vec2 v_pos = park(theta_r_, v_pcc);
        lpf_freq_.init(0.0);
        lpf_vd_.init(v_pos.x);
        lpf_vmag_.init(v_pos.norm());
        hp_pos_.init(v_pos);
        hp_neg_.init(Vec2{0.0, 0.0});  // steady balanced start has no NS voltage
        ad_lp_pos_.init({0.0, 0.0});
        ad_lp_neg_.init({0.0, 0.0});
        ns_v_lp_.init({0.0, 0.0});
        const Vec2 i_pos = park(theta_r_, i_c);
        admittance_.init(i_pos);
        avr_.state = 0.0;
        v_v_ = p_.v_v0;
        prev_sat_ipos_ = i_pos;
        const Vec2 v_ab = clarke(v_pcc);
        ff_.init(v_ab, p_.omega_n, p_.t_c);
        // one sample back along the rotating phasor
        prev_ff_ = rotate(-p_.omega_n * p_.t_c, v_ab);
    }

    /// One control period. `p_set`/`q_set` are the instantaneous schedule
    /// values; `dt` is the control period T_c.
    ControlOutput step(const ThreePhase& v_pcc, const ThreePhase& i_c, double p_set, double q_set,
                       double dt) {
        if (!finite(v_pcc) || !finite(i_c))
            throw std::runtime_error("controller: non-finite measurement");

        ControlOutput out;

        // --- sequence extraction (previous step's angle/frequency) ---
        const SequencePair v_seq = v_extract_.step(v_pcc, theta_r_, omega_r_, dt);
        const SequencePair i_seq = i_extract_.step(i_c, theta_r_, omega_r_, dt);
        out.v_seq = v_seq;
        out.i_seq = i_seq;

        // --- fault detection + FRT latch transitions ---
        const double v_mag = v_seq.pos.norm();
        const bool prev_flag = fault_flag_;
        fault_flag_ = fault_detector_step(fault_flag_, v_mag, p_.v_trig, p_.v_rec);
        if (fault_flag_ && !prev_flag) on_fault_entry();
        if (!fault_flag_ && prev_flag) on_fault_clear(v_seq.pos, v_mag);
        const bool vsc_frozen =
            fault_flag_ && p_.frt_mode == FrtMode::VirtualSynchronousCondenser;

        // --- PLL ---
        double kp = p_.k_pll_p, ki = p_.k_pll_i;
        if (fault_flag_ && p_.frt_mode == FrtMode::VectorCurrentControl) {
            kp *= p_.pll_fault_gain_mult;
            ki *= p_.pll_fault_gain_mult;
        }
        if (!vsc_frozen) {
            pll_int_ += ki * v_seq.pos.y * dt;
            double domega_pu = kp * v_seq.pos.y + pll_int_;
            if (p_.pll_freq_clamp) {
                const double lim = kTwoPi * p_.pll_freq_clamp_hz / p_.omega_n;
                const double sat = std::clamp(domega_pu, -lim, lim);
                pll_int_ += sat - domega_pu;  // back-calculation anti-windup
                domega_pu = sat;
            }
            omega_r_ = p_.omega_n * (1.0 + domega_pu);
        }
        theta_r_ = wrap_angle(theta_r_ + omega_r_ * dt);

        // --- voltage downregulation (FRT mode 3) ---
        if (p_.frt_mode == FrtMode::VoltageDownregulation) {
            if (fault_flag_) {
                const double excess = std::max(prev_raw_ipos_mag_ - p_.i_lim, 0.0);
                v_v_ = std::max(v_v_ - p_.k_i_downreg * excess * dt, 0.0);
            } else if (v_v_ < p_.v_v0) {
                v_v_ = std::min(v_v_ + p_.vv_recovery_rate * dt, p_.v_v0);
            }
        }

        // --- virtual admittance on the PLL-frame setpoint error ---
        const Vec2 v_err = Vec2{v_v_, 0.0} - v_seq.pos;
        Vec2 i_vsc = admittance_.step(v_err, dt);
        if (fault_flag_ && p_.frt_mode == FrtMode::VectorCurrentControl) {
            admittance_.reset();
            i_vsc = Vec2{0.0, 0.0};
        }

        // --- virtual current source: governor + AVR ---
        const double domega_filt = lpf_freq_.step(omega_r_ / p_.omega_n - 1.0, dt);
        const double vd_filt = lpf_vd_.step(v_seq.pos.x, dt);
        const double p_cmd = vsc_frozen ? 0.0 : p_set;
        const double i_vd = governor_current(p_cmd, p_.k_g, domega_filt, vd_filt, p_.eps_v);

        const double vmag_filt = lpf_vmag_.step(v_mag, dt);
        const bool vcs_bypassed =
            fault_flag_ && p_.frt_mode == FrtMode::VectorCurrentControl;
        if (!vsc_frozen && !vcs_bypassed) {
            double err = vmag_filt - v_v_;
            if (p_.q_set_tracking) {
                const Complex s = v_seq.pos.to_complex() * std::conj(i_seq.pos.to_complex());
                const double q_meas = s.imag();
                err += (q_meas - q_set) / std::max(v_mag, p_.eps_v);
            }
            avr_.step(err, p_.k_v, p_.i_lim, dt);
        }
        Vec2 i_vcs{i_vd, avr_.state};
        if (vsc_frozen) i_vcs = Vec2{0.0, 0.0};

        // --- active damping (emulated termination resistor absorbs HF power) ---
        const Vec2 i_ad_pos =
            ad_lp_pos_.step(hp_pos_.step(v_seq.pos, dt), dt) * (1.0 / p_.r_ad);

        // --- positive-sequence reference assembly + FRT override ---
        Vec2 i_pos_raw = i_vsc + i_vcs - i_ad_pos;
        if (fault_flag_ && p_.frt_mode == FrtMode::VectorCurrentControl)
            i_pos_raw = Vec2{0.0, -p_.i_lim};  // full reactive support at the limit
        prev_raw_ipos_mag_ = i_pos_raw.norm();

        // --- negative-sequence reference ---
        Vec2 i_neg_raw{0.0, 0.0};
        const Vec2 v_neg_ph = ns_v_lp_.step(v_seq.neg, dt);  // NS phasor estimate
        if (p_.ns_strategy != NsStrategy::BalancedCurrent) {
            auto [ns, clamped] = ns_reference(p_.ns_strategy, v_neg_ph, v_seq.pos,
                                              prev_sat_ipos_, p_.y_v_neg, p_.eps_v);
            out.suppression_clamped = clamped;
            i_neg_raw = ns;
            if (p_.ns_active_damping) {
                const Vec2 i_ad_neg =
                    ad_lp_neg_.step(hp_neg_.step(v_seq.neg, dt), dt) *
                    (1.0 / p_.r_ad_neg);
                i_neg_raw = i_neg_raw - i_ad_neg;
            }
            const double ns_mag = i_neg_raw.norm();
            if (ns_mag > p_.ns_i_cap) i_neg_raw = i_neg_raw * (p_.ns_i_cap / ns_mag);
        }

        // --- limiter ---
        LimiterResult lim;
        if (p_.ns_strategy == NsStrategy::BalancedCurrent) {
            lim = limit_balanced(i_pos_raw, p_.i_lim);
        } else if (p_.limiter == LimiterKind::EqualDownscale) {
            lim = limit_equal_downscale(i_pos_raw, i_neg_raw, p_.i_lim);
        } else {
            lim = limit_ns_priority(i_pos_raw, i_neg_raw, p_.i_lim);
        }
        prev_sat_ipos_ = lim.ipos;

        // --- stationary-frame proportional current control ---
        // Both the dq->stationary rotation and the feedforward are advanced
        // by the actuation delay so positive and negative sequences see a
        // symmetric phase shift, which the NS strategies are invariant to.
        const double phi = omega_r_ * p_.delay_comp_periods * dt;
        const Vec2 v_ff = ff_.step(clarke(v_pcc), omega_r_, dt);
        const Vec2 dff = (v_ff - prev_ff_) * (1.0 / dt);
        prev_ff_ = v_ff;
        const Vec2 v_ff_adv =
            v_ff * std::cos(phi) + dff * (std::sin(phi) / std::max(omega_r_, 1.0));
        const double w_pu = omega_r_ / p_.omega_n;
        const Vec2 v_ab = current_control(lim.ipos, lim.ineg, theta_r_ + phi, clarke(i_c),
                                          v_ff_adv, w_pu, p_.k_cc_p, p_.r_f, p_.x_f);

        out.v_ref = inv_clarke(v_ab);
        out.i_pos_ref = lim.ipos;
        out.i_neg_ref = lim.ineg;
        out.i_pos_ref_raw = i_pos_raw;
        out.i_neg_ref_raw = i_neg_raw;
        out.omega_r = omega_r_;
        out.theta_r = theta_r_;
        out.v_v = v_v_;
        out.fault_flag = fault_flag_;
        out.gamma = lim.gamma;

        if (!finite(out.v_ref))
            throw std::runtime_error("controller: non-finite voltage reference");
        return out;
    }

  private:
    void on_fault_entry() {
        if (p_.frt_mode == FrtMode::VirtualSynchronousCondenser &&
            p_.vsc_policy == VscIntegratorPolicy::FreezeAndReset) {
            pll_int_ = 0.0;
            omega_r_ = p_.omega_n;
            avr_.state = 0.0;
        }
        // the virtual current source is bypassed during the fault in this
        // mode, so its integrator must not wind up on the depressed voltage
        if (p_.frt_mode == FrtMode::VectorCurrentControl) avr_.state = 0.0;
    }

    void on_fault_clear(const Vec2& v_pos, double v_mag) {
        if (p_.frt_mode == FrtMode::VirtualSynchronousCondenser) {
            // Resume the PLL integral from the frozen frequency so the PI
            // output is continuous at release.
            pll_int_ = omega_r_ / p_.omega_n - 1.0;
        }
        // Bumpless reversion to normal operation: snap the governor/AVR
        // measurement filters to the instantaneous values so the droop term
        // is not divided by a stale fault-window voltage.
        lpf_vd_.init(v_pos.x);
        lpf_vmag_.init(v_mag);
        lpf_freq_.init(omega_r_ / p_.omega_n - 1.0);
    }

    ControlParams p_;

    double theta_r_{0.0};
    double omega_r_;
    double pll_int_{0.0};
    AvrIntegrator avr_;
    double v_v_;
    bool fault_flag_{false};
    Vec2 prev_sat_ipos_{0.0, 0.0};
    double prev_raw_ipos_mag_{0.0};
    Vec2 prev_ff_{0.0, 0.0};

    SequenceExtractor v_extract_;
    SequenceExtractor i_extract_;
    LowPassFilter lpf_freq_;
    LowPassFilter lpf_vd_;
    LowPassFilter lpf_vmag_;
    HighPassFilter2 hp_pos_;
    HighPassFilter2 hp_neg_;
    LowPassFilter2 ad_lp_pos_;
    LowPassFilter2 ad_lp_neg_;
    LowPassFilter2 ns_v_lp_;
    BandPassFilter2 ff_;
    VirtualAdmittance admittance_;
};

}  // namespace gfvcc

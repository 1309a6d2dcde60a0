#include "fwsim/control.hpp"

#include <algorithm>
#include <cmath>

#include "fwsim/angles.hpp"

namespace fwsim {
namespace {

// Integrate only while unsaturated, or when the error pulls the output back
// out of saturation.
void integrate_conditional(double& acc, double error, double dt, double unclamped, double clamped,
                           double limit) {
    const bool saturated = unclamped != clamped;
    if (!saturated || (unclamped > clamped && error < 0) || (unclamped < clamped && error > 0)) {
        acc = std::clamp(acc + error * dt, -limit, limit);
    }
}

}  // namespace

const char* mode_name(ControllerMode mode) {
    return mode == ControllerMode::Aotc ? "aotc" : "ratc";
}

ControllerMode parse_mode(const std::string& text) {
    if (text == "aotc") return ControllerMode::Aotc;
    if (text == "ratc") return ControllerMode::Ratc;
    throw ConfigError("controller mode must be 'aotc' or 'ratc' (got '" + text + "')");
}

RollPlant roll_plant(const AircraftParams& P, const GammaSet& G, double Va) {
    const double Cpp = G.gamma3 * P.C_lp + G.gamma4 * P.C_np;
    const double Cpda = G.gamma3 * P.C_lda + G.gamma4 * P.C_nda;
    return {-P.rho * Va * P.Sw * P.bw * P.bw * Cpp / 4.0,
            0.5 * P.rho * Va * Va * P.Sw * P.bw * Cpda};
}

RatcGains ratc_gain_synthesis(const CombinedYawCoeffs& c, double wn, double zeta) {
    if (c.a_psi2 == 0.0) {
        throw DomainError("ratc_gain_synthesis: a_psi2 = 0, rudder has no yaw authority");
    }
    if (!(wn > 0) || !(zeta > 0)) {
        throw DomainError("ratc_gain_synthesis: wn and zeta must be > 0");
    }
    RatcGains g;
    g.wn_psi = wn;
    g.zeta_psi = zeta;
    g.kp_psi = wn * wn / c.a_psi2;
    g.kd_psi = (2.0 * zeta * wn - c.a_psi1) / c.a_psi2;
    return g;
}

AotcGains aotc_gain_synthesis(const AircraftParams& P, const GammaSet& G, double Va,
                              const ControllerSettings& s) {
    const RollPlant rp = roll_plant(P, G, Va);
    if (rp.a_phi2 == 0.0) {
        throw DomainError("aotc_gain_synthesis: ailerons have no roll authority");
    }
    if (!(s.separation >= 1.0)) {
        throw DomainError("aotc_gain_synthesis: bandwidth separation must be >= 1");
    }
    if (!(s.wn_chi > 0.0) || s.wn_chi > s.wn_phi / s.separation * (1.0 + 1e-12)) {
        throw DomainError("aotc_gain_synthesis: course bandwidth must be in (0, wn_phi / separation]");
    }
    AotcGains g;
    g.wn_phi = s.wn_phi;
    g.zeta_phi = s.zeta_phi;
    g.kp_phi = s.wn_phi * s.wn_phi / rp.a_phi2;
    g.kd_phi = (2.0 * s.zeta_phi * s.wn_phi - rp.a_phi1) / rp.a_phi2;
    g.ki_phi = s.ki_phi;
    g.separation = s.separation;
    g.wn_chi = s.wn_chi;
    g.zeta_chi = s.zeta_chi;
    // chi/phi = g/(Vg s) with Vg = Va in calm air.
    g.kp_chi = 2.0 * s.zeta_chi * g.wn_chi * Va / P.g;
    g.ki_chi = g.wn_chi * g.wn_chi * Va / P.g;
    return g;
}

LongitudinalGains longitudinal_gain_synthesis(const AircraftParams& P, double Va,
                                              const ControllerSettings& s) {
    const double qSc = 0.5 * P.rho * Va * Va * P.Sw * P.cbar;
    const double a1 = -P.rho * Va * P.Sw * P.cbar * P.cbar * P.C_mq / (4.0 * P.Iyy);
    const double a2 = -qSc * P.C_malpha / P.Iyy;
    const double a3 = qSc * P.C_mde / P.Iyy;
    if (a3 == 0.0) {
        throw DomainError("longitudinal_gain_synthesis: elevator has no pitch authority");
    }
    LongitudinalGains g;
    g.kp_theta = (s.wn_theta * s.wn_theta - a2) / a3;
    g.kd_theta = (2.0 * s.zeta_theta * s.wn_theta - a1) / a3;
    const double k_dc = g.kp_theta * a3 / (a2 + g.kp_theta * a3);
    g.kp_h = 2.0 * s.zeta_h * s.wn_h / (k_dc * Va);
    g.ki_h = s.wn_h * s.wn_h / (k_dc * Va);
    g.kp_V = s.kp_V;
    g.ki_V = s.ki_V;
    return g;
}

std::optional<double> coordinated_turn_radius(double Va, double phi, double gamma_climb,
                                              double g) {
    const double t = std::tan(phi);
    if (std::abs(std::sin(phi)) < 1e-12) {
        return std::nullopt;
    }
    return Va * Va * std::cos(gamma_climb) / (g * t);
}

LoopState make_loop_state(const TrimResult& trim_point) {
    LoopState loop;
    loop.trim = trim_point.command;
    loop.theta_trim = trim_point.state.theta;
    loop.theta_cmd = trim_point.state.theta;
    return loop;
}

namespace {

// Roll PID shared by the AOTC inner loop and the RATC wings-level hold.
double roll_loop(double phi_cmd, const AircraftState& s, const AotcGains& g,
                 const AircraftParams& P, LoopState& loop, double dt, bool& saturated) {
    const double err = phi_cmd - s.phi;
    const double lim = P.actuators.aileron_max;
    const double unclamped =
        loop.trim.delta_a + g.kp_phi * err - g.kd_phi * s.p + g.ki_phi * loop.int_phi;
    const double out = std::clamp(unclamped, -lim, lim);
    const double int_lim = g.ki_phi > 0 ? 2.0 * lim / g.ki_phi : 0.0;
    integrate_conditional(loop.int_phi, err, dt, unclamped, out, int_lim);
    saturated = saturated || unclamped != out;
    return out;
}

}  // namespace

LateralOutput ratc_step(double chi_cmd, const AircraftState& s, const AirData& air,
                        const AircraftParams& P, const GammaSet& G,
                        const ControllerSettings& settings, const AotcGains& roll_gains,
                        LoopState& loop, double dt) {
    LateralOutput out;
    out.telemetry.nested_loops = 1;
    const double Va = std::max(air.Va, 1.0);
    AirData sched = air;
    sched.Va = Va;
    const RatcGains g =
        ratc_gain_synthesis(combined_yaw_coeffs(P, G, sched), settings.wn_psi, settings.zeta_psi);

    const double e_psi = angle_diff(chi_cmd, s.psi);
    const double lim = P.actuators.rudder_max;
    const double dr = loop.trim.delta_r + g.kp_psi * e_psi - g.kd_psi * s.r;
    out.delta_r = std::clamp(dr, -lim, lim);
    bool sat = out.delta_r != dr;

    loop.phi_cmd = 0.0;
    out.delta_a = roll_loop(0.0, s, roll_gains, P, loop, dt, sat);

    out.telemetry.heading_error = e_psi;
    out.telemetry.roll_error = -s.phi;
    out.telemetry.saturated = sat;
    loop.lateral_saturated = sat;
    return out;
}

LateralOutput aotc_step(double chi_cmd, const AircraftState& s, const AirData& air,
                        const AircraftParams& P, const AotcGains& g,
                        const ControllerSettings& settings, LoopState& loop, double dt) {
    LateralOutput out;
    out.telemetry.nested_loops = 2;
    const double e_chi = angle_diff(chi_cmd, air.chi);
    const double bank = settings.bank_limit;
    const double phi_unclamped = g.kp_chi * e_chi + g.ki_chi * loop.int_chi;
    const double phi_cmd = std::clamp(phi_unclamped, -bank, bank);
    const double int_lim = g.ki_chi > 0 ? 2.0 * bank / g.ki_chi : 0.0;
    integrate_conditional(loop.int_chi, e_chi, dt, phi_unclamped, phi_cmd, int_lim);
    loop.phi_cmd = phi_cmd;

    bool sat = phi_cmd != phi_unclamped;
    out.delta_a = roll_loop(phi_cmd, s, g, P, loop, dt, sat);
    out.delta_r = std::clamp(loop.trim.delta_r, -P.actuators.rudder_max, P.actuators.rudder_max);

    out.telemetry.course_error = e_chi;
    out.telemetry.roll_error = phi_cmd - s.phi;
    out.telemetry.saturated = sat;
    loop.lateral_saturated = sat;
    return out;
}

LongitudinalOutput longitudinal_holds(const AircraftState& s, const AirData& air, double h_cmd,
                                      double Va_cmd, const AircraftParams& P,
                                      const LongitudinalGains& g, LoopState& loop, double dt) {
    LongitudinalOutput out;

    const double e_h = h_cmd - (-s.pd);
    const double th_unclamped = loop.theta_trim + g.kp_h * e_h + g.ki_h * loop.int_h;
    const double th_cmd =
        std::clamp(th_unclamped, loop.theta_trim - g.theta_max, loop.theta_trim + g.theta_max);
    const double int_h_lim = g.ki_h > 0 ? 2.0 * g.theta_max / g.ki_h : 0.0;
    integrate_conditional(loop.int_h, e_h, dt, th_unclamped, th_cmd, int_h_lim);
    loop.theta_cmd = th_cmd;
    out.theta_cmd = th_cmd;

    const double de = loop.trim.delta_e + g.kp_theta * (th_cmd - s.theta) - g.kd_theta * s.q;
    out.delta_e = std::clamp(de, -P.actuators.elevator_max, P.actuators.elevator_max);

    const double e_V = Va_cmd - air.Va;
    const double dt_unclamped = loop.trim.delta_t + g.kp_V * e_V + g.ki_V * loop.int_V;
    out.delta_t = std::clamp(dt_unclamped, 0.0, 1.0);
    const double int_V_lim = g.ki_V > 0 ? 1.0 / g.ki_V : 0.0;
    integrate_conditional(loop.int_V, e_V, dt, dt_unclamped, out.delta_t, int_V_lim);
    return out;
}

}  // namespace fwsim

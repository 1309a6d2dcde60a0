#pragma once

// Lateral trajectory controllers (aileron-only and rudder-augmented), the
// longitudinal holds, and their gain synthesis.

#include <optional>
#include <string>

#include "fwsim/dynamics.hpp"

namespace fwsim {

enum class ControllerMode { Aotc, Ratc };

const char* mode_name(ControllerMode mode);
ControllerMode parse_mode(const std::string& text);  // "aotc" | "ratc"

/// Heading PD gains for delta_r = kp*(psi_cmd - psi) - kd*r.
struct RatcGains {
    double kp_psi = 0;
    double kd_psi = 0;
    double wn_psi = 0;
    double zeta_psi = 0;
};

/// Roll PID (inner loop / wings-level hold) and course PI (outer loop).
struct AotcGains {
    double kp_phi = 0, kd_phi = 0, ki_phi = 0;
    double kp_chi = 0, ki_chi = 0;
    double wn_phi = 0, zeta_phi = 0;
    double wn_chi = 0, zeta_chi = 0;
    double separation = 5.0;
};

struct LongitudinalGains {
    double kp_theta = 0, kd_theta = 0;
    double kp_h = 0, ki_h = 0;
    double kp_V = 0, ki_V = 0;
    double theta_max = 0.35;  // pitch command limit about trim [rad]
};

/// Design inputs for every loop. Angles in rad, frequencies in rad/s.
struct ControllerSettings {
    ControllerMode mode = ControllerMode::Ratc;
    double wn_psi = 4.0, zeta_psi = 0.9;
    double wn_phi = 12.0, zeta_phi = 0.9;
    double ki_phi = 0.5;           // roll integral gain [rad aileron / (rad s)]
    double separation = 5.0;       // minimum roll / course bandwidth ratio
    double wn_chi = 0.6, zeta_chi = 0.9;
    double bank_limit = deg2rad(45);
    double wn_theta = 6.0, zeta_theta = 0.8;
    double wn_h = 0.4, zeta_h = 0.9;
    double kp_V = 0.06, ki_V = 0.03;
};

/// 2nd-order roll plant phi'' = -a_phi1 phi' + a_phi2 delta_a at airspeed Va.
struct RollPlant {
    double a_phi1 = 0;
    double a_phi2 = 0;
};
RollPlant roll_plant(const AircraftParams& params, const GammaSet& gammas, double Va);

/// Closed-form PD gains placing the heading loop poles at wn, zeta.
/// Throws DomainError when a_psi2 == 0 (rudder has no yaw authority).
RatcGains ratc_gain_synthesis(const CombinedYawCoeffs& coeffs, double wn, double zeta);

/// Throws DomainError for an invalid design (zero roll authority, or a course
/// bandwidth above wn_phi / separation).
AotcGains aotc_gain_synthesis(const AircraftParams& params, const GammaSet& gammas, double Va,
                              const ControllerSettings& settings);

LongitudinalGains longitudinal_gain_synthesis(const AircraftParams& params, double Va,
                                              const ControllerSettings& settings);

/// Level-flight coordinated turn radius Va^2 cos(gamma) / (g tan(phi)).
/// Returns nullopt for phi == 0 mod pi (straight flight).
std::optional<double> coordinated_turn_radius(double Va, double phi, double gamma_climb,
                                              double g = 9.81);

struct LoopState {
    ControlCommand trim;          // trim offsets
    double theta_trim = 0;
    double int_chi = 0;           // course error integral [rad s]
    double int_phi = 0;           // roll error integral [rad s]
    double int_h = 0;             // altitude error integral [m s]
    double int_V = 0;             // airspeed error integral [m s / s]
    double phi_cmd = 0;           // last commanded bank
    double theta_cmd = 0;         // last commanded pitch
    bool lateral_saturated = false;
};

LoopState make_loop_state(const TrimResult& trim_point);

/// Which error signals drive the lateral command path (loop topology).
struct LateralTelemetry {
    int nested_loops = 0;  // 1 for RATC heading loop, 2 for AOTC course->roll
    double course_error = 0;
    double heading_error = 0;
    double roll_error = 0;
    bool saturated = false;
};

struct LateralOutput {
    double delta_a = 0;
    double delta_r = 0;
    LateralTelemetry telemetry;
};

/// Rudder PD on heading (psi_cmd = chi_cmd) with an aileron wings-level hold.
/// Gains are rescheduled from the current airspeed.
LateralOutput ratc_step(double chi_cmd, const AircraftState& state, const AirData& air,
                        const AircraftParams& params, const GammaSet& gammas,
                        const ControllerSettings& settings, const AotcGains& roll_gains,
                        LoopState& loop, double dt);

/// Course PI -> bank command -> roll PID -> aileron. Rudder stays at trim.
LateralOutput aotc_step(double chi_cmd, const AircraftState& state, const AirData& air,
                        const AircraftParams& params, const AotcGains& gains,
                        const ControllerSettings& settings, LoopState& loop, double dt);

struct LongitudinalOutput {
    double delta_e = 0;
    double delta_t = 0;
    double theta_cmd = 0;
};

LongitudinalOutput longitudinal_holds(const AircraftState& state, const AirData& air, double h_cmd,
                                      double Va_cmd, const AircraftParams& params,
                                      const LongitudinalGains& gains, LoopState& loop, double dt);

}  // namespace fwsim

#pragma once

// Nonlinear 6-DOF fixed-wing model: coefficient buildup, inertia reductions,
// state derivatives, RK4 propagation, and straight-line trim.

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "fwsim/angles.hpp"
#include "fwsim/errors.hpp"

namespace fwsim {

/// Rigid-body state. Body velocities are relative to the air mass.
/// Also used as the container for its own time derivative.
struct AircraftState {
    double pn = 0, pe = 0, pd = 0;        // NED position [m]
    double u = 0, v = 0, w = 0;           // body air-relative velocity [m/s]
    double phi = 0, theta = 0, psi = 0;   // Euler ZYX angles [rad]
    double p = 0, q = 0, r = 0;           // body rates [rad/s]

    AircraftState& operator+=(const AircraftState& o);
    friend AircraftState operator+(AircraftState a, const AircraftState& b) { return a += b; }
    friend AircraftState operator*(double k, AircraftState a);
    friend bool operator==(const AircraftState&, const AircraftState&) = default;

    bool all_finite() const;
};

/// Surface deflections [rad] and throttle [0, 1].
struct ControlCommand {
    double delta_a = 0;
    double delta_e = 0;
    double delta_r = 0;
    double delta_t = 0;

    friend bool operator==(const ControlCommand&, const ControlCommand&) = default;
};

struct ActuatorLimits {
    double aileron_max = deg2rad(30);     // rad
    double elevator_max = deg2rad(30);    // rad
    double rudder_max = deg2rad(30);      // rad
    double aileron_rate = deg2rad(300);   // rad/s
    double elevator_rate = deg2rad(300);  // rad/s
    double rudder_rate = deg2rad(300);    // rad/s
};

struct AircraftParams {
    // mass properties
    double mass = 13.5;
    double g = 9.81;
    double Ixx = 0.8244, Iyy = 1.135, Izz = 1.759, Ixz = 0.1204;
    // geometry / atmosphere
    double rho = 1.2682;
    double Sw = 0.55;
    double bw = 2.8956;
    double cbar = 0.18994;
    // lateral-directional derivatives (per rad)
    double C_l0 = 0, C_lbeta = 0, C_lp = 0, C_lr = 0, C_lda = 0, C_ldr = 0;
    double C_n0 = 0, C_nbeta = 0, C_np = 0, C_nr = 0, C_nda = 0, C_ndr = 0;
    double C_Y0 = 0, C_Ybeta = 0, C_Yp = 0, C_Yr = 0, C_Yda = 0, C_Ydr = 0;
    // longitudinal derivatives (per rad)
    double C_L0 = 0, C_Lalpha = 0, C_Lq = 0, C_Lde = 0;
    double C_D0 = 0, C_Dalpha = 0;
    double C_m0 = 0, C_malpha = 0, C_mq = 0, C_mde = 0;
    // propulsion: T = static_thrust * dt * (1 - (Va / zero_thrust_speed)^2), floored at 0
    double static_thrust = 60.0;
    double zero_thrust_speed = 40.0;

    ActuatorLimits actuators;

    double weight() const { return mass * g; }
    /// Throws ConfigError naming the first violated invariant.
    void validate() const;
};

struct AirData {
    double Va = 0;
    double Vg = 0;
    double alpha = 0;
    double beta = 0;
    double gamma_climb = 0;
    double chi = 0;
};

/// Reduced moment-of-inertia terms of the symmetric-aircraft rotational equations.
struct GammaSet {
    double gamma1 = 0, gamma2 = 0, gamma3 = 0, gamma4 = 0;
    double gamma5 = 0, gamma6 = 0, gamma7 = 0, gamma8 = 0;

    std::array<double, 8> as_array() const {
        return {gamma1, gamma2, gamma3, gamma4, gamma5, gamma6, gamma7, gamma8};
    }
};

/// Combined yaw-acceleration coefficients (Gamma4*C_l + Gamma8*C_n) and the
/// heading plant psi'' = -a_psi1 psi' + a_psi2 delta_r + d_psi.
struct CombinedYawCoeffs {
    double Cr0 = 0, Crbeta = 0, Crp = 0, Crr = 0, Crda = 0, Crdr = 0;
    double a_psi1 = 0;  // 1/s
    double a_psi2 = 0;  // 1/s^2 per rad of rudder
    double d_psi = 0;   // rad/s^2
};

struct ForcesMoments {
    double Fx = 0, Fy = 0, Fz = 0;  // body forces incl. gravity and thrust [N]
    double l = 0, m = 0, n = 0;     // body moments [N m]
};

struct WindSample {
    double n = 0, e = 0, d = 0;     // wind in NED [m/s]
    double dn = 0, de = 0, dd = 0;  // wind rate [m/s^2]
};

/// Seeded first-order Gauss-Markov gust realization sampled at a fixed step.
struct GustSeries {
    double dt = 0.01;
    std::vector<std::array<double, 3>> samples;  // NED gust components
};

struct GustSettings {
    bool enabled = false;
    std::uint64_t seed = 1;
    double sigma = 1.0;  // per-axis standard deviation [m/s]
    double tau = 2.0;    // correlation time [s]
};

GustSeries make_gust_series(const GustSettings& settings, double duration, double dt);

struct Environment {
    double Wn = 0, We = 0, Wd = 0;
    std::shared_ptr<const GustSeries> gust;  // null when gusts are off

    /// Total wind and its rate at time t (gust linearly interpolated).
    WindSample wind_at(double t) const;
};

class SingularityError : public SimError {
public:
    SingularityError(const std::string& what, const AircraftState& s)
        : SimError(ErrorCategory::Singularity, what), state(s) {}
    AircraftState state;
};

class IntegrationFault : public SimError {
public:
    IntegrationFault(const std::string& what, const AircraftState& s)
        : SimError(ErrorCategory::Integration, what), state(s) {}
    AircraftState state;
};

class TrimFailure : public SimError {
public:
    TrimFailure(const std::string& what, double res)
        : SimError(ErrorCategory::Trim, what), residual(res) {}
    double residual;
};

/// Pitch margin kept from +-pi/2 before the Euler kinematics are declared singular.
inline constexpr double kPitchSingularityMargin = 1e-3;
/// Below this airspeed aerodynamic terms are dropped.
inline constexpr double kMinAeroAirspeed = 0.1;

GammaSet gamma_terms(const AircraftParams& params);

/// Body-to-inertial direction cosine matrix (ZYX Euler), row-major.
std::array<std::array<double, 3>, 3> body_to_inertial(double phi, double theta, double psi);

/// Air data from the state and the wind at the same instant.
AirData air_data(const AircraftState& s, const WindSample& wind);

CombinedYawCoeffs combined_yaw_coeffs(const AircraftParams& params, const GammaSet& gammas,
                                      const AirData& air, double p = 0.0, double delta_a = 0.0);

double thrust(const AircraftParams& params, double Va, double delta_t);

ForcesMoments aero_forces_moments(const AircraftState& s, const ControlCommand& cmd,
                                  const AircraftParams& params);

AircraftState state_derivative(const AircraftState& s, const ForcesMoments& fm,
                               const AircraftParams& params, const GammaSet& gammas,
                               const WindSample& wind);

/// Clamp deflections to the actuator position limits and throttle to [0, 1].
ControlCommand clamp_command(const ControlCommand& cmd, const ActuatorLimits& limits);

/// Classical RK4 over one fixed step. `t` selects the wind sample.
AircraftState integrate_step(const AircraftState& s, const ControlCommand& cmd,
                             const Environment& env, const AircraftParams& params, double dt,
                             double t = 0.0);

struct TrimResult {
    AircraftState state;
    ControlCommand command;
    double residual = 0;  // infinity norm of the trim equations at the solution
    int iterations = 0;
};

/// Straight-line trim at airspeed Va and climb angle gamma (wings level).
TrimResult trim(const AircraftParams& params, double Va, double gamma);

}  // namespace fwsim

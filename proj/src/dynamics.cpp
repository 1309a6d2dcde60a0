#include "fwsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fwsim/angles.hpp"

namespace fwsim {

AircraftState& AircraftState::operator+=(const AircraftState& o) {
    pn += o.pn; pe += o.pe; pd += o.pd;
    u += o.u; v += o.v; w += o.w;
    phi += o.phi; theta += o.theta; psi += o.psi;
    p += o.p; q += o.q; r += o.r;
    return *this;
}

AircraftState operator*(double k, AircraftState a) {
    a.pn *= k; a.pe *= k; a.pd *= k;
    a.u *= k; a.v *= k; a.w *= k;
    a.phi *= k; a.theta *= k; a.psi *= k;
    a.p *= k; a.q *= k; a.r *= k;
    return a;
}

bool AircraftState::all_finite() const {
    for (double x : {pn, pe, pd, u, v, w, phi, theta, psi, p, q, r}) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

void AircraftParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) {
            throw ConfigError(std::string("aircraft parameters: ") + what);
        }
    };
    require(mass > 0, "mass must be > 0");
    require(g > 0, "gravity must be > 0");
    require(rho > 0, "air density must be > 0");
    require(Sw > 0, "wing area must be > 0");
    require(bw > 0, "wing span must be > 0");
    require(cbar > 0, "mean chord must be > 0");
    require(Ixx > 0 && Iyy > 0 && Izz > 0, "Ixx, Iyy, Izz must be > 0");
    require(Ixx * Izz - Ixz * Ixz > 0, "Ixx*Izz - Ixz^2 must be > 0");
    require(static_thrust >= 0, "static thrust must be >= 0");
    require(zero_thrust_speed > 0, "zero-thrust speed must be > 0");
    const auto& a = actuators;
    require(a.aileron_max > 0 && a.elevator_max > 0 && a.rudder_max > 0,
            "actuator deflection limits must be > 0");
    require(a.aileron_rate > 0 && a.elevator_rate > 0 && a.rudder_rate > 0,
            "actuator rate limits must be > 0");
}

// ---------------------------------------------------------------------------
// Wind

GustSeries make_gust_series(const GustSettings& settings, double duration, double dt) {
    GustSeries series;
    series.dt = dt;
    const auto n = static_cast<std::size_t>(std::ceil(std::max(duration, 0.0) / dt)) + 2;
    series.samples.assign(n, {0.0, 0.0, 0.0});
    if (!settings.enabled) {
        return series;
    }
    std::mt19937_64 rng(settings.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double a = std::exp(-dt / settings.tau);
    const double b = settings.sigma * std::sqrt(1.0 - a * a);
    std::array<double, 3> x{};
    for (auto& c : x) {
        c = settings.sigma * normal(rng);
    }
    for (auto& sample : series.samples) {
        sample = x;
        for (auto& c : x) {
            c = a * c + b * normal(rng);
        }
    }
    return series;
}

WindSample Environment::wind_at(double t) const {
    WindSample ws{Wn, We, Wd, 0.0, 0.0, 0.0};
    if (!gust || gust->samples.empty()) {
        return ws;
    }
    const auto& s = gust->samples;
    const double x = std::max(t, 0.0) / gust->dt;
    auto k = static_cast<std::size_t>(x);
    if (k + 1 >= s.size()) {
        const auto& last = s.back();
        ws.n += last[0];
        ws.e += last[1];
        ws.d += last[2];
        return ws;
    }
    const double f = x - static_cast<double>(k);
    const auto& g0 = s[k];
    const auto& g1 = s[k + 1];
    ws.n += g0[0] + f * (g1[0] - g0[0]);
    ws.e += g0[1] + f * (g1[1] - g0[1]);
    ws.d += g0[2] + f * (g1[2] - g0[2]);
    ws.dn = (g1[0] - g0[0]) / gust->dt;
    ws.de = (g1[1] - g0[1]) / gust->dt;
    ws.dd = (g1[2] - g0[2]) / gust->dt;
    return ws;
}

// ---------------------------------------------------------------------------
// Inertia reductions and combined coefficients

GammaSet gamma_terms(const AircraftParams& params) {
    const double Ixx = params.Ixx, Iyy = params.Iyy, Izz = params.Izz, Ixz = params.Ixz;
    const double det = Ixx * Izz - Ixz * Ixz;
    if (!(Ixx > 0 && Iyy > 0 && Izz > 0) || !(det > 0)) {
        throw ConfigError("degenerate inertia: need Ixx, Iyy, Izz > 0 and Ixx*Izz - Ixz^2 > 0");
    }
    GammaSet g;
    g.gamma1 = Ixz * (Ixx - Iyy + Izz) / det;
    g.gamma2 = (Izz * (Izz - Iyy) + Ixz * Ixz) / det;
    g.gamma3 = Izz / det;
    g.gamma4 = Ixz / det;
    g.gamma5 = (Izz - Ixx) / Iyy;
    g.gamma6 = Ixz / Iyy;
    g.gamma7 = ((Ixx - Iyy) * Ixx + Ixz * Ixz) / det;
    g.gamma8 = Ixx / det;
    return g;
}

CombinedYawCoeffs combined_yaw_coeffs(const AircraftParams& params, const GammaSet& gm,
                                      const AirData& air, double p, double delta_a) {
    if (!(air.Va > 0)) {
        throw DomainError("combined_yaw_coeffs: airspeed must be > 0");
    }
    CombinedYawCoeffs c;
    c.Cr0 = gm.gamma4 * params.C_l0 + gm.gamma8 * params.C_n0;
    c.Crbeta = gm.gamma4 * params.C_lbeta + gm.gamma8 * params.C_nbeta;
    c.Crp = gm.gamma4 * params.C_lp + gm.gamma8 * params.C_np;
    c.Crr = gm.gamma4 * params.C_lr + gm.gamma8 * params.C_nr;
    c.Crda = gm.gamma4 * params.C_lda + gm.gamma8 * params.C_nda;
    c.Crdr = gm.gamma4 * params.C_ldr + gm.gamma8 * params.C_ndr;

    const double Va = air.Va;
    const double qSb = 0.5 * params.rho * Va * Va * params.Sw * params.bw;
    // The rate term carries b/(2 Va), so the damping coefficient scales with Va.
    c.a_psi1 = -params.rho * Va * params.Sw * params.bw * params.bw * c.Crr / 4.0;
    c.a_psi2 = qSb * c.Crdr;
    c.d_psi = qSb * (c.Cr0 + c.Crbeta * air.beta + c.Crp * params.bw * p / (2.0 * Va) +
                     c.Crda * delta_a);
    return c;
}

// ---------------------------------------------------------------------------
// Kinematics and forces

std::array<std::array<double, 3>, 3> body_to_inertial(double phi, double theta, double psi) {
    const double cph = std::cos(phi), sph = std::sin(phi);
    const double cth = std::cos(theta), sth = std::sin(theta);
    const double cps = std::cos(psi), sps = std::sin(psi);
    return {{{cth * cps, sph * sth * cps - cph * sps, cph * sth * cps + sph * sps},
             {cth * sps, sph * sth * sps + cph * cps, cph * sth * sps - sph * cps},
             {-sth, sph * cth, cph * cth}}};
}

AirData air_data(const AircraftState& s, const WindSample& wind) {
    AirData a;
    a.Va = std::sqrt(s.u * s.u + s.v * s.v + s.w * s.w);
    a.alpha = std::atan2(s.w, s.u);
    a.beta = a.Va > 0 ? std::asin(std::clamp(s.v / a.Va, -1.0, 1.0)) : 0.0;
    const auto R = body_to_inertial(s.phi, s.theta, s.psi);
    const double vn = R[0][0] * s.u + R[0][1] * s.v + R[0][2] * s.w + wind.n;
    const double ve = R[1][0] * s.u + R[1][1] * s.v + R[1][2] * s.w + wind.e;
    const double vd = R[2][0] * s.u + R[2][1] * s.v + R[2][2] * s.w + wind.d;
    a.Vg = std::sqrt(vn * vn + ve * ve + vd * vd);
    a.chi = wrap_pi(std::atan2(ve, vn));
    a.gamma_climb = a.Vg > 0 ? std::asin(std::clamp(-vd / a.Vg, -1.0, 1.0)) : 0.0;
    return a;
}

double thrust(const AircraftParams& params, double Va, double delta_t) {
    const double ratio = Va / params.zero_thrust_speed;
    return std::max(0.0, params.static_thrust * delta_t * (1.0 - ratio * ratio));
}

ForcesMoments aero_forces_moments(const AircraftState& s, const ControlCommand& cmd,
                                  const AircraftParams& P) {
    ForcesMoments fm;
    const double W = P.weight();
    fm.Fx = -W * std::sin(s.theta);
    fm.Fy = W * std::cos(s.theta) * std::sin(s.phi);
    fm.Fz = W * std::cos(s.theta) * std::cos(s.phi);

    const double Va = std::sqrt(s.u * s.u + s.v * s.v + s.w * s.w);
    fm.Fx += thrust(P, Va, cmd.delta_t);
    if (Va < kMinAeroAirspeed) {
        return fm;
    }

    const double alpha = std::atan2(s.w, s.u);
    const double beta = std::asin(std::clamp(s.v / Va, -1.0, 1.0));
    const double qbar = 0.5 * P.rho * Va * Va;
    const double qS = qbar * P.Sw;
    const double bp = P.bw * s.p / (2.0 * Va);
    const double br = P.bw * s.r / (2.0 * Va);
    const double cq = P.cbar * s.q / (2.0 * Va);

    const double CL = P.C_L0 + P.C_Lalpha * alpha + P.C_Lq * cq + P.C_Lde * cmd.delta_e;
    const double CD = P.C_D0 + P.C_Dalpha * alpha;
    const double lift = qS * CL;
    const double drag = qS * CD;
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    fm.Fx += -drag * ca + lift * sa;
    fm.Fz += -drag * sa - lift * ca;
    fm.Fy += qS * (P.C_Y0 + P.C_Ybeta * beta + P.C_Yp * bp + P.C_Yr * br + P.C_Yda * cmd.delta_a +
                   P.C_Ydr * cmd.delta_r);

    const double qSb = qS * P.bw;
    fm.l = qSb * (P.C_l0 + P.C_lbeta * beta + P.C_lp * bp + P.C_lr * br + P.C_lda * cmd.delta_a +
                  P.C_ldr * cmd.delta_r);
    fm.n = qSb * (P.C_n0 + P.C_nbeta * beta + P.C_np * bp + P.C_nr * br + P.C_nda * cmd.delta_a +
                  P.C_ndr * cmd.delta_r);
    fm.m = qS * P.cbar * (P.C_m0 + P.C_malpha * alpha + P.C_mq * cq + P.C_mde * cmd.delta_e);
    return fm;
}

AircraftState state_derivative(const AircraftState& s, const ForcesMoments& fm,
                               const AircraftParams& P, const GammaSet& G,
                               const WindSample& wind) {
    if (std::abs(s.theta) >= kPi / 2.0 - kPitchSingularityMargin) {
        std::ostringstream msg;
        msg << "Euler pitch singularity: theta = " << s.theta << " rad";
        throw SingularityError(msg.str(), s);
    }
    AircraftState d;
    const auto R = body_to_inertial(s.phi, s.theta, s.psi);

    d.pn = R[0][0] * s.u + R[0][1] * s.v + R[0][2] * s.w + wind.n;
    d.pe = R[1][0] * s.u + R[1][1] * s.v + R[1][2] * s.w + wind.e;
    d.pd = R[2][0] * s.u + R[2][1] * s.v + R[2][2] * s.w + wind.d;

    // Body-frame wind acceleration enters because the velocity states are air-relative.
    const double wdx = R[0][0] * wind.dn + R[1][0] * wind.de + R[2][0] * wind.dd;
    const double wdy = R[0][1] * wind.dn + R[1][1] * wind.de + R[2][1] * wind.dd;
    const double wdz = R[0][2] * wind.dn + R[1][2] * wind.de + R[2][2] * wind.dd;

    const double m = P.mass;
    d.u = s.r * s.v - s.q * s.w + fm.Fx / m - wdx;
    d.v = s.p * s.w - s.r * s.u + fm.Fy / m - wdy;
    d.w = s.q * s.u - s.p * s.v + fm.Fz / m - wdz;

    const double sph = std::sin(s.phi), cph = std::cos(s.phi);
    const double tth = std::tan(s.theta), cth = std::cos(s.theta);
    d.phi = s.p + (s.q * sph + s.r * cph) * tth;
    d.theta = s.q * cph - s.r * sph;
    d.psi = (s.q * sph + s.r * cph) / cth;

    d.p = G.gamma1 * s.p * s.q - G.gamma2 * s.q * s.r + G.gamma3 * fm.l + G.gamma4 * fm.n;
    d.q = G.gamma5 * s.p * s.r - G.gamma6 * (s.p * s.p - s.r * s.r) + fm.m / P.Iyy;
    d.r = G.gamma7 * s.p * s.q - G.gamma1 * s.q * s.r + G.gamma4 * fm.l + G.gamma8 * fm.n;
    return d;
}

ControlCommand clamp_command(const ControlCommand& cmd, const ActuatorLimits& lim) {
    return {std::clamp(cmd.delta_a, -lim.aileron_max, lim.aileron_max),
            std::clamp(cmd.delta_e, -lim.elevator_max, lim.elevator_max),
            std::clamp(cmd.delta_r, -lim.rudder_max, lim.rudder_max),
            std::clamp(cmd.delta_t, 0.0, 1.0)};
}

AircraftState integrate_step(const AircraftState& s, const ControlCommand& raw_cmd,
                             const Environment& env, const AircraftParams& params, double dt,
                             double t) {
    if (!(dt > 0)) {
        throw DomainError("integrate_step: dt must be > 0");
    }
    const GammaSet G = gamma_terms(params);
    const ControlCommand cmd = clamp_command(raw_cmd, params.actuators);
    auto f = [&](const AircraftState& x, double tt) {
        const AircraftState d =
            state_derivative(x, aero_forces_moments(x, cmd, params), params, G, env.wind_at(tt));
        if (!d.all_finite()) {
            throw IntegrationFault("non-finite state derivative", x);
        }
        return d;
    };
    const AircraftState k1 = f(s, t);
    const AircraftState k2 = f(s + (0.5 * dt) * k1, t + 0.5 * dt);
    const AircraftState k3 = f(s + (0.5 * dt) * k2, t + 0.5 * dt);
    const AircraftState k4 = f(s + dt * k3, t + dt);
    AircraftState out = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.phi = wrap_pi(out.phi);
    out.psi = wrap_pi(out.psi);
    if (!out.all_finite()) {
        throw IntegrationFault("non-finite state after integration step", s);
    }
    if (std::abs(out.theta) >= kPi / 2.0 - kPitchSingularityMargin) {
        throw SingularityError("Euler pitch singularity reached", out);
    }
    return out;
}

}  // namespace fwsim

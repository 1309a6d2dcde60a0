// Acceptance runner: one pass/fail line per criterion.
// Usage: acceptance            run all criteria
//        acceptance <n> [...]  run the listed criteria only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fwsim/angles.hpp"
#include "fwsim/config.hpp"
#include "fwsim/control.hpp"
#include "fwsim/dynamics.hpp"
#include "fwsim/metrics.hpp"
#include "fwsim/scenario.hpp"

namespace fs = std::filesystem;
using namespace fwsim;

namespace {

const fs::path kData = FWSIM_DATA_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// 1. Equation identities over randomized inputs.
Outcome equation_identities() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.5, 3.0);
    constexpr int kTrials = 1000;
    double worst_gamma = 0, worst_cr = 0, worst_gain = 0, worst_img = 0;

    for (int i = 0; i < kTrials; ++i) {
        AircraftParams P;
        P.Ixx = pos(rng);
        P.Iyy = pos(rng);
        P.Izz = pos(rng);
        P.Ixz = 0.3 * u(rng) * std::sqrt(P.Ixx * P.Izz);
        const GammaSet G = gamma_terms(P);

        // rotational equations against a direct solve of the inertia system
        AircraftState s;
        s.u = 15.0;
        s.p = u(rng);
        s.q = u(rng);
        s.r = u(rng);
        ForcesMoments fm;
        fm.l = u(rng);
        fm.m = u(rng);
        fm.n = u(rng);
        const AircraftState d = state_derivative(s, fm, P, G, WindSample{});
        const double rhs_l = fm.l + (P.Iyy - P.Izz) * s.q * s.r + P.Ixz * s.p * s.q;
        const double rhs_n = fm.n + (P.Ixx - P.Iyy) * s.p * s.q - P.Ixz * s.q * s.r;
        const double det = P.Ixx * P.Izz - P.Ixz * P.Ixz;
        const double pdot = (P.Izz * rhs_l + P.Ixz * rhs_n) / det;
        const double rdot = (P.Ixz * rhs_l + P.Ixx * rhs_n) / det;
        const double qdot =
            (fm.m + (P.Izz - P.Ixx) * s.p * s.r - P.Ixz * (s.p * s.p - s.r * s.r)) / P.Iyy;
        worst_gamma = std::max({worst_gamma, rel_err(d.p, pdot), rel_err(d.q, qdot), rel_err(d.r, rdot)});

        // combined yaw coefficients against the yaw acceleration of the full model
        P.C_l0 = 0.01 * u(rng);
        P.C_lbeta = 0.2 * u(rng);
        P.C_lp = -0.5 * pos(rng);
        P.C_lr = 0.2 * u(rng);
        P.C_lda = 0.2 * u(rng);
        P.C_ldr = 0.05 * u(rng);
        P.C_n0 = 0.01 * u(rng);
        P.C_nbeta = 0.1 * u(rng);
        P.C_np = 0.1 * u(rng);
        P.C_nr = -0.2 * pos(rng);
        P.C_nda = 0.05 * u(rng);
        P.C_ndr = 0.1 * u(rng);
        AircraftState a;
        a.u = 10.0 + 10.0 * pos(rng);
        a.v = 2.0 * u(rng);
        a.w = 2.0 * u(rng);
        a.p = u(rng);
        a.r = u(rng);
        ControlCommand cmd;
        cmd.delta_a = 0.3 * u(rng);
        cmd.delta_r = 0.3 * u(rng);
        const AirData air = air_data(a, WindSample{});
        const CombinedYawCoeffs c = combined_yaw_coeffs(P, G, air, a.p, cmd.delta_a);
        const double qSb = 0.5 * P.rho * air.Va * air.Va * P.Sw * P.bw;
        const double k = P.bw / (2.0 * air.Va);
        const double rdot_model = qSb * (c.Cr0 + c.Crbeta * air.beta + c.Crp * k * a.p +
                                         c.Crr * k * a.r + c.Crda * cmd.delta_a + c.Crdr * cmd.delta_r);
        const AircraftState da =
            state_derivative(a, aero_forces_moments(a, cmd, P), P, G, WindSample{});
        worst_cr = std::max(worst_cr, rel_err(da.r, rdot_model));

        // heading-loop gains against the closed-loop characteristic polynomial
        const double a1 = 2.0 * u(rng);
        const double a2 = (u(rng) < 0 ? -1.0 : 1.0) * pos(rng) * 10.0;
        const double wn = pos(rng) * 2.0;
        const double zeta = 0.3 + 0.3 * pos(rng);
        CombinedYawCoeffs yc;
        yc.a_psi1 = a1;
        yc.a_psi2 = a2;
        const RatcGains g = ratc_gain_synthesis(yc, wn, zeta);
        worst_gain = std::max({worst_gain, rel_err(a1 + a2 * g.kd_psi, 2.0 * zeta * wn),
                               rel_err(a2 * g.kp_psi, wn * wn)});

        // image-error decomposition
        const double e_lat = 50.0 * u(rng);
        const double phi = 1.4 * u(rng);
        const double h = 100.0 * pos(rng);
        const double e_tot = total_image_error(e_lat, phi, h);
        worst_img = std::max(worst_img, rel_err(e_tot - e_lat, h * std::tan(phi)));
    }
    const double worst = std::max({worst_gamma, worst_cr, worst_gain, worst_img});
    const double elapsed = seconds_since(t0);
    Outcome o;
    o.pass = worst < 1e-10 && elapsed < 10.0;
    o.detail = fmt("%d trials; worst rel err gamma %.1e, Cr %.1e, gains %.1e, image %.1e; %.2f s",
                   kTrials, worst_gamma, worst_cr, worst_gain, worst_img, elapsed);
    return o;
}

// 2. Open-loop 1 deg rudder step against the second-order heading model.
Outcome rudder_step() {
    const auto t0 = Clock::now();
    const AircraftParams P = load_aircraft(kData / "aerosonde.ini");
    const GammaSet G = gamma_terms(P);
    const double Va = 20.0;
    const TrimResult tp = trim(P, Va, 0.0);
    AirData air;
    air.Va = Va;
    const CombinedYawCoeffs yc = combined_yaw_coeffs(P, G, air);
    const double a1 = yc.a_psi1, a2 = yc.a_psi2;
    const double step = deg2rad(1.0);
    const double dt = 0.01;

    ControlCommand cmd = tp.command;
    cmd.delta_r += step;
    AircraftState x = tp.state;
    x.pd = -150.0;
    const Environment env;
    double num = 0, den = 0;
    for (int k = 0; k <= 500; ++k) {
        const double t = k * dt;
        const double model = a2 * step / a1 * (t - (1.0 - std::exp(-a1 * t)) / a1);
        const double psi = angle_diff(x.psi, tp.state.psi);
        num += (psi - model) * (psi - model);
        den += model * model;
        x = integrate_step(x, cmd, env, P, dt, t);
    }
    const double l2 = std::sqrt(num / den);
    const double elapsed = seconds_since(t0);
    Outcome o;
    o.pass = l2 < 0.05 && elapsed < 5.0;
    o.detail = fmt("relative L2 error %.3f over 5 s (a_psi1 %.3f, a_psi2 %.3f); %.2f s", l2, a1, a2,
                   elapsed);
    return o;
}

// 3. RK4 global error ratio on torque-free axisymmetric rotation.
Outcome rk4_order() {
    const auto t0 = Clock::now();
    AircraftParams P;
    P.Ixx = 1.0;
    P.Iyy = 1.0;
    P.Izz = 2.0;
    P.Ixz = 0.0;
    P.static_thrust = 0.0;  // every aerodynamic coefficient is zero by default
    const double r0 = 1.0;
    const double omega = (P.Izz - P.Ixx) / P.Ixx * r0;
    const double p0 = 0.3, q0 = -0.2, T = 10.0;
    const double p_exact = p0 * std::cos(omega * T) - q0 * std::sin(omega * T);
    const double q_exact = p0 * std::sin(omega * T) + q0 * std::cos(omega * T);

    auto global_error = [&](double dt) {
        AircraftState x;
        x.u = 20.0;
        x.p = p0;
        x.q = q0;
        x.r = r0;
        const Environment env;
        const int n = static_cast<int>(std::lround(T / dt));
        for (int k = 0; k < n; ++k) x = integrate_step(x, {}, env, P, dt, k * dt);
        return std::hypot(x.p - p_exact, x.q - q_exact);
    };
    const double e1 = global_error(0.1);
    const double e2 = global_error(0.05);
    const double ratio = e1 / e2;
    const double elapsed = seconds_since(t0);
    Outcome o;
    o.pass = ratio >= 12.0 && ratio <= 20.0 && elapsed < 5.0;
    o.detail = fmt("error(dt)=%.3e error(dt/2)=%.3e ratio %.2f; %.2f s", e1, e2, ratio, elapsed);
    return o;
}

struct RectangleComparison {
    Comparison cmp;
    double elapsed = 0;
};

const RectangleComparison& rectangle_comparison() {
    static const RectangleComparison rc = [] {
        RectangleComparison out;
        const auto t0 = Clock::now();
        out.cmp = compare_controllers(load_config(kData / "scenarios" / "rectangle.ini"));
        out.elapsed = seconds_since(t0);
        return out;
    }();
    return rc;
}

// 4. Roll magnitude on the crosswind rectangle.
Outcome roll_reduction() {
    const auto& rc = rectangle_comparison();
    const double a = rc.cmp.aotc.stats->abs_roll_mean_deg;
    const double r = rc.cmp.ratc.stats->abs_roll_mean_deg;
    Outcome o;
    o.pass = r <= 0.5 * a && rc.elapsed < 30.0 && rc.cmp.aotc.complete() && rc.cmp.ratc.complete();
    o.detail = fmt("mean |phi| ratc %.2f deg, aotc %.2f deg, ratio %.3f (<= 0.5); pair %.2f s", r, a,
                   r / a, rc.elapsed);
    return o;
}

// 5. RMS total image error at the high reference altitude.
Outcome image_error_reduction() {
    const auto& rc = rectangle_comparison();
    const double a = rc.cmp.aotc.stats->total_high.rms;
    const double r = rc.cmp.ratc.stats->total_high.rms;
    Outcome o;
    o.pass = r <= 0.7 * a && rc.elapsed < 30.0;
    o.detail = fmt("rms e_total@450 ratc %.2f m, aotc %.2f m, ratio %.3f (<= 0.7); pair %.2f s", r,
                   a, r / a, rc.elapsed);
    return o;
}

// 6. Slew limiter on a 90 degree course discontinuity.
Outcome slew_limiter() {
    const auto t0 = Clock::now();
    ScenarioConfig on = load_config(kData / "scenarios" / "right_angle.ini");
    ScenarioConfig off = on;
    on.guidance.slew_enabled = true;
    off.guidance.slew_enabled = false;
    const RunJob jobs[2] = {{&on, ControllerMode::Ratc, nullptr}, {&off, ControllerMode::Ratc, nullptr}};
    const std::vector<RunResult> runs = run_batch(jobs);
    const double leg_course = on.plan.segments.at(1).course();

    auto peak_roll = [](const RunResult& r) {
        double m = 0;
        for (const LogRow& row : r.log) m = std::max(m, std::abs(row.x.phi));
        return rad2deg(m);
    };
    auto settling = [&](const RunResult& r) {
        double t_switch = -1, t_last_out = -1;
        for (const LogRow& row : r.log) {
            if (t_switch < 0 && row.segment_id == 1) t_switch = row.t;
            if (t_switch >= 0 && std::abs(angle_diff(row.air.chi, leg_course)) > deg2rad(5.0)) {
                t_last_out = row.t;
            }
        }
        if (t_switch < 0) return std::numeric_limits<double>::infinity();
        return std::max(0.0, t_last_out - t_switch);
    };
    const double peak_on = peak_roll(runs[0]), peak_off = peak_roll(runs[1]);
    const double ts_on = settling(runs[0]), ts_off = settling(runs[1]);
    const double elapsed = seconds_since(t0);
    Outcome o;
    o.pass = peak_on <= 0.7 * peak_off && ts_on <= 2.0 * ts_off && elapsed < 20.0 &&
             runs[0].complete() && runs[1].complete();
    o.detail = fmt("peak |phi| on %.2f / off %.2f deg (reduction %.0f%%); settling on %.2f / off "
                   "%.2f s; %.2f s",
                   peak_on, peak_off, 100.0 * (1.0 - peak_on / peak_off), ts_on, ts_off, elapsed);
    return o;
}

// 7. RATC orbit.
Outcome orbit_stability() {
    const auto t0 = Clock::now();
    const ScenarioConfig cfg = load_config(kData / "scenarios" / "circle.ini");
    const RunResult r = run_scenario(cfg, ControllerMode::Ratc);
    const double rd = cfg.plan.segments.front().rd;
    double worst = 0;
    for (const LogRow& row : r.log) {
        if (row.t >= cfg.warmup) worst = std::max(worst, std::abs(row.e_lateral));
    }
    const double elapsed = seconds_since(t0);
    Outcome o;
    o.pass = r.complete() && worst < 0.5 * rd && elapsed < 30.0;
    o.detail = fmt("%s after %.1f s; max |e_orbit| %.2f m (< %.1f); %.2f s", status_name(r.status),
                   r.log.size() * cfg.dt, worst, 0.5 * rd, elapsed);
    return o;
}

// 8. Sideslip and roll direction in one comparison.
Outcome sideslip_direction() {
    const auto& rc = rectangle_comparison();
    const StatsBundle& a = *rc.cmp.aotc.stats;
    const StatsBundle& r = *rc.cmp.ratc.stats;
    Outcome o;
    o.pass = r.abs_beta_mean_deg > a.abs_beta_mean_deg && r.abs_roll_mean_deg < a.abs_roll_mean_deg;
    o.detail = fmt("mean |beta_est| ratc %.2f > aotc %.2f deg; mean |phi| ratc %.2f < aotc %.2f deg",
                   r.abs_beta_mean_deg, a.abs_beta_mean_deg, r.abs_roll_mean_deg,
                   a.abs_roll_mean_deg);
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 9. Determinism and shared environment.
Outcome determinism() {
    const auto t0 = Clock::now();
    ScenarioConfig cfg = load_config(kData / "scenarios" / "rectangle.ini");
    cfg.gust.enabled = true;
    cfg.gust.seed = 7;
    cfg.gust.sigma = 0.5;
    const fs::path dir = fs::temp_directory_path() / "fwsim_acceptance";
    fs::create_directories(dir);

    std::vector<std::string> files[2];
    Comparison first;
    for (int pass = 0; pass < 2; ++pass) {
        Comparison c = compare_controllers(cfg);
        for (const RunResult* r : {&c.aotc, &c.ratc}) {
            const fs::path p = dir / fmt("run%d_%s.csv", pass, mode_name(r->mode));
            export_csv(*r, p);
            files[pass].push_back(slurp(p));
        }
        files[pass].push_back(c.csv);
        if (pass == 0) first = std::move(c);
    }
    const bool identical = files[0] == files[1];

    const std::size_t n = std::min(first.aotc.log.size(), first.ratc.log.size());
    bool same_wind = n > 0;
    bool nontrivial = false;
    for (std::size_t i = 0; i < n; ++i) {
        const WindSample& a = first.aotc.log[i].wind;
        const WindSample& b = first.ratc.log[i].wind;
        same_wind = same_wind && a.n == b.n && a.e == b.e && a.d == b.d;
        nontrivial = nontrivial || a.n != 0.0;
    }
    fs::remove_all(dir);
    const double elapsed = seconds_since(t0);
    Outcome o;
    o.pass = identical && same_wind && nontrivial;
    o.detail = fmt("repeat CSVs %s; wind series %s across the pair (%zu samples, gusts %s); %.2f s",
                   identical ? "byte-identical" : "DIFFER", same_wind ? "identical" : "DIFFER", n,
                   nontrivial ? "active" : "INACTIVE", elapsed);
    return o;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {1, "equation identities", equation_identities},
        {2, "rudder step small-signal match", rudder_step},
        {3, "RK4 order", rk4_order},
        {4, "RATC roll <= 0.5 x AOTC (rectangle, crosswind)", roll_reduction},
        {5, "RATC rms image error @450 <= 0.7 x AOTC", image_error_reduction},
        {6, "slew limiter peak roll and settling", slew_limiter},
        {7, "RATC orbit stability", orbit_stability},
        {8, "RATC sideslip higher, roll lower", sideslip_direction},
        {9, "determinism and fairness", determinism},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const Criterion& c : all) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
            continue;
        }
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

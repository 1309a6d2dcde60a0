#include "fwsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>

#include "fwsim/angles.hpp"

namespace fwsim {
namespace {

double rate_step(double prev, double target, double rate, double dt) {
    return prev + std::clamp(target - prev, -rate * dt, rate * dt);
}

ControlCommand rate_limit(const ControlCommand& prev, const ControlCommand& target,
                          const ActuatorLimits& lim, double dt) {
    ControlCommand out = target;
    out.delta_a = rate_step(prev.delta_a, target.delta_a, lim.aileron_rate, dt);
    out.delta_e = rate_step(prev.delta_e, target.delta_e, lim.elevator_rate, dt);
    out.delta_r = rate_step(prev.delta_r, target.delta_r, lim.rudder_rate, dt);
    return out;
}

void put(std::string& line, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v == 0.0 ? 0.0 : v);  // no "-0"
    if (!line.empty()) line += ',';
    line += buf;
}

std::string fmt(double v, int precision = 3) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v == 0.0 ? 0.0 : v);
    return buf;
}

std::string h_label(double h) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", h);
    return buf;
}

}  // namespace

const char* status_name(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "completed";
        case RunStatus::DurationCap: return "duration-cap";
        case RunStatus::Failed: return "failed";
    }
    return "unknown";
}

Environment make_environment(const ScenarioConfig& cfg) {
    Environment env;
    env.Wn = cfg.Wn;
    env.We = cfg.We;
    env.Wd = cfg.Wd;
    if (cfg.gust.enabled) {
        env.gust = std::make_shared<const GustSeries>(
            make_gust_series(cfg.gust, cfg.duration + cfg.dt, cfg.dt));
    }
    return env;
}

AircraftState initial_state(const ScenarioConfig& cfg, const TrimResult& trim_point,
                            const Environment& env) {
    AircraftState x = trim_point.state;
    const PathSegment& first = cfg.plan.segments.front();
    double chi0 = 0;
    if (first.kind == SegmentKind::Line) {
        x.pn = first.origin.n;
        x.pe = first.origin.e;
        chi0 = first.course();
    } else {
        // north of the center, flying tangentially in the orbit direction
        x.pn = first.cn + first.rd;
        x.pe = first.ce;
        chi0 = first.lambda * kPi / 2.0;
    }
    x.pd = -cfg.plan.altitude();
    const WindSample w = env.wind_at(0.0);
    const double cross = -w.n * std::sin(chi0) + w.e * std::cos(chi0);
    const double ratio = std::clamp(cross / cfg.airspeed, -0.9, 0.9);
    x.psi = wrap_pi(chi0 - std::asin(ratio));
    x.phi = 0;
    x.p = x.q = x.r = 0;
    return x;
}

RunResult run_scenario(const ScenarioConfig& cfg, ControllerMode mode) {
    return run_scenario(cfg, mode, make_environment(cfg));
}

RunResult run_scenario(const ScenarioConfig& cfg, ControllerMode mode, const Environment& env) {
    cfg.validate();
    RunResult res;
    res.scenario = cfg.name;
    res.mode = mode;
    res.dt = cfg.dt;
    res.h_ref = cfg.h_ref;

    const AircraftParams& P = cfg.aircraft;
    const GammaSet G = gamma_terms(P);
    const TrimResult tp = trim(P, cfg.airspeed, 0.0);
    const AotcGains lat_gains = aotc_gain_synthesis(P, G, cfg.airspeed, cfg.controller);
    const LongitudinalGains lon_gains = longitudinal_gain_synthesis(P, cfg.airspeed, cfg.controller);

    PathManager manager(cfg.plan, cfg.guidance);
    LoopState loop = make_loop_state(tp);
    AircraftState x = initial_state(cfg, tp, env);
    ControlCommand applied = tp.command;
    const double h_cmd = cfg.plan.altitude();

    const auto steps = static_cast<std::size_t>(std::floor(cfg.duration / cfg.dt + 1e-9));
    res.log.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const Ned p{x.pn, x.pe, x.pd};
        const CourseCommand cc = manager.step(p, cfg.dt);
        if (cc.plan_complete) {
            res.status = RunStatus::Completed;
            break;
        }
        const WindSample wind = env.wind_at(t);
        const AirData air = air_data(x, wind);

        const LateralOutput lat =
            mode == ControllerMode::Ratc
                ? ratc_step(cc.chi_cmd, x, air, P, G, cfg.controller, lat_gains, loop, cfg.dt)
                : aotc_step(cc.chi_cmd, x, air, P, lat_gains, cfg.controller, loop, cfg.dt);
        const LongitudinalOutput lon =
            longitudinal_holds(x, air, h_cmd, cfg.airspeed, P, lon_gains, loop, cfg.dt);

        const ControlCommand target =
            clamp_command({lat.delta_a, lon.delta_e, lat.delta_r, lon.delta_t}, P.actuators);
        applied = rate_limit(applied, target, P.actuators, cfg.dt);

        LogRow row;
        row.t = t;
        row.x = x;
        row.cmd = applied;
        row.air = air;
        row.wind = wind;
        row.beta_est = beta_estimate(air.chi, x.psi);
        row.chi_cmd = cc.chi_cmd;
        row.chi_cmd_raw = cc.chi_cmd_raw;
        row.phi_cmd = loop.phi_cmd;
        row.segment_id = cc.segment_id;
        row.kind = manager.active_segment().kind;
        row.e_lateral = manager.lateral_error(p);

        try {
            row.e_total_low = total_image_error(row.e_lateral, x.phi, cfg.h_ref[0]);
            row.e_total_high = total_image_error(row.e_lateral, x.phi, cfg.h_ref[1]);
            res.log.push_back(row);
            x = integrate_step(x, applied, env, P, cfg.dt, t);
        } catch (const SingularityError& e) {
            res.status = RunStatus::Failed;
            res.fault = e.what();
            res.fault_category = e.category();
            res.fault_time = t;
            res.fault_state = e.state;
            break;
        } catch (const IntegrationFault& e) {
            res.status = RunStatus::Failed;
            res.fault = e.what();
            res.fault_category = e.category();
            res.fault_time = t;
            res.fault_state = e.state;
            break;
        } catch (const DomainError& e) {
            res.status = RunStatus::Failed;
            res.fault = e.what();
            res.fault_category = e.category();
            res.fault_time = t;
            res.fault_state = x;
            break;
        }
    }
    res.stats = compute_stats(res.log, cfg.warmup);
    return res;
}

std::optional<StatsBundle> compute_stats(std::span<const LogRow> log, double warmup) {
    std::vector<double> lo, hi, lat, roll, beta;
    double abs_roll = 0, abs_beta = 0;
    for (const LogRow& r : log) {
        if (r.t < warmup) continue;
        lo.push_back(r.e_total_low);
        hi.push_back(r.e_total_high);
        lat.push_back(r.e_lateral);
        roll.push_back(rad2deg(r.x.phi));
        beta.push_back(rad2deg(r.beta_est));
        abs_roll += std::abs(roll.back());
        abs_beta += std::abs(beta.back());
    }
    if (lo.size() < 2) return std::nullopt;
    StatsBundle s;
    s.total_low = series_stats(lo);
    s.total_high = series_stats(hi);
    s.lateral = series_stats(lat);
    s.roll_deg = series_stats(roll);
    s.beta_deg = series_stats(beta);
    s.abs_roll_mean_deg = abs_roll / static_cast<double>(roll.size());
    s.abs_beta_mean_deg = abs_beta / static_cast<double>(beta.size());
    return s;
}

namespace {

RunResult run_job(const RunJob& job) {
    if (job.env) return run_scenario(*job.cfg, job.mode, *job.env);
    return run_scenario(*job.cfg, job.mode);
}

}  // namespace

std::vector<RunResult> run_batch_serial(std::span<const RunJob> jobs) {
    std::vector<RunResult> out;
    out.reserve(jobs.size());
    for (const RunJob& job : jobs) out.push_back(run_job(job));
    return out;
}

std::vector<RunResult> run_batch(std::span<const RunJob> jobs) {
    const auto n = static_cast<long>(jobs.size());
    std::vector<RunResult> out(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        try {
            out[i] = run_job(jobs[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::string summary_csv_header() {
    return "scenario,controller,status,mean_150,std_150,mean_450,std_450,rms_450,lat_mean,lat_std,"
           "roll_mean_deg,roll_std_deg,beta_mean_deg,beta_std_deg,abs_roll_mean_deg,"
           "abs_beta_mean_deg";
}

std::string summary_csv_row(const RunResult& r) {
    std::string line = r.scenario + "," + mode_name(r.mode) + "," + status_name(r.status);
    if (!r.stats) {
        for (int i = 0; i < 13; ++i) line += ",";
        return line;
    }
    const StatsBundle& s = *r.stats;
    for (double v : {s.total_low.mean, s.total_low.std_1sigma, s.total_high.mean,
                     s.total_high.std_1sigma, s.total_high.rms, s.lateral.mean,
                     s.lateral.std_1sigma, s.roll_deg.mean, s.roll_deg.std_1sigma,
                     s.beta_deg.mean, s.beta_deg.std_1sigma, s.abs_roll_mean_deg,
                     s.abs_beta_mean_deg}) {
        line += "," + fmt(v, 6);
    }
    return line;
}

Comparison compare_controllers(const ScenarioConfig& cfg) {
    cfg.validate();
    const auto env = std::make_shared<const Environment>(make_environment(cfg));
    const RunJob jobs[2] = {{&cfg, ControllerMode::Aotc, env}, {&cfg, ControllerMode::Ratc, env}};
    std::vector<RunResult> runs = run_batch(jobs);

    for (const RunResult& r : runs) {
        if (r.failed()) {
            std::ostringstream msg;
            msg << "comparison aborted: " << mode_name(r.mode) << " run failed at t=" << r.fault_time
                << " s: " << r.fault;
            throw SimError(r.fault_category, msg.str());
        }
        if (!r.stats) {
            throw DomainError(std::string("comparison aborted: ") + mode_name(r.mode) +
                              " run produced too few samples for statistics");
        }
    }

    Comparison c;
    c.aotc = std::move(runs[0]);
    c.ratc = std::move(runs[1]);

    const std::string lo = h_label(cfg.h_ref[0]), hi = h_label(cfg.h_ref[1]);
    std::ostringstream t;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%-12s %-5s %9s %9s %9s %9s %9s %9s %9s %9s %9s %9s %9s\n", "scenario", "ctl",
                  ("mean_" + lo).c_str(), ("std_" + lo).c_str(), ("mean_" + hi).c_str(),
                  ("std_" + hi).c_str(), ("rms_" + hi).c_str(), "lat_mean", "lat_std", "roll_mean",
                  "roll_std", "beta_mean", "beta_std");
    t << buf;
    for (const RunResult* r : {&c.aotc, &c.ratc}) {
        const StatsBundle& s = *r->stats;
        std::snprintf(buf, sizeof buf,
                      "%-12s %-5s %9.2f %9.2f %9.2f %9.2f %9.2f %9.2f %9.2f %9.2f %9.2f %9.2f %9.2f\n",
                      r->scenario.substr(0, 12).c_str(), mode_name(r->mode), s.total_low.mean,
                      s.total_low.std_1sigma, s.total_high.mean, s.total_high.std_1sigma,
                      s.total_high.rms, s.lateral.mean, s.lateral.std_1sigma, s.roll_deg.mean,
                      s.roll_deg.std_1sigma, s.beta_deg.mean, s.beta_deg.std_1sigma);
        t << buf;
    }
    const StatsBundle& a = *c.aotc.stats;
    const StatsBundle& r = *c.ratc.stats;
    t << "ratio rms_" << hi << " ratc/aotc: " << fmt(r.total_high.rms / a.total_high.rms) << "\n";
    t << "mean |roll| deg: aotc " << fmt(a.abs_roll_mean_deg) << ", ratc "
      << fmt(r.abs_roll_mean_deg) << ", ratio " << fmt(r.abs_roll_mean_deg / a.abs_roll_mean_deg)
      << "\n";
    t << "mean |beta_est| deg: aotc " << fmt(a.abs_beta_mean_deg) << ", ratc "
      << fmt(r.abs_beta_mean_deg) << "\n";
    c.table = t.str();
    c.csv = summary_csv_header() + "\n" + summary_csv_row(c.aotc) + "\n" + summary_csv_row(c.ratc) +
            "\n";
    return c;
}

std::string csv_header(const std::vector<double>& h_ref) {
    return "t,pn,pe,pd,u,v,w,phi_deg,theta_deg,psi_deg,p,q,r,delta_a_deg,delta_e_deg,delta_r_deg,"
           "delta_t,Va,beta_est_deg,chi_deg,chi_cmd_deg,chi_cmd_raw_deg,segment_id,e_lateral_m,"
           "e_total_" +
           h_label(h_ref.at(0)) + "_m,e_total_" + h_label(h_ref.at(1)) + "_m";
}

void export_csv(const RunResult& result, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out << csv_header(result.h_ref) << '\n';
    std::string line;
    for (const LogRow& r : result.log) {
        line.clear();
        const AircraftState& x = r.x;
        for (double v : {r.t, x.pn, x.pe, x.pd, x.u, x.v, x.w, rad2deg(x.phi), rad2deg(x.theta),
                         rad2deg(x.psi), x.p, x.q, x.r, rad2deg(r.cmd.delta_a),
                         rad2deg(r.cmd.delta_e), rad2deg(r.cmd.delta_r), r.cmd.delta_t, r.air.Va,
                         rad2deg(r.beta_est), rad2deg(r.air.chi), rad2deg(r.chi_cmd),
                         rad2deg(r.chi_cmd_raw)}) {
            put(line, v);
        }
        line += ',' + std::to_string(r.segment_id);
        put(line, r.e_lateral);
        put(line, r.e_total_low);
        put(line, r.e_total_high);
        out << line << '\n';
    }
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

FlightPlan figure_eight_plan(double leg, double fillet, double h_agl) {
    const double d = leg / std::sqrt(2.0);
    const std::vector<Waypoint> wps{{0, 0, h_agl},  {-d, d, h_agl},     {0, 2 * d, h_agl},
                                    {d, d, h_agl},  {0, 0, h_agl},      {-d, -d, h_agl},
                                    {0, -2 * d, h_agl}, {d, -d, h_agl}, {0, 0, h_agl}};
    return make_waypoint_plan(wps, fillet, h_agl);
}

FlightPlan rectangle_plan(double length, double width, int laps, double fillet, double h_agl) {
    // long legs run north-south, so a west-to-east wind is a crosswind on them
    std::vector<Waypoint> wps{{0, 0, h_agl}};
    for (int lap = 0; lap < laps; ++lap) {
        wps.push_back({length, 0, h_agl});
        wps.push_back({length, width, h_agl});
        wps.push_back({0, width, h_agl});
        wps.push_back({0, 0, h_agl});
    }
    // a short run-out north so the final corner is flown like the others
    wps.push_back({length / 2.0, 0, h_agl});
    return make_waypoint_plan(wps, fillet, h_agl);
}

FlightPlan circle_plan(double radius, double turns, double h_agl) {
    return make_orbit_plan("circle", 0, 0, h_agl, radius, 1, turns, h_agl);
}

FlightPlan right_angle_plan(double leg_in, double leg_out, double h_agl) {
    const std::vector<Waypoint> wps{{0, 0, h_agl}, {leg_in, 0, h_agl}, {leg_in, leg_out, h_agl}};
    return make_waypoint_plan(wps, 0.0, h_agl);
}

}  // namespace fwsim

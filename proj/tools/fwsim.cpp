// fwsim command-line front end.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fwsim/angles.hpp"
#include "fwsim/config.hpp"
#include "fwsim/scenario.hpp"

namespace {

using namespace fwsim;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;
    std::optional<std::string> slew;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "gust seed");
    cmd->add_option("--duration", o.duration, "duration cap [s]")->check(CLI::NonNegativeNumber);
    cmd->add_option("--slew", o.slew, "course-command slew limiter")
        ->check(CLI::IsMember({"on", "off"}));
}

ScenarioConfig load_with(const std::string& path, const Overrides& o) {
    ScenarioConfig cfg = load_config(path);
    if (o.seed) cfg.gust.seed = *o.seed;
    if (o.duration) cfg.duration = *o.duration;
    if (o.slew) cfg.guidance.slew_enabled = *o.slew == "on";
    cfg.validate();
    std::cerr << describe(cfg);
    return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

void print_run(const RunResult& r) {
    std::printf("%s %s: %s, %zu steps\n", r.scenario.c_str(), mode_name(r.mode),
                status_name(r.status), r.log.size());
    if (r.failed()) {
        std::printf("fault at t=%.3f s: %s\n", r.fault_time, r.fault.c_str());
    }
    if (r.stats) {
        const StatsBundle& s = *r.stats;
        std::printf("e_total@%g  mean %.2f  std %.2f  rms %.2f m\n", r.h_ref[1],
                    s.total_high.mean, s.total_high.std_1sigma, s.total_high.rms);
        std::printf("e_lateral   mean %.2f  std %.2f m\n", s.lateral.mean, s.lateral.std_1sigma);
        std::printf("roll        mean %.2f  std %.2f  mean|.| %.2f deg\n", s.roll_deg.mean,
                    s.roll_deg.std_1sigma, s.abs_roll_mean_deg);
        std::printf("beta_est    mean %.2f  std %.2f  mean|.| %.2f deg\n", s.beta_deg.mean,
                    s.beta_deg.std_1sigma, s.abs_beta_mean_deg);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-wing UAV trajectory control simulator"};
    app.require_subcommand(1);

    std::string config;
    std::string controller;  // empty: the scenario file decides
    std::string csv;
    std::string out_dir;
    double airspeed = 0;
    Overrides ov;

    auto* sim = app.add_subcommand("simulate", "run one scenario with one controller");
    sim->add_option("--config", config, "scenario file")->required();
    sim->add_option("--controller", controller)->check(CLI::IsMember({"aotc", "ratc"}));
    sim->add_option("--csv", csv, "write the time series here");
    add_overrides(sim, ov);

    auto* cmp = app.add_subcommand("compare", "run AOTC and RATC back to back");
    cmp->add_option("--config", config, "scenario file")->required();
    cmp->add_option("--out-dir", out_dir, "directory for CSVs and summary");
    add_overrides(cmp, ov);

    auto* gains = app.add_subcommand("gains", "print synthesized controller gains");
    gains->add_option("--config", config, "scenario file")->required();
    add_overrides(gains, ov);

    auto* trm = app.add_subcommand("trim", "solve straight and level trim");
    trm->add_option("--config", config, "scenario file")->required();
    trm->add_option("--airspeed", airspeed, "airspeed [m/s]")->check(CLI::PositiveNumber);
    add_overrides(trm, ov);

    CLI11_PARSE(app, argc, argv);

    try {
        const ScenarioConfig cfg = load_with(config, ov);

        if (*sim) {
            const RunResult r =
                run_scenario(cfg, controller.empty() ? cfg.controller.mode : parse_mode(controller));
            print_run(r);
            std::filesystem::path path = csv.empty() ? cfg.csv_path : std::filesystem::path(csv);
            if (!path.empty()) export_csv(r, path);
            if (r.failed()) {
                std::cerr << "error [" << category_name(r.fault_category) << "]: " << r.fault
                          << "\n";
                return static_cast<int>(r.fault_category);
            }
        } else if (*cmp) {
            const Comparison c = compare_controllers(cfg);
            std::cout << c.table;
            std::filesystem::path dir = out_dir.empty() ? cfg.out_dir : std::filesystem::path(out_dir);
            if (!dir.empty()) {
                std::error_code ec;
                std::filesystem::create_directories(dir, ec);
                if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
                export_csv(c.aotc, dir / (cfg.name + "_aotc.csv"));
                export_csv(c.ratc, dir / (cfg.name + "_ratc.csv"));
                write_text(dir / (cfg.name + "_summary.csv"), c.csv);
                write_text(dir / (cfg.name + "_summary.txt"), c.table);
            }
        } else if (*gains) {
            const GammaSet G = gamma_terms(cfg.aircraft);
            const TrimResult tp = trim(cfg.aircraft, cfg.airspeed, 0.0);
            AirData air;
            air.Va = cfg.airspeed;
            const CombinedYawCoeffs yc = combined_yaw_coeffs(cfg.aircraft, G, air);
            const RatcGains rg = ratc_gain_synthesis(yc, cfg.controller.wn_psi, cfg.controller.zeta_psi);
            const AotcGains ag = aotc_gain_synthesis(cfg.aircraft, G, cfg.airspeed, cfg.controller);
            const RollPlant rp = roll_plant(cfg.aircraft, G, cfg.airspeed);
            std::printf("airspeed      %.3f m/s\n", cfg.airspeed);
            std::printf("a_psi1        %.6f 1/s\n", yc.a_psi1);
            std::printf("a_psi2        %.6f 1/s^2\n", yc.a_psi2);
            std::printf("Cr_beta       %.6f\n", yc.Crbeta);
            std::printf("ratc kp_psi   %.6f\n", rg.kp_psi);
            std::printf("ratc kd_psi   %.6f s\n", rg.kd_psi);
            std::printf("a_phi1        %.6f 1/s\n", rp.a_phi1);
            std::printf("a_phi2        %.6f 1/s^2\n", rp.a_phi2);
            std::printf("aotc kp_phi   %.6f\n", ag.kp_phi);
            std::printf("aotc kd_phi   %.6f s\n", ag.kd_phi);
            std::printf("aotc ki_phi   %.6f 1/s\n", ag.ki_phi);
            std::printf("aotc kp_chi   %.6f\n", ag.kp_chi);
            std::printf("aotc ki_chi   %.6f 1/s\n", ag.ki_chi);
            std::printf("trim delta_r  %.4f deg\n", rad2deg(tp.command.delta_r));
        } else if (*trm) {
            const double Va = airspeed > 0 ? airspeed : cfg.airspeed;
            const TrimResult tp = trim(cfg.aircraft, Va, 0.0);
            const AirData air = air_data(tp.state, WindSample{});
            std::printf("airspeed   %.4f m/s\n", Va);
            std::printf("alpha      %.4f deg\n", rad2deg(air.alpha));
            std::printf("beta       %.4f deg\n", rad2deg(air.beta));
            std::printf("theta      %.4f deg\n", rad2deg(tp.state.theta));
            std::printf("delta_e    %.4f deg\n", rad2deg(tp.command.delta_e));
            std::printf("delta_a    %.4f deg\n", rad2deg(tp.command.delta_a));
            std::printf("delta_r    %.4f deg\n", rad2deg(tp.command.delta_r));
            std::printf("delta_t    %.4f\n", tp.command.delta_t);
            std::printf("residual   %.3e (%d iterations)\n", tp.residual, tp.iterations);
        }
    } catch (const SimError& e) {
        std::cerr << "error [" << category_name(e.category()) << "]: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

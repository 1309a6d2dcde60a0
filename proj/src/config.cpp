#include "fwsim/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "fwsim/angles.hpp"

namespace fwsim {
namespace {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

std::string trim_ws(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& where) {
    const std::string t = trim_ws(text);
    std::size_t used = 0;
    double value = 0;
    try {
        value = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != t.size() || !std::isfinite(value)) {
        throw ConfigError(where + ": expected a number, got '" + text + "'");
    }
    return value;
}

std::vector<double> parse_list(const std::string& text, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_number(item, where));
    }
    return out;
}

/// Thin reader over a parsed INI tree that tracks consumed keys so that
/// unknown (typically misspelled) keys are reported.
class IniReader {
public:
    explicit IniReader(const fs::path& path) : path_(path) {
        if (!fs::exists(path)) {
            throw ConfigError("file not found: " + path.string());
        }
        try {
            pt::read_ini(path.string(), tree_);
        } catch (const pt::ini_parser_error& e) {
            std::ostringstream msg;
            msg << "parse error in " << path.string() << " line " << e.line() << ": "
                << e.message();
            throw ConfigError(msg.str());
        }
    }

    bool has_section(const std::string& section) const {
        return tree_.get_child_optional(pt::ptree::path_type(section, '\0')).has_value();
    }

    std::vector<std::string> sections() const {
        std::vector<std::string> out;
        for (const auto& [name, _] : tree_) out.push_back(name);
        return out;
    }

    std::vector<std::string> keys(const std::string& section) const {
        std::vector<std::string> out;
        if (const auto* child = find(section)) {
            for (const auto& [name, _] : *child) out.push_back(name);
        }
        return out;
    }

    std::optional<std::string> raw(const std::string& section, const std::string& key) {
        const auto* child = find(section);
        if (!child) return std::nullopt;
        const auto it = child->find(key);
        if (it == child->not_found()) return std::nullopt;
        used_.insert(section + "." + key);
        return trim_ws(it->second.data());
    }

    double number(const std::string& section, const std::string& key, double fallback) {
        const auto v = raw(section, key);
        return v ? parse_number(*v, where(section, key)) : fallback;
    }

    double required(const std::string& section, const std::string& key) {
        const auto v = raw(section, key);
        if (!v) {
            throw ConfigError(path_.string() + ": missing required field [" + section + "] " + key);
        }
        return parse_number(*v, where(section, key));
    }

    double angle_deg(const std::string& section, const std::string& key, double fallback_rad) {
        const auto v = raw(section, key);
        return v ? deg2rad(parse_number(*v, where(section, key))) : fallback_rad;
    }

    std::string text(const std::string& section, const std::string& key,
                     const std::string& fallback) {
        const auto v = raw(section, key);
        return v ? *v : fallback;
    }

    bool flag(const std::string& section, const std::string& key, bool fallback) {
        const auto v = raw(section, key);
        if (!v) return fallback;
        if (*v == "on" || *v == "true" || *v == "1" || *v == "yes") return true;
        if (*v == "off" || *v == "false" || *v == "0" || *v == "no") return false;
        throw ConfigError(where(section, key) + ": expected on/off, got '" + *v + "'");
    }

    std::string where(const std::string& section, const std::string& key) const {
        return path_.string() + ": [" + section + "] " + key;
    }

    /// Rejects any key in the listed sections that was never read.
    void reject_unknown(const std::vector<std::string>& sections) const {
        for (const auto& s : sections) {
            for (const auto& k : keys(s)) {
                if (!used_.contains(s + "." + k)) {
                    throw ConfigError(path_.string() + ": unknown field [" + s + "] " + k);
                }
            }
        }
    }

    const fs::path& path() const { return path_; }

private:
    const pt::ptree* find(const std::string& section) const {
        const auto it = tree_.find(section);
        return it == tree_.not_found() ? nullptr : &it->second;
    }

    fs::path path_;
    pt::ptree tree_;
    std::set<std::string> used_;
};

fs::path resolve(const fs::path& base_file, const std::string& rel) {
    fs::path p(rel);
    if (p.is_relative()) {
        p = base_file.parent_path() / p;
    }
    return p.lexically_normal();
}

}  // namespace

AircraftParams load_aircraft(const fs::path& path) {
    IniReader ini(path);
    AircraftParams a;
    const std::string mp = "mass_properties", geo = "geometry", lat = "aero_lateral",
                      lon = "aero_longitudinal", prop = "propulsion", act = "actuators";
    a.mass = ini.required(mp, "mass");
    a.g = ini.number(mp, "gravity", 9.81);
    a.Ixx = ini.required(mp, "Ixx");
    a.Iyy = ini.required(mp, "Iyy");
    a.Izz = ini.required(mp, "Izz");
    a.Ixz = ini.number(mp, "Ixz", 0.0);

    a.Sw = ini.required(geo, "wing_area");
    a.bw = ini.required(geo, "wing_span");
    a.cbar = ini.required(geo, "mean_chord");
    a.rho = ini.number(geo, "air_density", 1.2682);

    a.C_l0 = ini.number(lat, "C_l0", 0);
    a.C_lbeta = ini.number(lat, "C_lbeta", 0);
    a.C_lp = ini.number(lat, "C_lp", 0);
    a.C_lr = ini.number(lat, "C_lr", 0);
    a.C_lda = ini.number(lat, "C_lda", 0);
    a.C_ldr = ini.number(lat, "C_ldr", 0);
    a.C_n0 = ini.number(lat, "C_n0", 0);
    a.C_nbeta = ini.number(lat, "C_nbeta", 0);
    a.C_np = ini.number(lat, "C_np", 0);
    a.C_nr = ini.number(lat, "C_nr", 0);
    a.C_nda = ini.number(lat, "C_nda", 0);
    a.C_ndr = ini.number(lat, "C_ndr", 0);
    a.C_Y0 = ini.number(lat, "C_Y0", 0);
    a.C_Ybeta = ini.number(lat, "C_Ybeta", 0);
    a.C_Yp = ini.number(lat, "C_Yp", 0);
    a.C_Yr = ini.number(lat, "C_Yr", 0);
    a.C_Yda = ini.number(lat, "C_Yda", 0);
    a.C_Ydr = ini.number(lat, "C_Ydr", 0);

    a.C_L0 = ini.number(lon, "C_L0", 0);
    a.C_Lalpha = ini.number(lon, "C_Lalpha", 0);
    a.C_Lq = ini.number(lon, "C_Lq", 0);
    a.C_Lde = ini.number(lon, "C_Lde", 0);
    a.C_D0 = ini.number(lon, "C_D0", 0);
    a.C_Dalpha = ini.number(lon, "C_Dalpha", 0);
    a.C_m0 = ini.number(lon, "C_m0", 0);
    a.C_malpha = ini.number(lon, "C_malpha", 0);
    a.C_mq = ini.number(lon, "C_mq", 0);
    a.C_mde = ini.number(lon, "C_mde", 0);

    a.static_thrust = ini.number(prop, "static_thrust", a.static_thrust);
    a.zero_thrust_speed = ini.number(prop, "zero_thrust_speed", a.zero_thrust_speed);

    auto& lim = a.actuators;
    lim.aileron_max = ini.angle_deg(act, "aileron_limit_deg", lim.aileron_max);
    lim.elevator_max = ini.angle_deg(act, "elevator_limit_deg", lim.elevator_max);
    lim.rudder_max = ini.angle_deg(act, "rudder_limit_deg", lim.rudder_max);
    lim.aileron_rate = ini.angle_deg(act, "aileron_rate_deg_s", lim.aileron_rate);
    lim.elevator_rate = ini.angle_deg(act, "elevator_rate_deg_s", lim.elevator_rate);
    lim.rudder_rate = ini.angle_deg(act, "rudder_rate_deg_s", lim.rudder_rate);

    ini.reject_unknown({mp, geo, lat, lon, prop, act});
    try {
        a.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return a;
}

FlightPlan load_plan(const fs::path& path) {
    IniReader ini(path);
    const std::string kind = ini.text("plan", "kind", "waypoints");
    const double h_agl = ini.number("plan", "h_agl", 150.0);

    if (kind == "orbit") {
        std::vector<std::string> orbit_sections;
        for (const auto& s : ini.sections()) {
            if (s.starts_with("orbit:")) orbit_sections.push_back(s);
        }
        if (orbit_sections.size() != 1) {
            throw ConfigError(path.string() + ": orbit plan needs exactly one [orbit:<name>] section");
        }
        const std::string sec = orbit_sections.front();
        const std::string name = sec.substr(6);
        const double cn = ini.number(sec, "center_n", 0.0);
        const double ce = ini.number(sec, "center_e", 0.0);
        const double alt = ini.number(sec, "alt", h_agl);
        const double radius = ini.required(sec, "radius");
        const std::string dir = ini.text(sec, "direction", "cw");
        const double turns = ini.number(sec, "turns", 1.0);
        int lambda = 0;
        if (dir == "cw") lambda = 1;
        else if (dir == "ccw") lambda = -1;
        else throw ConfigError(ini.where(sec, "direction") + ": expected cw or ccw");
        ini.reject_unknown({"plan", sec});
        try {
            return make_orbit_plan(name, cn, ce, alt, radius, lambda, turns, h_agl);
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }
    if (kind != "waypoints") {
        throw ConfigError(ini.where("plan", "kind") + ": expected waypoints or orbit");
    }

    const double fillet = ini.number("plan", "fillet_radius", 0.0);
    std::map<int, Waypoint> indexed;
    for (const auto& key : ini.keys("plan")) {
        if (!key.starts_with("wp")) continue;
        const std::string idx = key.substr(2);
        if (idx.empty() || !std::all_of(idx.begin(), idx.end(), ::isdigit)) {
            throw ConfigError(ini.where("plan", key) + ": waypoint keys are wp0, wp1, ...");
        }
        const auto vals = parse_list(*ini.raw("plan", key), ini.where("plan", key));
        if (vals.size() != 3) {
            throw ConfigError(ini.where("plan", key) + ": expected 'north, east, alt'");
        }
        indexed[std::stoi(idx)] = {vals[0], vals[1], vals[2]};
    }
    std::vector<Waypoint> wps;
    for (const auto& [i, wp] : indexed) {
        if (i != static_cast<int>(wps.size())) {
            throw ConfigError(path.string() + ": waypoint indices must run wp0, wp1, ... without gaps");
        }
        wps.push_back(wp);
    }
    ini.reject_unknown({"plan"});
    try {
        return make_waypoint_plan(std::move(wps), fillet, h_agl);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void ScenarioConfig::validate() const {
    auto require = [this](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("scenario '" + name + "': " + what);
    };
    require(dt > 0, "dt must be > 0");
    require(duration >= 0, "duration cap must be >= 0");
    require(airspeed > 0, "airspeed must be > 0");
    require(warmup >= 0, "warmup must be >= 0");
    require(h_ref.size() == 2 && h_ref[0] > 0 && h_ref[1] > 0, "h_ref needs two positive values");
    require(controller.wn_psi > 0 && controller.zeta_psi > 0, "wn_psi and zeta_psi must be > 0");
    require(controller.wn_phi > 0 && controller.zeta_phi > 0, "wn_phi and zeta_phi must be > 0");
    require(controller.separation >= 1, "separation must be >= 1");
    require(controller.wn_chi > 0 && controller.wn_chi <= controller.wn_phi / controller.separation,
            "wn_chi must be in (0, wn_phi / separation]");
    require(controller.bank_limit > 0 && controller.bank_limit < kPi / 2,
            "bank limit must be in (0, 90) deg");
    require(guidance.k_path > 0, "k_path must be > 0");
    require(guidance.chi_inf > 0 && guidance.chi_inf <= kPi / 2,
            "intercept angle must be in (0, 90] deg");
    require(guidance.slew_rate > 0, "slew rate must be > 0");
    require(!gust.enabled || (gust.sigma >= 0 && gust.tau > 0), "gust sigma >= 0 and tau > 0");
    require(std::isfinite(Wn) && std::isfinite(We) && std::isfinite(Wd), "wind must be finite");
    aircraft.validate();
    require(!plan.segments.empty(), "flight plan has no segments");
}

ScenarioConfig load_config(const fs::path& path) {
    IniReader ini(path);
    ScenarioConfig cfg;
    cfg.source = path;
    const std::string sc = "scenario", env = "environment", ctl = "controller", gd = "guidance",
                      out = "output";
    cfg.name = ini.text(sc, "name", path.stem().string());
    const auto aircraft = ini.raw(sc, "aircraft");
    const auto plan = ini.raw(sc, "plan");
    if (!aircraft) throw ConfigError(path.string() + ": missing required field [scenario] aircraft");
    if (!plan) throw ConfigError(path.string() + ": missing required field [scenario] plan");
    cfg.aircraft_path = resolve(path, *aircraft);
    cfg.plan_path = resolve(path, *plan);
    cfg.dt = ini.number(sc, "dt", cfg.dt);
    cfg.duration = ini.number(sc, "duration", cfg.duration);
    cfg.airspeed = ini.number(sc, "airspeed", cfg.airspeed);
    cfg.warmup = ini.number(sc, "warmup", cfg.warmup);
    if (const auto h = ini.raw(sc, "h_ref")) {
        cfg.h_ref = parse_list(*h, ini.where(sc, "h_ref"));
    }

    cfg.Wn = ini.number(env, "wind_n", 0.0);
    cfg.We = ini.number(env, "wind_e", 0.0);
    cfg.Wd = ini.number(env, "wind_d", 0.0);
    cfg.gust.enabled = ini.flag(env, "gust", false);
    cfg.gust.seed = static_cast<std::uint64_t>(ini.number(env, "seed", 1.0));
    cfg.gust.sigma = ini.number(env, "gust_sigma", cfg.gust.sigma);
    cfg.gust.tau = ini.number(env, "gust_tau", cfg.gust.tau);

    auto& c = cfg.controller;
    c.mode = parse_mode(ini.text(ctl, "mode", mode_name(c.mode)));
    c.wn_psi = ini.number(ctl, "wn_psi", c.wn_psi);
    c.zeta_psi = ini.number(ctl, "zeta_psi", c.zeta_psi);
    c.wn_phi = ini.number(ctl, "wn_phi", c.wn_phi);
    c.zeta_phi = ini.number(ctl, "zeta_phi", c.zeta_phi);
    c.ki_phi = ini.number(ctl, "ki_phi", c.ki_phi);
    c.separation = ini.number(ctl, "separation", c.separation);
    c.wn_chi = ini.number(ctl, "wn_chi", c.wn_chi);
    c.zeta_chi = ini.number(ctl, "zeta_chi", c.zeta_chi);
    c.bank_limit = ini.angle_deg(ctl, "bank_limit_deg", c.bank_limit);
    c.wn_theta = ini.number(ctl, "wn_theta", c.wn_theta);
    c.zeta_theta = ini.number(ctl, "zeta_theta", c.zeta_theta);
    c.wn_h = ini.number(ctl, "wn_h", c.wn_h);
    c.zeta_h = ini.number(ctl, "zeta_h", c.zeta_h);
    c.kp_V = ini.number(ctl, "kp_V", c.kp_V);
    c.ki_V = ini.number(ctl, "ki_V", c.ki_V);

    auto& g = cfg.guidance;
    g.k_path = ini.number(gd, "k_path", g.k_path);
    g.chi_inf = ini.angle_deg(gd, "chi_inf_deg", g.chi_inf);
    g.k_orbit = ini.number(gd, "k_orbit", g.k_orbit);
    g.slew_enabled = ini.flag(gd, "slew", g.slew_enabled);
    g.slew_rate = ini.angle_deg(gd, "slew_rate_deg_s", g.slew_rate);

    if (const auto csv = ini.raw(out, "csv")) cfg.csv_path = resolve(path, *csv);
    if (const auto dir = ini.raw(out, "out_dir")) cfg.out_dir = resolve(path, *dir);

    ini.reject_unknown({sc, env, ctl, gd, out});

    cfg.aircraft = load_aircraft(cfg.aircraft_path);
    cfg.plan = load_plan(cfg.plan_path);
    cfg.validate();
    return cfg;
}

std::string describe(const ScenarioConfig& c) {
    std::ostringstream o;
    o << "scenario        " << c.name << "\n"
      << "aircraft        " << c.aircraft_path.string() << "\n"
      << "plan            " << c.plan_path.string() << " (" << c.plan.segments.size()
      << " segments, fillet " << c.plan.fillet_radius << " m, h_agl " << c.plan.h_agl << " m)\n"
      << "dt              " << c.dt << " s\n"
      << "duration cap    " << c.duration << " s\n"
      << "airspeed        " << c.airspeed << " m/s\n"
      << "warmup          " << c.warmup << " s\n"
      << "h_ref           " << c.h_ref.at(0) << ", " << c.h_ref.at(1) << " m\n"
      << "wind (n,e,d)    " << c.Wn << ", " << c.We << ", " << c.Wd << " m/s\n"
      << "gust            " << (c.gust.enabled ? "on" : "off") << " (seed " << c.gust.seed
      << ", sigma " << c.gust.sigma << " m/s, tau " << c.gust.tau << " s)\n"
      << "controller      " << mode_name(c.controller.mode) << "\n"
      << "  wn_psi/zeta   " << c.controller.wn_psi << " / " << c.controller.zeta_psi << "\n"
      << "  wn_phi/zeta   " << c.controller.wn_phi << " / " << c.controller.zeta_phi << "\n"
      << "  ki_phi        " << c.controller.ki_phi << "\n"
      << "  separation    " << c.controller.separation << "\n"
      << "  wn_chi/zeta   " << c.controller.wn_chi << " / " << c.controller.zeta_chi << "\n"
      << "  bank limit    " << rad2deg(c.controller.bank_limit) << " deg\n"
      << "guidance        k_path " << c.guidance.k_path << ", chi_inf "
      << rad2deg(c.guidance.chi_inf) << " deg, k_orbit " << c.guidance.k_orbit << "\n"
      << "slew limiter    " << (c.guidance.slew_enabled ? "on" : "off") << " at "
      << rad2deg(c.guidance.slew_rate) << " deg/s\n";
    return o.str();
}

}  // namespace fwsim

#include "fwsim/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fwsim/angles.hpp"

namespace fwsim {
namespace {

constexpr double kCollinearTol = 1e-9;

struct Vec2 {
    double n = 0, e = 0;
};

Vec2 unit_between(const Waypoint& a, const Waypoint& b) {
    const double dn = b.north - a.north, de = b.east - a.east;
    const double len = std::hypot(dn, de);
    return {dn / len, de / len};
}

}  // namespace

double PathSegment::course() const { return std::atan2(dir_e, dir_n); }

double FlightPlan::altitude() const {
    if (!waypoints.empty()) {
        return waypoints.front().alt;
    }
    if (!segments.empty()) {
        return -segments.front().origin.d;
    }
    return h_agl;
}

FlightPlan make_waypoint_plan(std::vector<Waypoint> wps, double fillet_radius, double h_agl) {
    if (wps.size() < 2) {
        throw ConfigError("flight plan needs at least 2 waypoints");
    }
    if (fillet_radius < 0) {
        throw ConfigError("flight plan fillet radius must be >= 0");
    }
    if (!(h_agl > 0)) {
        throw ConfigError("flight plan nominal AGL must be > 0");
    }
    const std::size_t n_legs = wps.size() - 1;
    std::vector<Vec2> q(n_legs);
    std::vector<double> leg_len(n_legs);
    for (std::size_t i = 0; i < n_legs; ++i) {
        leg_len[i] = std::hypot(wps[i + 1].north - wps[i].north, wps[i + 1].east - wps[i].east);
        if (leg_len[i] < 1e-6) {
            std::ostringstream msg;
            msg << "flight plan waypoints " << i << " and " << i + 1 << " coincide";
            throw ConfigError(msg.str());
        }
        q[i] = unit_between(wps[i], wps[i + 1]);
    }

    // Tangent distance from each interior corner to the fillet tangent points.
    std::vector<double> tangent(wps.size(), 0.0);
    std::vector<double> corner_angle(wps.size(), kPi);
    for (std::size_t i = 1; i + 1 < wps.size(); ++i) {
        const double dot = std::clamp(-(q[i - 1].n * q[i].n + q[i - 1].e * q[i].e), -1.0, 1.0);
        corner_angle[i] = std::acos(dot);
        if (corner_angle[i] < 1e-6) {
            std::ostringstream msg;
            msg << "flight plan reverses direction at waypoint " << i;
            throw ConfigError(msg.str());
        }
        if (fillet_radius > 0 && corner_angle[i] < kPi - kCollinearTol) {
            tangent[i] = fillet_radius / std::tan(corner_angle[i] / 2.0);
        }
    }
    for (std::size_t i = 0; i < n_legs; ++i) {
        if (tangent[i] + tangent[i + 1] > leg_len[i] + 1e-9) {
            std::ostringstream msg;
            msg << "fillet radius " << fillet_radius << " m does not fit leg " << i << " ("
                << leg_len[i] << " m)";
            throw ConfigError(msg.str());
        }
    }

    FlightPlan plan;
    plan.fillet_radius = fillet_radius;
    plan.h_agl = h_agl;
    for (std::size_t i = 0; i < n_legs; ++i) {
        PathSegment line;
        line.kind = SegmentKind::Line;
        line.name = "leg" + std::to_string(i);
        line.origin = {wps[i].north, wps[i].east, -wps[i].alt};
        line.dir_n = q[i].n;
        line.dir_e = q[i].e;
        line.fillet_radius = tangent[i + 1] > 0 ? fillet_radius : 0.0;
        const Waypoint& end = wps[i + 1];
        if (i + 1 == n_legs) {
            line.exit = HalfPlane{end.north, end.east, q[i].n, q[i].e};
        } else if (tangent[i + 1] > 0) {
            line.exit = HalfPlane{end.north - tangent[i + 1] * q[i].n,
                                  end.east - tangent[i + 1] * q[i].e, q[i].n, q[i].e};
        } else {
            double bn = q[i].n + q[i + 1].n, be = q[i].e + q[i + 1].e;
            const double len = std::hypot(bn, be);
            bn /= len;
            be /= len;
            line.exit = HalfPlane{end.north, end.east, bn, be};
        }
        plan.segments.push_back(line);

        if (i + 1 < n_legs && tangent[i + 1] > 0) {
            const std::size_t c = i + 1;
            const Vec2 qa = q[i], qb = q[i + 1];
            double dn = qa.n - qb.n, de = qa.e - qb.e;
            const double dl = std::hypot(dn, de);
            dn /= dl;
            de /= dl;
            const double offset = fillet_radius / std::sin(corner_angle[c] / 2.0);
            PathSegment arc;
            arc.kind = SegmentKind::Orbit;
            arc.name = "fillet" + std::to_string(c);
            arc.cn = wps[c].north - offset * dn;
            arc.ce = wps[c].east - offset * de;
            arc.origin = {arc.cn, arc.ce, -wps[c].alt};
            arc.rd = fillet_radius;
            arc.lambda = (qa.n * qb.e - qa.e * qb.n) >= 0 ? 1 : -1;
            arc.exit = HalfPlane{wps[c].north + tangent[c] * qb.n, wps[c].east + tangent[c] * qb.e,
                                 qb.n, qb.e};
            arc.fillet_radius = fillet_radius;
            plan.segments.push_back(arc);
        }
    }
    plan.waypoints = std::move(wps);
    return plan;
}

FlightPlan make_orbit_plan(const std::string& name, double cn, double ce, double alt, double rd,
                           int lambda, double turns, double h_agl) {
    if (!(rd > 0)) {
        std::ostringstream msg;
        msg << "orbit '" << name << "': radius must be > 0 (got " << rd << ")";
        throw ConfigError(msg.str());
    }
    if (lambda != 1 && lambda != -1) {
        throw ConfigError("orbit '" + name + "': direction must be +1 (cw) or -1 (ccw)");
    }
    if (!(turns > 0)) {
        throw ConfigError("orbit '" + name + "': turns must be > 0");
    }
    if (!(h_agl > 0)) {
        throw ConfigError("flight plan nominal AGL must be > 0");
    }
    FlightPlan plan;
    plan.h_agl = h_agl;
    PathSegment seg;
    seg.kind = SegmentKind::Orbit;
    seg.name = name;
    seg.cn = cn;
    seg.ce = ce;
    seg.origin = {cn, ce, -alt};
    seg.rd = rd;
    seg.lambda = lambda;
    seg.turns = turns;
    plan.segments.push_back(seg);
    return plan;
}

LineError line_error(const Ned& p, const PathSegment& seg) {
    const double dn = p.n - seg.origin.n, de = p.e - seg.origin.e, dd = p.d - seg.origin.d;
    const double c = seg.dir_n, s = seg.dir_e;  // cos/sin of the path course
    return {c * dn + s * de, -s * dn + c * de, dd};
}

double orbit_error(const Ned& p, const PathSegment& seg) {
    const double dist = std::hypot(p.n - seg.cn, p.e - seg.ce);
    return -static_cast<double>(seg.lambda) * (seg.rd - dist);
}

double course_command_line(double e_py, const PathSegment& seg, const GuidanceParams& gp) {
    const double correction = std::clamp(gp.k_path * e_py, -gp.chi_inf, gp.chi_inf);
    return wrap_pi(seg.course() - correction);
}

double course_command_orbit(const Ned& p, const PathSegment& seg, const GuidanceParams& gp) {
    const double dn = p.n - seg.cn, de = p.e - seg.ce;
    const double dist = std::hypot(dn, de);
    if (dist == 0.0) {
        throw DomainError("course_command_orbit: position is at the orbit center");
    }
    const double bearing = std::atan2(de, dn);
    const double lam = static_cast<double>(seg.lambda);
    return wrap_pi(bearing + lam * (kPi / 2.0 + std::atan(gp.k_orbit * (dist - seg.rd) / seg.rd)));
}

double slew_limit(double prev_cmd, double raw_cmd, double max_rate, double dt) {
    const double step = angle_diff(raw_cmd, prev_cmd);
    const double max_step = max_rate * dt;
    if (std::abs(step) <= max_step) {
        return wrap_pi(raw_cmd);
    }
    return wrap_pi(prev_cmd + std::copysign(max_step, step));
}

PathManager::PathManager(const FlightPlan& plan, GuidanceParams params)
    : plan_(plan), params_(params) {
    if (plan_.segments.empty()) {
        throw ConfigError("flight plan has no segments");
    }
}

double PathManager::lateral_error(const Ned& p) const {
    const PathSegment& seg = active_segment();
    return seg.kind == SegmentKind::Line ? line_error(p, seg).e_py : orbit_error(p, seg);
}

CourseCommand PathManager::step(const Ned& p, double dt) {
    while (!complete_) {
        const PathSegment& seg = plan_.segments[index_];
        bool done = false;
        if (seg.exit) {
            done = seg.exit->crossed(p.n, p.e);
        } else if (seg.turns > 0) {
            const double bearing = std::atan2(p.e - seg.ce, p.n - seg.cn);
            if (prev_bearing_) {
                swept_ += seg.lambda * angle_diff(bearing, *prev_bearing_);
            }
            prev_bearing_ = bearing;
            done = swept_ >= kTwoPi * seg.turns;
        }
        if (!done) {
            break;
        }
        if (index_ + 1 < plan_.segments.size()) {
            ++index_;
            prev_bearing_.reset();
            swept_ = 0;
        } else {
            complete_ = true;
        }
    }

    const PathSegment& seg = plan_.segments[index_];
    CourseCommand out;
    out.segment_id = index_;
    out.plan_complete = complete_;
    out.chi_cmd_raw = seg.kind == SegmentKind::Line
                          ? course_command_line(line_error(p, seg).e_py, seg, params_)
                          : course_command_orbit(p, seg, params_);
    if (params_.slew_enabled && prev_cmd_) {
        out.chi_cmd = slew_limit(*prev_cmd_, out.chi_cmd_raw, params_.slew_rate, dt);
    } else {
        out.chi_cmd = out.chi_cmd_raw;
    }
    prev_cmd_ = out.chi_cmd;
    return out;
}

}  // namespace fwsim

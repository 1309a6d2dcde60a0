#pragma once

// Flight plans, path errors, course-command laws, and fillet path management.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fwsim/angles.hpp"
#include "fwsim/errors.hpp"

namespace fwsim {

struct Ned {
    double n = 0, e = 0, d = 0;
};

struct Waypoint {
    double north = 0, east = 0, alt = 0;  // alt positive up [m]
};

enum class SegmentKind { Line, Orbit };

/// Half-plane {x : (x - point) . normal >= 0}; crossing it ends a segment.
struct HalfPlane {
    double n = 0, e = 0;
    double normal_n = 0, normal_e = 0;

    bool crossed(double pn, double pe) const {
        return (pn - n) * normal_n + (pe - e) * normal_e >= 0.0;
    }
};

struct PathSegment {
    SegmentKind kind = SegmentKind::Line;
    std::string name;
    // line
    Ned origin;
    double dir_n = 1, dir_e = 0;  // unit horizontal direction
    // orbit
    double cn = 0, ce = 0;
    double rd = 0;
    int lambda = 1;  // +1 clockwise, -1 counterclockwise
    // exit condition: half-plane, or a number of full turns for stand-alone orbits
    std::optional<HalfPlane> exit;
    double turns = 0;
    double fillet_radius = 0;  // fillet radius used at this segment's exit corner

    double course() const;  // line course [rad]
};

struct FlightPlan {
    std::vector<Waypoint> waypoints;
    std::vector<PathSegment> segments;
    double fillet_radius = 0;
    double h_agl = 150.0;  // nominal altitude above ground [m]

    /// Commanded altitude (positive up) of the plan.
    double altitude() const;
};

/// Lines between consecutive waypoints, with a circular fillet inserted at every
/// non-collinear interior corner when fillet_radius > 0. Throws ConfigError on an
/// invalid plan (fewer than two waypoints, coincident waypoints, fillet not fitting).
FlightPlan make_waypoint_plan(std::vector<Waypoint> waypoints, double fillet_radius, double h_agl);

/// A single orbit flown for `turns` revolutions.
FlightPlan make_orbit_plan(const std::string& name, double cn, double ce, double alt, double rd,
                           int lambda, double turns, double h_agl);

struct LineError {
    double e_px = 0, e_py = 0, e_pz = 0;
};

LineError line_error(const Ned& p, const PathSegment& seg);
/// -lambda * (rd - distance to center); positive out the right wing.
double orbit_error(const Ned& p, const PathSegment& seg);

struct GuidanceParams {
    double k_path = 0.02;          // cross-track gain [rad/m]
    double chi_inf = deg2rad(45);   // intercept angle cap [rad]
    double k_orbit = 2.0;          // orbit capture gain [-]
    bool slew_enabled = true;
    double slew_rate = deg2rad(30);  // [rad/s]
};

double course_command_line(double e_py, const PathSegment& seg, const GuidanceParams& gp);
/// Throws DomainError when p coincides with the orbit center.
double course_command_orbit(const Ned& p, const PathSegment& seg, const GuidanceParams& gp);

/// Shortest-path step from prev_cmd toward raw_cmd, at most max_rate*dt.
double slew_limit(double prev_cmd, double raw_cmd, double max_rate, double dt);

struct CourseCommand {
    double chi_cmd = 0;
    double chi_cmd_raw = 0;
    std::size_t segment_id = 0;
    bool plan_complete = false;
};

/// Segment switching plus course-command generation for one run. The active
/// segment index never decreases.
class PathManager {
public:
    PathManager(const FlightPlan& plan, GuidanceParams params);

    CourseCommand step(const Ned& p, double dt);

    const PathSegment& active_segment() const { return plan_.segments[index_]; }
    std::size_t active_index() const { return index_; }
    bool complete() const { return complete_; }
    /// Signed lateral error against the active segment (e_py or e_orbit).
    double lateral_error(const Ned& p) const;

private:
    FlightPlan plan_;
    GuidanceParams params_;
    std::size_t index_ = 0;
    bool complete_ = false;
    std::optional<double> prev_cmd_;
    std::optional<double> prev_bearing_;
    double swept_ = 0;
};

}  // namespace fwsim

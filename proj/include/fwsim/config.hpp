#pragma once

// INI-style configuration files: aircraft parameters, flight plans, scenarios.
// Angles in every file are degrees; they are converted to radians at load.

#include <filesystem>
#include <string>
#include <vector>

#include "fwsim/control.hpp"
#include "fwsim/dynamics.hpp"
#include "fwsim/guidance.hpp"

namespace fwsim {

struct ScenarioConfig {
    std::string name = "scenario";
    std::filesystem::path source;  // file this config was loaded from (may be empty)
    std::filesystem::path aircraft_path;
    std::filesystem::path plan_path;

    AircraftParams aircraft;
    FlightPlan plan;

    double Wn = 0, We = 0, Wd = 0;
    GustSettings gust;

    ControllerSettings controller;
    GuidanceParams guidance;

    double dt = 0.01;
    double duration = 600.0;  // cap [s]
    double airspeed = 20.0;   // commanded and trim airspeed [m/s]
    double warmup = 5.0;      // excluded from statistics [s]
    std::vector<double> h_ref{150.0, 450.0};

    std::filesystem::path csv_path;
    std::filesystem::path out_dir;

    /// Throws ConfigError naming the violated invariant.
    void validate() const;
};

AircraftParams load_aircraft(const std::filesystem::path& path);
FlightPlan load_plan(const std::filesystem::path& path);
/// Loads a scenario file plus the aircraft and plan files it references
/// (relative paths resolve against the scenario file's directory).
ScenarioConfig load_config(const std::filesystem::path& path);

/// Human-readable dump of the effective configuration, defaults included.
std::string describe(const ScenarioConfig& cfg);

}  // namespace fwsim

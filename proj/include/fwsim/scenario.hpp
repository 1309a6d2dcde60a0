#pragma once

// Closed-loop scenario execution, the AOTC/RATC comparison harness, batch
// execution, and CSV / summary export.

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fwsim/config.hpp"
#include "fwsim/control.hpp"
#include "fwsim/metrics.hpp"

namespace fwsim {

/// One logged control step. Commands are the values actually applied.
struct LogRow {
    double t = 0;
    AircraftState x;
    ControlCommand cmd;
    AirData air;
    WindSample wind;
    double beta_est = 0;
    double chi_cmd = 0;
    double chi_cmd_raw = 0;
    double phi_cmd = 0;
    std::size_t segment_id = 0;
    SegmentKind kind = SegmentKind::Line;
    double e_lateral = 0;
    double e_total_low = 0;   // at h_ref[0]
    double e_total_high = 0;  // at h_ref[1]
};

struct StatsBundle {
    ErrorStats total_low;    // e_total at h_ref[0]
    ErrorStats total_high;   // e_total at h_ref[1]
    ErrorStats lateral;      // e_lateral
    ErrorStats roll_deg;     // phi in degrees (signed)
    ErrorStats beta_deg;     // beta_est in degrees (signed)
    double abs_roll_mean_deg = 0;
    double abs_beta_mean_deg = 0;
};

enum class RunStatus { Completed, DurationCap, Failed };
const char* status_name(RunStatus s);

struct RunResult {
    std::string scenario;
    ControllerMode mode = ControllerMode::Ratc;
    double dt = 0.01;
    std::vector<double> h_ref{150.0, 450.0};
    std::vector<LogRow> log;
    RunStatus status = RunStatus::DurationCap;
    std::optional<StatsBundle> stats;  // absent when too few post-warmup samples

    // fault details when status == Failed
    std::string fault;
    ErrorCategory fault_category = ErrorCategory::Integration;
    double fault_time = 0;
    AircraftState fault_state;

    bool complete() const { return status == RunStatus::Completed; }
    bool failed() const { return status == RunStatus::Failed; }
};

/// Constant wind plus the (optional) gust realization described by cfg.
Environment make_environment(const ScenarioConfig& cfg);

/// Initial state: trimmed at cfg.airspeed, on the start of the plan, crabbed
/// into the wind so that the ground track follows the first segment.
AircraftState initial_state(const ScenarioConfig& cfg, const TrimResult& trim_point,
                            const Environment& env);

/// Fault-free runs end in Completed or DurationCap; dynamics faults end in Failed.
/// Configuration and trim problems throw.
RunResult run_scenario(const ScenarioConfig& cfg, ControllerMode mode);
RunResult run_scenario(const ScenarioConfig& cfg, ControllerMode mode, const Environment& env);

/// Statistics over rows with t >= warmup. nullopt when fewer than two samples remain.
std::optional<StatsBundle> compute_stats(std::span<const LogRow> log, double warmup);

struct RunJob {
    const ScenarioConfig* cfg = nullptr;
    ControllerMode mode = ControllerMode::Ratc;
    std::shared_ptr<const Environment> env;  // null: built from cfg
};

/// Independent runs in parallel (OpenMP). Results are in job order and
/// identical to run_batch_serial.
std::vector<RunResult> run_batch(std::span<const RunJob> jobs);
std::vector<RunResult> run_batch_serial(std::span<const RunJob> jobs);

struct Comparison {
    RunResult aotc;
    RunResult ratc;
    std::string table;  // plain text, rows + ratio lines
    std::string csv;    // machine-readable rows
};

/// Both controllers on one shared environment realization. Throws the failing
/// run's fault (as SimError) if either run fails.
Comparison compare_controllers(const ScenarioConfig& cfg);

std::string summary_csv_header();
std::string summary_csv_row(const RunResult& r);

void export_csv(const RunResult& result, const std::filesystem::path& path);
std::string csv_header(const std::vector<double>& h_ref);

/// Built-in plan shapes used by the bundled scenarios and the acceptance runs.
FlightPlan figure_eight_plan(double leg = 400.0, double fillet = 100.0, double h_agl = 150.0);
FlightPlan rectangle_plan(double length = 800.0, double width = 400.0, int laps = 2,
                          double fillet = 100.0, double h_agl = 150.0);
FlightPlan circle_plan(double radius = 100.0, double turns = 2.0, double h_agl = 150.0);
/// Straight leg followed by a 90 degree right turn without fillet.
FlightPlan right_angle_plan(double leg_in = 300.0, double leg_out = 600.0, double h_agl = 150.0);

}  // namespace fwsim

#pragma once

// Body-fixed camera image error, sideslip estimation, and summary statistics.

#include <cstddef>
#include <span>

#include "fwsim/guidance.hpp"

namespace fwsim {

struct ImageErrorRecord {
    double t = 0;
    double e_lateral = 0;  // m
    double e_roll = 0;     // h_ref * tan(phi), m
    double e_total = 0;    // m
    double h_ref = 0;      // m AGL
    double phi = 0;        // rad
    double beta_est = 0;   // rad
    std::size_t segment_id = 0;
};

/// Population statistics (divide by N), so rms^2 = mean^2 + std^2.
struct ErrorStats {
    double mean = 0;
    double std_1sigma = 0;
    double rms = 0;
    std::size_t count = 0;
};

/// e_lateral + h_ref * tan(phi). Throws DomainError for |phi| >= pi/2.
double total_image_error(double e_lateral, double phi, double h_ref);

ImageErrorRecord make_image_record(double t, double e_lateral, double phi, double h_ref,
                                   double beta_est, std::size_t segment_id);

/// The two lateral error sources never coexist: e_py on lines, e_orbit on orbits.
double lateral_error_select(double line_err, double orbit_err, SegmentKind active_kind);

/// Wrapped course-minus-heading difference.
double beta_estimate(double chi, double psi);

/// Throws DomainError when fewer than two samples are given.
ErrorStats series_stats(std::span<const double> values);

}  // namespace fwsim

#include "fwsim/metrics.hpp"

#include <cmath>
#include <sstream>

#include "fwsim/angles.hpp"

namespace fwsim {

double total_image_error(double e_lateral, double phi, double h_ref) {
    if (!(std::abs(phi) < kPi / 2.0)) {
        std::ostringstream msg;
        msg << "total_image_error: |phi| must be < 90 deg (got " << rad2deg(phi) << " deg)";
        throw DomainError(msg.str());
    }
    return e_lateral + h_ref * std::tan(phi);
}

ImageErrorRecord make_image_record(double t, double e_lateral, double phi, double h_ref,
                                   double beta_est, std::size_t segment_id) {
    ImageErrorRecord rec;
    rec.t = t;
    rec.e_lateral = e_lateral;
    rec.e_total = total_image_error(e_lateral, phi, h_ref);
    rec.e_roll = h_ref * std::tan(phi);
    rec.h_ref = h_ref;
    rec.phi = phi;
    rec.beta_est = beta_est;
    rec.segment_id = segment_id;
    return rec;
}

double lateral_error_select(double line_err, double orbit_err, SegmentKind active_kind) {
    return active_kind == SegmentKind::Line ? line_err : orbit_err;
}

double beta_estimate(double chi, double psi) { return angle_diff(chi, psi); }

ErrorStats series_stats(std::span<const double> values) {
    if (values.size() < 2) {
        throw DomainError("series_stats: need at least 2 samples");
    }
    const auto n = static_cast<double>(values.size());
    double sum = 0, sum_sq = 0;
    for (double x : values) {
        sum += x;
        sum_sq += x * x;
    }
    ErrorStats s;
    s.count = values.size();
    s.mean = sum / n;
    double var = 0;
    for (double x : values) {
        var += (x - s.mean) * (x - s.mean);
    }
    s.std_1sigma = std::sqrt(var / n);
    s.rms = std::sqrt(sum_sq / n);
    return s;
}

}  // namespace fwsim

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "fwsim/dynamics.hpp"

namespace fwsim {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kTolerance = 1e-6;

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Unknowns: alpha, beta, delta_e, delta_t, delta_a, delta_r.
struct TrimPoint {
    AircraftState state;
    ControlCommand command;
};

TrimPoint build(const Vec6& x, double Va, double gamma) {
    const double alpha = x[0], beta = x[1];
    TrimPoint tp;
    tp.state.u = Va * std::cos(alpha) * std::cos(beta);
    tp.state.v = Va * std::sin(beta);
    tp.state.w = Va * std::sin(alpha) * std::cos(beta);
    tp.state.theta = alpha + std::asin(std::sin(gamma) / std::cos(beta));
    tp.command = {x[4], x[2], x[5], x[3]};
    return tp;
}

Vec6 residual(const Vec6& x, const AircraftParams& params, const GammaSet& G, double Va,
              double gamma) {
    const TrimPoint tp = build(x, Va, gamma);
    const AircraftState d = state_derivative(
        tp.state, aero_forces_moments(tp.state, tp.command, params), params, G, WindSample{});
    Vec6 f;
    f << d.u, d.v, d.w, d.p, d.q, d.r;
    return f;
}

}  // namespace

TrimResult trim(const AircraftParams& params, double Va, double gamma) {
    params.validate();
    if (!(Va > 1.0)) {
        throw DomainError("trim: airspeed must be > 1 m/s");
    }
    const GammaSet G = gamma_terms(params);

    const double qS = 0.5 * params.rho * Va * Va * params.Sw;
    Vec6 x = Vec6::Zero();
    if (params.C_Lalpha != 0) {
        x[0] = (params.weight() * std::cos(gamma) / qS - params.C_L0) / params.C_Lalpha;
    }
    if (params.C_mde != 0) {
        x[2] = -(params.C_m0 + params.C_malpha * x[0]) / params.C_mde;
    }
    x[3] = 0.5;

    Vec6 f = residual(x, params, G, Va, gamma);
    int iter = 0;
    for (; iter < kMaxIterations && f.lpNorm<Eigen::Infinity>() >= kTolerance; ++iter) {
        Mat6 J;
        for (int j = 0; j < 6; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
            Vec6 xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            J.col(j) = (residual(xp, params, G, Va, gamma) - residual(xm, params, G, Va, gamma)) /
                       (2.0 * h);
        }
        const Vec6 step = J.fullPivLu().solve(-f);
        if (!step.allFinite()) {
            break;
        }
        // Backtracking on the residual norm.
        double lambda = 1.0;
        Vec6 x_next = x + step;
        Vec6 f_next = residual(x_next, params, G, Va, gamma);
        while (f_next.norm() >= f.norm() && lambda > 1e-4) {
            lambda *= 0.5;
            x_next = x + lambda * step;
            f_next = residual(x_next, params, G, Va, gamma);
        }
        x = x_next;
        f = f_next;
    }

    const double res = f.lpNorm<Eigen::Infinity>();
    if (!(res < kTolerance)) {
        std::ostringstream msg;
        msg << "trim did not converge at Va=" << Va << " m/s after " << iter
            << " iterations (residual " << res << ")";
        throw TrimFailure(msg.str(), res);
    }
    const TrimPoint tp = build(x, Va, gamma);
    const auto& lim = params.actuators;
    if (tp.command.delta_t < 0 || tp.command.delta_t > 1 ||
        std::abs(tp.command.delta_e) > lim.elevator_max ||
        std::abs(tp.command.delta_a) > lim.aileron_max ||
        std::abs(tp.command.delta_r) > lim.rudder_max) {
        std::ostringstream msg;
        msg << "trim at Va=" << Va << " m/s requires controls outside actuator limits"
            << " (throttle " << tp.command.delta_t << ", elevator " << tp.command.delta_e << ")";
        throw TrimFailure(msg.str(), res);
    }
    return {tp.state, tp.command, res, iter};
}

}  // namespace fwsim

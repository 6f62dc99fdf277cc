#include "roasel/sim.hpp"

#include <cmath>
#include <sstream>

#include "roasel/threads.hpp"

namespace roasel {

ControlLaw make_control_law(const DenseMatrix& gain, double saturation_limit) {
    if (gain.rows() != 1) throw DimensionError("make_control_law: gain must be 1 x m");
    if (saturation_limit <= 0.0) throw DomainError("make_control_law: saturation limit must be positive");
    ControlLaw law;
    law.gain = gain;
    law.low_gain = 0.5 * gain;
    law.high_gain = law.gain - law.low_gain;  // exact complement
    law.saturation_limit = saturation_limit;
    return law;
}

double saturate(double u, double limit) {
    if (limit <= 0.0) throw DomainError("saturate: limit must be positive");
    if (u > limit) return limit;
    if (u < -limit) return -limit;
    return u;
}

namespace {

// dx/dt at state x for the saturated closed loop.
void derivative(const DenseMatrix& a, const DenseMatrix& b, const ControlLaw& law,
                const std::vector<double>& x, std::vector<double>& dx) {
    const int n = a.rows();
    double u = 0.0;
    for (int j = 0; j < n; ++j) u -= law.gain(0, j) * x[j];
    const double us = saturate(u, law.saturation_limit);
    for (int i = 0; i < n; ++i) {
        double s = b(i, 0) * us;
        for (int j = 0; j < n; ++j) s += a(i, j) * x[j];
        dx[i] = s;
    }
}

double norm2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double quad_form(const DenseMatrix* p, const std::vector<double>& x) {
    if (!p) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    }
    double s = 0.0;
    const int n = p->rows();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += x[i] * (*p)(i, j) * x[j];
    return s;
}

}  // namespace

TrajectoryRecord simulate(const DenseMatrix& a, const DenseMatrix& b, const ControlLaw& law,
                          const std::vector<double>& x0, double horizon, double step,
                          const DenseMatrix* lyapunov_shape, const SimConfig& cfg) {
    const int n = a.rows();
    if (!a.square() || b.rows() != n || b.cols() != 1 || law.gain.cols() != n)
        throw DimensionError("simulate: incompatible shapes");
    if (static_cast<int>(x0.size()) != n) throw DimensionError("simulate: x0 length mismatch");
    if (step <= 0.0 || horizon < step) throw DomainError("simulate: need step > 0 and horizon >= step");

    TrajectoryRecord rec;
    const int steps = static_cast<int>(std::llround(horizon / step));
    rec.times.reserve(steps + 1);
    rec.states.reserve(steps + 1);

    std::vector<double> x = x0;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    auto record = [&](double t) {
        double u = 0.0;
        for (int j = 0; j < n; ++j) u -= law.gain(0, j) * x[j];
        rec.times.push_back(t);
        rec.states.push_back(x);
        rec.inputs_unsaturated.push_back(u);
        rec.inputs_applied.push_back(saturate(u, law.saturation_limit));
        rec.lyapunov_values.push_back(quad_form(lyapunov_shape, x));
    };

    record(0.0);
    for (int s = 1; s <= steps; ++s) {
        derivative(a, b, law, x, k1);
        for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k1[i];
        derivative(a, b, law, tmp, k2);
        for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k2[i];
        derivative(a, b, law, tmp, k3);
        for (int i = 0; i < n; ++i) tmp[i] = x[i] + step * k3[i];
        derivative(a, b, law, tmp, k4);
        for (int i = 0; i < n; ++i)
            x[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        record(s * step);
        if (norm2(x) > cfg.divergence_guard) {
            rec.truncated = true;
            rec.converged = false;
            return rec;
        }
    }
    rec.converged = norm2(x) <= cfg.convergence_tol * (1.0 + norm2(x0));
    return rec;
}

VerificationReport verify_roa(const DenseMatrix& a, const DenseMatrix& b, const ControlLaw& law,
                              const EllipsoidRoa& roa, int samples, double boundary_scale,
                              const SimConfig& cfg) {
    if (boundary_scale <= 0.0 || boundary_scale > 1.0)
        throw DomainError("verify_roa: boundary_scale must be in (0, 1]");
    if (samples < 1) throw DomainError("verify_roa: need at least one sample");

    VerificationReport rep;
    rep.samples_total = samples;
    rep.boundary_scale = boundary_scale;

    auto pts = boundary_points(roa, std::max(samples, 3));
    pts.resize(samples);
    // Scale boundary samples toward the origin: x -> ρ·x scales xᵀPx by ρ².
    for (auto& x : pts)
        for (double& v : x) v *= boundary_scale;

    const double slack = 1e-8 * roa.radius;
    std::vector<int> converged(samples, 0);
    std::vector<double> worst(samples, 0.0);

    const int nthreads = thread_count();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads) if (nthreads > 1)
    for (int i = 0; i < samples; ++i) {
        TrajectoryRecord traj = simulate(a, b, law, pts[i], cfg.horizon, cfg.step, &roa.shape, cfg);
        converged[i] = traj.converged ? 1 : 0;
        double w = 0.0;
        for (size_t s = 1; s < traj.lyapunov_values.size(); ++s) {
            const double inc = traj.lyapunov_values[s] - traj.lyapunov_values[s - 1];
            if (inc > w) w = inc;
        }
        worst[i] = w;
    }
    for (int i = 0; i < samples; ++i) {
        rep.samples_converged += converged[i];
        if (worst[i] > rep.worst_lyapunov_increase) rep.worst_lyapunov_increase = worst[i];
    }
    rep.pass = (rep.samples_converged == rep.samples_total) &&
               (rep.worst_lyapunov_increase <= slack);
    return rep;
}

std::string trajectory_csv(const TrajectoryRecord& traj) {
    std::ostringstream os;
    os.precision(17);
    const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].size());
    os << "t";
    for (int i = 1; i <= n; ++i) os << ",x" << i;
    os << ",u_raw,u_sat,V\n";
    for (size_t s = 0; s < traj.times.size(); ++s) {
        os << traj.times[s];
        for (int i = 0; i < n; ++i) os << "," << traj.states[s][i];
        os << "," << traj.inputs_unsaturated[s] << "," << traj.inputs_applied[s] << ","
           << traj.lyapunov_values[s] << "\n";
    }
    return os.str();
}

}  // namespace roasel

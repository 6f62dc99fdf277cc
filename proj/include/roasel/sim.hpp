#pragma once

// Saturated closed-loop simulation (fixed-step RK4) and empirical
// verification that computed ellipsoids are contractively invariant.

#include <optional>
#include <string>
#include <vector>

#include "roasel/matrix.hpp"
#include "roasel/network.hpp"
#include "roasel/roa.hpp"

namespace roasel {

struct ControlLaw {
    DenseMatrix gain;       // K, 1 x m
    DenseMatrix low_gain;   // K/2
    DenseMatrix high_gain;  // K/2; low + high = gain exactly
    double saturation_limit = 1.0;
};

ControlLaw make_control_law(const DenseMatrix& gain, double saturation_limit);

double saturate(double u, double limit);

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<double> inputs_unsaturated;
    std::vector<double> inputs_applied;
    std::vector<double> lyapunov_values;  // xᵀPx (‖x‖² when no shape given)
    bool converged = false;
    bool truncated = false;  // divergence guard tripped
};

/// RK4 integration of dx/dt = A x + B sat(-K x). The optional shape matrix
/// feeds the recorded Lyapunov values.
TrajectoryRecord simulate(const DenseMatrix& a, const DenseMatrix& b, const ControlLaw& law,
                          const std::vector<double>& x0, double horizon, double step,
                          const DenseMatrix* lyapunov_shape = nullptr,
                          const SimConfig& cfg = SimConfig{});

struct VerificationReport {
    int samples_total = 0;
    int samples_converged = 0;
    double worst_lyapunov_increase = 0.0;
    double boundary_scale = 1.0;
    bool pass = false;
};

/// Simulates from boundary samples of the ellipsoid scaled by
/// boundary_scale; passes when every trajectory converges and xᵀPx is
/// non-increasing up to 1e-8·δ per step.
VerificationReport verify_roa(const DenseMatrix& a, const DenseMatrix& b, const ControlLaw& law,
                              const EllipsoidRoa& roa, int samples, double boundary_scale,
                              const SimConfig& cfg = SimConfig{});

/// CSV export: header `t,x1..xn,u_raw,u_sat,V`, full double precision.
std::string trajectory_csv(const TrajectoryRecord& traj);

}  // namespace roasel

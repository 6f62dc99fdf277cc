#pragma once

// Invariant-ellipsoid radii, Lebesgue measures, and the driver-node ranking.

#include <string>
#include <vector>

#include "roasel/care.hpp"
#include "roasel/network.hpp"
#include "roasel/split.hpp"

namespace roasel {

/// Contractively invariant ellipsoid {x : xᵀPx ≤ δ}.
struct EllipsoidRoa {
    DenseMatrix shape;      // P, m x m positive definite
    double radius = 0.0;    // δ = 4r²/(BᵀPB)
    int dimension = 0;
    double measure = 0.0;   // area (m=2) / volume (m>=3) / interval length (m=1)
    double input_quadratic = 0.0;  // Σ = BᵀPB
};

double ellipsoid_radius(const DenseMatrix& p, const DenseMatrix& b, double r);
double unit_ball_volume(int m);
double ellipsoid_measure(const EllipsoidRoa& roa);

/// Builds the full record from a CARE shape matrix and input column.
EllipsoidRoa make_roa(const DenseMatrix& p, const DenseMatrix& b, double r);

bool contains(const EllipsoidRoa& roa, const std::vector<double>& x);

/// Deterministic points on {x : xᵀPx = δ}. Uniform in angle for m = 2,
/// low-discrepancy directions for m >= 3.
std::vector<std::vector<double>> boundary_points(const EllipsoidRoa& roa, int count);

enum class ReportMode { FullAntistable, Subsystem };

struct DriverRecord {
    int node = 0;           // 1-based
    bool controllable = false;
    bool excluded = false;
    std::string exclusion_reason;
    double radius = 0.0;
    double sqrt_det = 0.0;
    double measure = 0.0;
    double ratio = 0.0;     // measure / measure_max
    EllipsoidRoa roa;
    RiccatiSolution riccati;
};

struct DriverReport {
    ReportMode mode = ReportMode::FullAntistable;
    std::vector<DriverRecord> records;  // ordered by candidate list position
    int best_candidate = 0;             // 1-based node index; 0 when none
    bool globally_stabilizable = false; // k = 0 case: unbounded ROA, no ranking
    int subsystem_order = 0;            // k (equals n in full mode)
    SubsystemSplit split;               // populated in Subsystem mode
};

/// Algorithm for fully anti-stable networks: per-candidate full-order CARE.
DriverReport rank_drivers_antistable(const NetworkSpec& net, const AnalysisConfig& cfg);

/// General path: spectral split once, per-candidate subsystem CARE.
/// Delegates to the anti-stable path when k = n; k = 0 yields the
/// globally-stabilizable report.
DriverReport rank_drivers_general(const NetworkSpec& net, const AnalysisConfig& cfg);

}  // namespace roasel

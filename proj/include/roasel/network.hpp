#pragma once

// Network representation: adjacency matrix, candidate driver nodes, and the
// controllability checks that gate every downstream analysis.

#include <optional>
#include <string>
#include <vector>

#include "roasel/matrix.hpp"

namespace roasel {

/// Weighted directed network with candidate driver nodes (1-based indices,
/// matching the document format; converted to 0-based only at use sites).
struct NetworkSpec {
    int node_count = 0;
    DenseMatrix adjacency;           // node_count x node_count
    std::vector<int> candidates;     // 1-based, nonempty, unique, in [1, n]
    std::vector<double> input_weights;  // per candidate, defaults to 1

    void validate() const;  // throws ParseError on invariant violation
};

struct SimConfig {
    double step = 1e-3;
    double horizon = 50.0;
    double convergence_tol = 1e-4;   // scaled by (1 + ||x0||)
    double divergence_guard = 1e6;
};

struct AnalysisConfig {
    std::optional<DenseMatrix> state_cost;            // Q, default identity n
    double input_cost = 1.0;                          // r > 0
    std::optional<DenseMatrix> subsystem_state_cost;  // Q1, default identity k
    double subsystem_input_cost = 1.0;                // R1
    double saturation_limit = 1.0;                    // u_max
    double antistable_margin = 1e-8;
    double rank_tol = 1e-9;
    double care_residual_tol = 1e-8;
    SimConfig sim;

    DenseMatrix state_cost_or_identity(int n) const;
    DenseMatrix subsystem_cost_or_identity(int k) const;
    void validate() const;
};

struct NetworkDocument {
    NetworkSpec net;
    AnalysisConfig config;
};

/// Parses the JSON network document. Throws ParseError with a field path.
NetworkDocument parse_network(const std::string& text);

/// Serializes back to the document format (round-trip inverse of parse).
std::string serialize_network(const NetworkDocument& doc);

/// Column vector with the candidate's input weight at its node row.
/// candidate_position indexes the candidate list (0-based).
DenseMatrix input_matrix(const NetworkSpec& net, int candidate_position);

/// Kalman rank test with per-power column normalization.
bool is_controllable(const DenseMatrix& a, const DenseMatrix& b, double tol);

struct CandidateCheck {
    int node = 0;                          // 1-based
    bool controllable = false;             // (A, B_i)
    bool subsystem_controllable = false;   // (Ã₁, B̃₁ᵢ); equals `controllable` when k = n
};

std::vector<CandidateCheck> validate_candidates(const NetworkSpec& net, const AnalysisConfig& cfg);

}  // namespace roasel

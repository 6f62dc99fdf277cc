#pragma once

// Stabilizing solution of the continuous algebraic Riccati equation
// AᵀP + PA − PBR⁻¹BᵀP + Q = 0 via the Hamiltonian-Schur method with Newton
// refinement, plus the LQ gain K = R⁻¹BᵀP.

#include <vector>

#include "roasel/matrix.hpp"

namespace roasel {

struct RiccatiSolution {
    DenseMatrix p_matrix;    // symmetric positive definite
    DenseMatrix gain;        // 1 x m
    double residual_norm = 0.0;
    std::vector<Complex> closed_loop_eigs;  // spectrum of A - BK, all Re < 0
};

RiccatiSolution solve_care(const DenseMatrix& a, const DenseMatrix& b,
                           const DenseMatrix& q, double r,
                           double residual_tol = 1e-8);

/// ‖AᵀP + PA − PBR⁻¹BᵀP + Q‖_F
double care_residual(const DenseMatrix& a, const DenseMatrix& b,
                     const DenseMatrix& q, double r, const DenseMatrix& p);

}  // namespace roasel

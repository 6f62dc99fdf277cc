#pragma once

// Similarity transform isolating the anti-stable modes of the network from
// the stable ones, so ROA analysis runs only on the block that needs it.

#include <vector>

#include "roasel/matrix.hpp"

namespace roasel {

/// Decoupled anti-stable/stable decomposition V⁻¹AV = blockdiag(Ã₁, Ã₂).
struct SubsystemSplit {
    int k = 0;                   // order of the anti-stable block
    DenseMatrix transform;       // V, unit 2-norm columns
    DenseMatrix transform_inv;   // V⁻¹
    DenseMatrix antistable_block;  // Ã₁, k x k
    DenseMatrix stable_block;      // Ã₂, (n-k) x (n-k)
};

/// Splits the spectrum about the imaginary axis. Eigenvalues with
/// |Re λ| < margin are a CenterSpectrumError. k may be 0 or n.
SubsystemSplit split_spectrum(const DenseMatrix& a, double margin);

struct PartitionedInput {
    DenseMatrix top;     // B̃₁ᵢ, k x 1
    DenseMatrix bottom;  // B̃₂ᵢ, (n-k) x 1
};

/// V⁻¹b split at row k.
PartitionedInput partition_input(const SubsystemSplit& split, const DenseMatrix& b);

enum class TransformDirection { Forward, Inverse };  // forward: z = V⁻¹x

std::vector<double> transform_state(const SubsystemSplit& split,
                                    const std::vector<double>& x,
                                    TransformDirection direction);

}  // namespace roasel

#include "roasel/split.hpp"

#include <cmath>
#include <sstream>

namespace roasel {

namespace {

// Starting row of each 1x1/2x2 diagonal block of a quasi-triangular matrix.
std::vector<int> block_starts(const DenseMatrix& t) {
    std::vector<int> starts;
    const int n = t.rows();
    int i = 0;
    while (i < n) {
        starts.push_back(i);
        i += (i + 1 < n && t(i + 1, i) != 0.0) ? 2 : 1;
    }
    return starts;
}

// Reduce a quasi-triangular block to block-diagonal (1x1/2x2) eigenvector
// form by annihilating super-diagonal couplings with Sylvester solves.
// Returns the within-block transform S (T S = S blockdiag). Falls back to
// the identity when eigenvalues cluster and the solves would be
// ill-conditioned; the Schur basis is kept in that case.
DenseMatrix block_eigen_transform(const DenseMatrix& t) {
    const int n = t.rows();
    if (n <= 1) return DenseMatrix::identity(n);

    // Clustered spectra: keep the Schur basis.
    auto eigs = real_schur(t).eigenvalues;
    const double gap_tol = 1e-7 * (1.0 + t.frobenius_norm());
    for (size_t i = 0; i < eigs.size(); ++i)
        for (size_t j = i + 1; j < eigs.size(); ++j)
            if (std::abs(eigs[i] - eigs[j]) < gap_tol) return DenseMatrix::identity(n);

    auto starts = block_starts(t);
    if (starts.size() < 2) return DenseMatrix::identity(n);

    // Recurse on the trailing part, then decouple the leading block from it:
    // [D1 C; 0 T2] with D1 Z - Z T2 = -C.
    const int d1 = (starts.size() > 1 ? starts[1] : n);
    DenseMatrix head = t.block(0, 0, d1, d1);
    DenseMatrix coupling = t.block(0, d1, d1, n - d1);
    DenseMatrix tail = t.block(d1, d1, n - d1, n - d1);

    DenseMatrix s_tail = block_eigen_transform(tail);
    // Transform coupling into the tail's eigen basis first.
    DenseMatrix c2 = coupling * s_tail;
    DenseMatrix tail_diag = solve_linear(s_tail, tail * s_tail);
    // head Z + Z (-tail_diag) + c2 = 0
    DenseMatrix z = solve_sylvester(head, -1.0 * tail_diag, c2);

    DenseMatrix s = DenseMatrix::identity(n);
    s.set_block(d1, d1, s_tail);
    s.set_block(0, d1, z);
    return s;
}

}  // namespace

SubsystemSplit split_spectrum(const DenseMatrix& a, double margin) {
    if (!a.square()) throw DimensionError("split_spectrum: matrix must be square");
    const int n = a.rows();

    SchurForm schur = real_schur(a);
    {
        std::ostringstream bad;
        bool any = false;
        for (const auto& e : schur.eigenvalues) {
            if (std::fabs(e.real()) < margin) {
                if (any) bad << ", ";
                bad << e.real() << (e.imag() >= 0 ? "+" : "") << e.imag() << "i";
                any = true;
            }
        }
        if (any)
            throw CenterSpectrumError("split_spectrum: eigenvalues within margin of the imaginary axis: " + bad.str());
    }

    SchurForm ordered = reorder_schur(schur, [](Complex e) { return e.real() > 0.0; });
    int k = 0;
    for (const auto& e : ordered.eigenvalues)
        if (e.real() > 0.0) ++k;

    const DenseMatrix& t = ordered.quasi_triangular;
    DenseMatrix t11 = t.block(0, 0, k, k);
    DenseMatrix t22 = t.block(k, k, n - k, n - k);

    // Kill the off-diagonal coupling: T11 X - X T22 = -T12.
    DenseMatrix w = DenseMatrix::identity(n);
    if (k > 0 && k < n) {
        DenseMatrix t12 = t.block(0, k, k, n - k);
        DenseMatrix x = solve_sylvester(t11, -1.0 * t22, t12);
        w.set_block(0, k, x);
    }

    // Refine each block toward eigenvector form; this pins down the column
    // basis the δ̃ values depend on (unit-norm eigenvector convention).
    DenseMatrix s = DenseMatrix::identity(n);
    if (k > 0) s.set_block(0, 0, block_eigen_transform(t11));
    if (k < n) s.set_block(k, k, block_eigen_transform(t22));

    DenseMatrix v = ordered.orthogonal * w * s;
    // Unit 2-norm columns.
    for (int j = 0; j < n; ++j) {
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += v(i, j) * v(i, j);
        norm = std::sqrt(norm);
        if (norm > 0.0)
            for (int i = 0; i < n; ++i) v(i, j) /= norm;
    }

    SubsystemSplit out;
    out.k = k;
    out.transform = v;
    out.transform_inv = inverse(v);
    DenseMatrix at = out.transform_inv * a * v;
    out.antistable_block = at.block(0, 0, k, k);
    out.stable_block = at.block(k, k, n - k, n - k);
    return out;
}

PartitionedInput partition_input(const SubsystemSplit& split, const DenseMatrix& b) {
    const int n = split.transform.rows();
    if (b.rows() != n || b.cols() != 1)
        throw DimensionError("partition_input: b must be n x 1");
    DenseMatrix bt = split.transform_inv * b;
    PartitionedInput out;
    out.top = bt.block(0, 0, split.k, 1);
    out.bottom = bt.block(split.k, 0, n - split.k, 1);
    return out;
}

std::vector<double> transform_state(const SubsystemSplit& split,
                                    const std::vector<double>& x,
                                    TransformDirection direction) {
    const int n = split.transform.rows();
    if (static_cast<int>(x.size()) != n)
        throw DimensionError("transform_state: length mismatch");
    DenseMatrix xv(n, 1, x);
    DenseMatrix y = (direction == TransformDirection::Forward)
                        ? split.transform_inv * xv
                        : split.transform * xv;
    return y.data();
}

}  // namespace roasel

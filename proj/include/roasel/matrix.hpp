#pragma once

// Dense real linear-algebra kernels: storage type, LU determinant, rank,
// real Schur form with eigenvalue reordering, and a Bartels-Stewart
// Sylvester solver. Everything downstream builds on these.

#include <complex>
#include <functional>
#include <initializer_list>
#include <vector>

#include "roasel/errors.hpp"

namespace roasel {

/// Row-major dense real matrix. Entries are validated finite on construction.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols);  // zero-filled
    DenseMatrix(int rows, int cols, std::vector<double> entries);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    DenseMatrix transpose() const;
    DenseMatrix block(int row0, int col0, int nrows, int ncols) const;
    void set_block(int row0, int col0, const DenseMatrix& b);

    double frobenius_norm() const;
    double max_abs() const;

    DenseMatrix& operator+=(const DenseMatrix& o);
    DenseMatrix& operator-=(const DenseMatrix& o);
    DenseMatrix& operator*=(double s);

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);

using Complex = std::complex<double>;

/// Real Schur decomposition A = U T Uᵀ with quasi-triangular T.
struct SchurForm {
    DenseMatrix orthogonal;        // U
    DenseMatrix quasi_triangular;  // T, 1x1 and 2x2 diagonal blocks
    std::vector<Complex> eigenvalues;  // diagonal-block order
};

using EigenvalueSelector = std::function<bool(Complex)>;

/// det(m) via LU with partial pivoting.
double lu_determinant(const DenseMatrix& m);

/// Real Schur form; max_iter caps the QR sweeps.
SchurForm real_schur(const DenseMatrix& m, int max_iter = 30);

/// Moves all eigenvalues accepted by `select` to the leading diagonal
/// blocks. The selector is evaluated on the real part only so conjugate
/// pairs are never split.
SchurForm reorder_schur(const SchurForm& s, const EigenvalueSelector& select);

/// Solves a X + X b + c = 0 (Bartels-Stewart). Requires the spectra of a
/// and -b to be disjoint.
DenseMatrix solve_sylvester(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c);

/// Rank by column-pivoted QR: diagonal magnitudes above tol * largest.
int numerical_rank(const DenseMatrix& m, double tol);

/// Solves a X = b for square a (LU). Throws SingularMatrixError.
DenseMatrix solve_linear(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix inverse(const DenseMatrix& m);

/// Eigenvalues of a square matrix (via the real Schur form).
std::vector<Complex> eigenvalues(const DenseMatrix& m);

/// Eigenvalues and orthonormal eigenvectors of a symmetric matrix, ascending.
void symmetric_eigen(const DenseMatrix& m, std::vector<double>& values, DenseMatrix& vectors);

}  // namespace roasel

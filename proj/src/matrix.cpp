#include "roasel/matrix.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

namespace roasel {

namespace {

void check_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) throw DomainError("matrix entry is not finite");
    }
}

void require_square(const DenseMatrix& m, const char* op) {
    if (!m.square()) {
        std::ostringstream os;
        os << op << ": matrix must be square, got " << m.rows() << "x" << m.cols();
        throw DimensionError(os.str());
    }
}

}  // namespace

DenseMatrix::DenseMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {
    if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
}

DenseMatrix::DenseMatrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
    if (data_.size() != static_cast<size_t>(rows) * cols)
        throw DimensionError("entry count does not match rows*cols");
    check_finite(data_);
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    data_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_) throw DimensionError("ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    check_finite(data_);
}

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix DenseMatrix::block(int row0, int col0, int nrows, int ncols) const {
    if (row0 < 0 || col0 < 0 || row0 + nrows > rows_ || col0 + ncols > cols_)
        throw DimensionError("block out of range");
    DenseMatrix b(nrows, ncols);
    for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < ncols; ++j) b(i, j) = (*this)(row0 + i, col0 + j);
    return b;
}

void DenseMatrix::set_block(int row0, int col0, const DenseMatrix& b) {
    if (row0 + b.rows() > rows_ || col0 + b.cols() > cols_)
        throw DimensionError("block out of range");
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) (*this)(row0 + i, col0 + j) = b(i, j);
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::fabs(x));
    return m;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("shape mismatch in add");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("shape mismatch in sub");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("shape mismatch in multiply");
    DenseMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

double lu_determinant(const DenseMatrix& m) {
    require_square(m, "lu_determinant");
    const int n = m.rows();
    if (n == 0) return 1.0;
    std::vector<double> a = m.data();
    std::vector<lapack_int> ipiv(n);
    lapack_int info = LAPACKE_dgetrf(LAPACK_ROW_MAJOR, n, n, a.data(), n, ipiv.data());
    if (info < 0) throw Error("dgetrf: bad argument");
    double det = 1.0;
    for (int i = 0; i < n; ++i) {
        det *= a[static_cast<size_t>(i) * n + i];
        if (ipiv[i] != i + 1) det = -det;
    }
    return det;
}

SchurForm real_schur(const DenseMatrix& m, int max_iter) {
    require_square(m, "real_schur");
    const int n = m.rows();
    SchurForm s;
    s.quasi_triangular = m;
    s.orthogonal = DenseMatrix::identity(n);
    if (n == 0) return s;
    std::vector<double> wr(n), wi(n);
    lapack_int sdim = 0;
    lapack_int info = LAPACKE_dgees(LAPACK_ROW_MAJOR, 'V', 'N', nullptr, n,
                                    s.quasi_triangular.data().data(), n, &sdim,
                                    wr.data(), wi.data(),
                                    s.orthogonal.data().data(), n);
    if (info < 0) throw Error("dgees: bad argument");
    if (info > 0) {
        throw ConvergenceError("real_schur: QR iteration failed to converge", max_iter);
    }
    // Clean below-subdiagonal noise so block structure is exact.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i - 1; ++j) s.quasi_triangular(i, j) = 0.0;
    s.eigenvalues.reserve(n);
    for (int i = 0; i < n; ++i) s.eigenvalues.emplace_back(wr[i], wi[i]);
    return s;
}

namespace {

// Recompute the eigenvalue list of a quasi-triangular T in block order.
std::vector<Complex> quasi_triangular_eigs(const DenseMatrix& t) {
    const int n = t.rows();
    std::vector<Complex> eigs;
    eigs.reserve(n);
    int i = 0;
    while (i < n) {
        if (i + 1 < n && t(i + 1, i) != 0.0) {
            const double a = t(i, i), b = t(i, i + 1);
            const double c = t(i + 1, i), d = t(i + 1, i + 1);
            const double tr = a + d;
            const double disc = (a - d) * (a - d) + 4.0 * b * c;
            if (disc < 0.0) {
                const double re = tr / 2.0, im = std::sqrt(-disc) / 2.0;
                eigs.emplace_back(re, im);
                eigs.emplace_back(re, -im);
            } else {
                const double rt = std::sqrt(disc) / 2.0;
                eigs.emplace_back(tr / 2.0 + rt, 0.0);
                eigs.emplace_back(tr / 2.0 - rt, 0.0);
            }
            i += 2;
        } else {
            eigs.emplace_back(t(i, i), 0.0);
            ++i;
        }
    }
    return eigs;
}

// Starting row of each 1x1/2x2 diagonal block of T.
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

}  // namespace

SchurForm reorder_schur(const SchurForm& s, const EigenvalueSelector& select) {
    const int n = s.quasi_triangular.rows();
    SchurForm out = s;
    DenseMatrix& t = out.quasi_triangular;
    DenseMatrix& u = out.orthogonal;
    // Selection sort on diagonal blocks: repeatedly move the first selected
    // block found past the settled prefix to the front via dtrexc.
    int settled = 0;  // first column index not yet fixed
    while (settled < n) {
        auto starts = block_starts(t);
        auto eigs = quasi_triangular_eigs(t);
        // map block -> eigenvalue index
        int found = -1;
        int eig_idx = 0;
        for (size_t bi = 0; bi < starts.size(); ++bi) {
            const int bs = starts[bi];
            const int bw = (bi + 1 < starts.size() ? starts[bi + 1] : n) - bs;
            if (bs >= settled && select(Complex(eigs[eig_idx].real(), 0.0))) {
                found = bs;
                break;
            }
            eig_idx += bw;
        }
        if (found < 0) break;  // nothing selected beyond the prefix
        if (found != settled) {
            lapack_int ifst = found + 1, ilst = settled + 1;
            lapack_int info = LAPACKE_dtrexc(LAPACK_ROW_MAJOR, 'V', n,
                                             t.data().data(), n, u.data().data(), n,
                                             &ifst, &ilst);
            if (info != 0) {
                throw ReorderError("reorder_schur: block swap failed", found, settled);
            }
        }
        // Advance past the block now sitting at `settled`.
        settled += (settled + 1 < n && t(settled + 1, settled) != 0.0) ? 2 : 1;
    }
    out.eigenvalues = quasi_triangular_eigs(t);
    return out;
}

DenseMatrix solve_sylvester(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c) {
    require_square(a, "solve_sylvester");
    require_square(b, "solve_sylvester");
    const int k = a.rows(), m = b.rows();
    if (c.rows() != k || c.cols() != m)
        throw DimensionError("solve_sylvester: c must be k x m");
    if (k == 0 || m == 0) return DenseMatrix(k, m);

    SchurForm sa = real_schur(a);
    SchurForm sb = real_schur(b);

    // Unique solvability needs spec(a) and spec(-b) disjoint.
    const double scale_tol = 1e-10 * (1.0 + a.frobenius_norm() + b.frobenius_norm());
    for (const auto& la : sa.eigenvalues)
        for (const auto& lb : sb.eigenvalues)
            if (std::abs(la + lb) < scale_tol)
                throw SingularMatrixError("solve_sylvester: spectra of a and -b overlap");

    // a X + X b = -c  ->  Ta Y + Y Tb = -Uaᵀ c Ub, X = Ua Y Ubᵀ
    DenseMatrix rhs = sa.orthogonal.transpose() * c * sb.orthogonal;
    rhs *= -1.0;
    // dtrsyl wants op(B) upper quasi-triangular; transpose our Tb via trans flag.
    // It solves A X + isgn X B = scale C with A, B quasi-triangular.
    DenseMatrix ta = sa.quasi_triangular;
    DenseMatrix tb = sb.quasi_triangular;
    double scale = 1.0;
    lapack_int info = LAPACKE_dtrsyl(LAPACK_ROW_MAJOR, 'N', 'N', 1, k, m,
                                     ta.data().data(), k, tb.data().data(), m,
                                     rhs.data().data(), m, &scale);
    if (info < 0) throw Error("dtrsyl: bad argument");
    if (info == 1 || scale == 0.0)
        throw SingularMatrixError("solve_sylvester: equation nearly singular");
    DenseMatrix y = rhs;
    if (scale != 1.0) y *= 1.0 / scale;
    return sa.orthogonal * y * sb.orthogonal.transpose();
}

int numerical_rank(const DenseMatrix& m, double tol) {
    if (tol <= 0.0) throw DomainError("numerical_rank: tol must be positive");
    const int r = m.rows(), c = m.cols();
    if (r == 0 || c == 0) return 0;
    std::vector<double> a = m.data();
    std::vector<lapack_int> jpvt(c, 0);
    std::vector<double> tau(std::min(r, c));
    lapack_int info = LAPACKE_dgeqp3(LAPACK_ROW_MAJOR, r, c, a.data(), c, jpvt.data(), tau.data());
    if (info != 0) throw Error("dgeqp3 failed");
    const int d = std::min(r, c);
    double rmax = 0.0;
    for (int i = 0; i < d; ++i) rmax = std::max(rmax, std::fabs(a[static_cast<size_t>(i) * c + i]));
    if (rmax == 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < d; ++i)
        if (std::fabs(a[static_cast<size_t>(i) * c + i]) > tol * rmax) ++rank;
    return rank;
}

DenseMatrix solve_linear(const DenseMatrix& a, const DenseMatrix& b) {
    require_square(a, "solve_linear");
    if (a.rows() != b.rows()) throw DimensionError("solve_linear: shape mismatch");
    const int n = a.rows(), nrhs = b.cols();
    std::vector<double> lu = a.data();
    DenseMatrix x = b;
    std::vector<lapack_int> ipiv(n);
    lapack_int info = LAPACKE_dgesv(LAPACK_ROW_MAJOR, n, nrhs, lu.data(), n, ipiv.data(),
                                    x.data().data(), nrhs);
    if (info > 0) throw SingularMatrixError("solve_linear: singular matrix");
    if (info < 0) throw Error("dgesv: bad argument");
    return x;
}

DenseMatrix inverse(const DenseMatrix& m) {
    return solve_linear(m, DenseMatrix::identity(m.rows()));
}

std::vector<Complex> eigenvalues(const DenseMatrix& m) {
    return real_schur(m).eigenvalues;
}

void symmetric_eigen(const DenseMatrix& m, std::vector<double>& values, DenseMatrix& vectors) {
    require_square(m, "symmetric_eigen");
    const int n = m.rows();
    vectors = m;
    values.assign(n, 0.0);
    lapack_int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'V', 'U', n,
                                    vectors.data().data(), n, values.data());
    if (info != 0) throw ConvergenceError("dsyev failed to converge", info);
}

}  // namespace roasel

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "roasel/matrix.hpp"

using namespace roasel;

namespace {

DenseMatrix random_matrix(std::mt19937& rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = dist(rng);
    return m;
}

// Characteristic polynomial coefficients via Faddeev-LeVerrier:
// p(λ) = λⁿ + c1 λⁿ⁻¹ + ... + cn.
std::vector<double> char_poly(const DenseMatrix& a) {
    const int n = a.rows();
    std::vector<double> c(n + 1, 0.0);
    c[0] = 1.0;
    DenseMatrix m = DenseMatrix::identity(n);
    for (int k = 1; k <= n; ++k) {
        m = a * m;
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += m(i, i);
        c[k] = -tr / k;
        for (int i = 0; i < n; ++i) m(i, i) += c[k];
    }
    return c;
}

// Durand-Kerner root finder, independent of the Schur path.
std::vector<Complex> poly_roots(const std::vector<double>& coeffs) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    std::vector<Complex> r(n);
    Complex seed(0.4, 0.9);
    Complex acc(1.0, 0.0);
    for (int i = 0; i < n; ++i) {
        acc *= seed;
        r[i] = acc;
    }
    auto eval = [&](Complex x) {
        Complex v(0.0, 0.0);
        for (double c : coeffs) v = v * x + c;
        return v;
    };
    for (int it = 0; it < 500; ++it) {
        double move = 0.0;
        for (int i = 0; i < n; ++i) {
            Complex denom(1.0, 0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= (r[i] - r[j]);
            Complex delta = eval(r[i]) / denom;
            r[i] -= delta;
            move = std::max(move, std::abs(delta));
        }
        if (move < 1e-13) break;
    }
    return r;
}

// Greedy multiset match: max over pairings of min distance.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (const auto& x : a) {
        double best = 1e300;
        size_t bi = 0;
        for (size_t j = 0; j < b.size(); ++j) {
            double d = std::abs(x - b[j]);
            if (d < best) {
                best = d;
                bi = j;
            }
        }
        worst = std::max(worst, best);
        b.erase(b.begin() + bi);
    }
    return worst;
}

}  // namespace

TEST_CASE("lu_determinant basics") {
    CHECK(lu_determinant(DenseMatrix::identity(3)) == doctest::Approx(1.0));
    CHECK(lu_determinant(DenseMatrix{{2, 0}, {0, 8}}) == doctest::Approx(16.0));
    CHECK(lu_determinant(DenseMatrix{{2, 1}, {1, 1}}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(lu_determinant(DenseMatrix(2, 3)), DimensionError);
}

TEST_CASE("lu_determinant sign") {
    // row swap of identity has determinant -1
    CHECK(lu_determinant(DenseMatrix{{0, 1}, {1, 0}}) == doctest::Approx(-1.0));
}

TEST_CASE("real_schur examples") {
    SUBCASE("already triangular") {
        auto s = real_schur(DenseMatrix{{3, 0}, {0, -1}});
        std::vector<Complex> want{{3, 0}, {-1, 0}};
        CHECK(multiset_distance(s.eigenvalues, want) < 1e-12);
    }
    SUBCASE("paper example 1 spectrum") {
        auto s = real_schur(DenseMatrix{{2, 1}, {1, 1}});
        std::vector<Complex> want{{2.6180, 0}, {0.3820, 0}};
        CHECK(multiset_distance(s.eigenvalues, want) < 1e-4);
    }
    SUBCASE("rotation gives a conjugate pair") {
        auto s = real_schur(DenseMatrix{{0, 1}, {-1, 0}});
        std::vector<Complex> want{{0, 1}, {0, -1}};
        CHECK(multiset_distance(s.eigenvalues, want) < 1e-12);
        CHECK(s.quasi_triangular(1, 0) != 0.0);  // one 2x2 block
    }
}

TEST_CASE("schur reconstruction and orthogonality on random matrices") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng() % 11);  // up to 12
        DenseMatrix a = random_matrix(rng, n);
        auto s = real_schur(a);
        DenseMatrix recon = s.orthogonal * s.quasi_triangular * s.orthogonal.transpose();
        CHECK((recon - a).frobenius_norm() <= 1e-9 * (1.0 + a.frobenius_norm()));
        DenseMatrix utu = s.orthogonal.transpose() * s.orthogonal;
        CHECK((utu - DenseMatrix::identity(n)).frobenius_norm() <= 1e-10 * n);
        // strictly zero below the first subdiagonal
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i - 1; ++j) CHECK(s.quasi_triangular(i, j) == 0.0);
    }
}

TEST_CASE("schur eigenvalues match characteristic-polynomial roots (n <= 4)") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        DenseMatrix a = random_matrix(rng, n);
        auto s = real_schur(a);
        auto roots = poly_roots(char_poly(a));
        CHECK(multiset_distance(s.eigenvalues, roots) < 1e-8);
    }
}

TEST_CASE("reorder_schur") {
    SUBCASE("2x2 swap") {
        auto s = real_schur(DenseMatrix{{-1, 0}, {0, 3}});
        auto r = reorder_schur(s, [](Complex e) { return e.real() > 0; });
        CHECK(r.eigenvalues[0].real() == doctest::Approx(3.0));
        CHECK(r.eigenvalues[1].real() == doctest::Approx(-1.0));
    }
    SUBCASE("already ordered is a no-op on the spectrum") {
        auto s = real_schur(DenseMatrix{{3, 1}, {0, -1}});
        auto r = reorder_schur(s, [](Complex e) { return e.real() > 0; });
        CHECK(r.eigenvalues[0].real() == doctest::Approx(3.0));
        CHECK((r.orthogonal * r.quasi_triangular * r.orthogonal.transpose() -
               DenseMatrix{{3, 1}, {0, -1}})
                  .frobenius_norm() < 1e-12);
    }
    SUBCASE("paper example 2 selection") {
        DenseMatrix a{{0, 0.0178, 0.3410, 0.5807},
                      {0.0659, 0, 0.6175, 0.6207},
                      {0.5694, 0.5547, 0, 0.5997},
                      {0.4501, 0.0190, 0.0143, 0}};
        auto r = reorder_schur(real_schur(a), [](Complex e) { return e.real() > 0; });
        std::vector<Complex> lead{r.eigenvalues[0], r.eigenvalues[1]};
        std::vector<Complex> want{{0.9613, 0}, {0.1318, 0}};
        CHECK(multiset_distance(lead, want) < 1e-3);
    }
}

TEST_CASE("reorder_schur preserves the eigenvalue multiset") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng() % 6);
        DenseMatrix a = random_matrix(rng, n);
        auto s = real_schur(a);
        auto r = reorder_schur(s, [](Complex e) { return e.real() > 0; });
        CHECK(multiset_distance(s.eigenvalues, r.eigenvalues) < 1e-10);
        DenseMatrix recon = r.orthogonal * r.quasi_triangular * r.orthogonal.transpose();
        CHECK((recon - a).frobenius_norm() <= 1e-9 * (1.0 + a.frobenius_norm()));
    }
}

TEST_CASE("solve_sylvester examples") {
    SUBCASE("scalar") {
        DenseMatrix x = solve_sylvester(DenseMatrix{{1}}, DenseMatrix{{1}}, DenseMatrix{{-2}});
        CHECK(x(0, 0) == doctest::Approx(1.0));  // 1·X + X·1 - 2 = 0
    }
    SUBCASE("zero rhs") {
        DenseMatrix x = solve_sylvester(DenseMatrix{{1, 0}, {0, 2}}, DenseMatrix{{3}},
                                        DenseMatrix(2, 1));
        CHECK(x.frobenius_norm() == doctest::Approx(0.0));
    }
    SUBCASE("diagonal entrywise formula") {
        DenseMatrix x = solve_sylvester(DenseMatrix{{1, 0}, {0, 2}}, DenseMatrix{{3}},
                                        DenseMatrix{{4}, {5}});
        CHECK(x(0, 0) == doctest::Approx(-4.0 / 4.0));
        CHECK(x(1, 0) == doctest::Approx(-5.0 / 5.0));
    }
    SUBCASE("overlapping spectra throws") {
        CHECK_THROWS_AS(solve_sylvester(DenseMatrix{{1}}, DenseMatrix{{-1}}, DenseMatrix{{1}}),
                        SingularMatrixError);
    }
}

TEST_CASE("solve_sylvester residual bound on random instances") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        int k = 1 + static_cast<int>(rng() % 6);
        int m = 1 + static_cast<int>(rng() % 6);
        DenseMatrix a = random_matrix(rng, k);
        DenseMatrix b = random_matrix(rng, m);
        // Shift both spectra into Re <= -0.5 so every eigenvalue sum has
        // Re <= -1 and the equation is uniquely solvable.
        double sa = -1e300, sb = -1e300;
        for (const auto& e : eigenvalues(a)) sa = std::max(sa, e.real());
        for (const auto& e : eigenvalues(b)) sb = std::max(sb, e.real());
        for (int i = 0; i < k; ++i) a(i, i) -= sa + 0.5;
        for (int i = 0; i < m; ++i) b(i, i) -= sb + 0.5;
        DenseMatrix c(k, m);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < m; ++j) c(i, j) = dist(rng);
        DenseMatrix x = solve_sylvester(a, b, c);
        double res = (a * x + x * b + c).frobenius_norm();
        CHECK(res <= 1e-9 * (1.0 + c.frobenius_norm()));
    }
}

TEST_CASE("lu_determinant equals product of schur eigenvalues") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        DenseMatrix a = random_matrix(rng, 5);
        auto eigs = real_schur(a).eigenvalues;
        Complex prod(1.0, 0.0);
        for (const auto& e : eigs) prod *= e;
        double det = lu_determinant(a);
        CHECK(std::fabs(prod.real() - det) <= 1e-8 * std::max(1.0, std::fabs(det)));
    }
}

TEST_CASE("numerical_rank") {
    CHECK(numerical_rank(DenseMatrix::identity(4), 1e-10) == 4);
    CHECK(numerical_rank(DenseMatrix{{1, 2}, {2, 4}}, 1e-10) == 1);
    // [B1, A B1] for example 1
    CHECK(numerical_rank(DenseMatrix{{1, 2}, {0, 1}}, 1e-10) == 2);
    CHECK(numerical_rank(DenseMatrix(0, 0), 1e-10) == 0);
}

#include "roasel/care.hpp"

#include <cmath>

namespace roasel {

double care_residual(const DenseMatrix& a, const DenseMatrix& b,
                     const DenseMatrix& q, double r, const DenseMatrix& p) {
    DenseMatrix at = a.transpose();
    DenseMatrix pb = p * b;
    DenseMatrix res = at * p + p * a - (1.0 / r) * (pb * pb.transpose()) + q;
    return res.frobenius_norm();
}

RiccatiSolution solve_care(const DenseMatrix& a, const DenseMatrix& b,
                           const DenseMatrix& q, double r, double residual_tol) {
    if (!a.square()) throw DimensionError("solve_care: a must be square");
    const int m = a.rows();
    if (b.rows() != m || b.cols() != 1) throw DimensionError("solve_care: b must be m x 1");
    if (q.rows() != m || q.cols() != m) throw DimensionError("solve_care: q must be m x m");
    if (r <= 0.0) throw DomainError("solve_care: r must be positive");

    // Hamiltonian [[A, -BR⁻¹Bᵀ], [-Q, -Aᵀ]]
    DenseMatrix ham(2 * m, 2 * m);
    ham.set_block(0, 0, a);
    ham.set_block(0, m, (-1.0 / r) * (b * b.transpose()));
    ham.set_block(m, 0, -1.0 * q);
    ham.set_block(m, m, -1.0 * a.transpose());

    SchurForm s = real_schur(ham);
    SchurForm ordered = reorder_schur(s, [](Complex e) { return e.real() < 0.0; });
    int stable = 0;
    for (const auto& e : ordered.eigenvalues)
        if (e.real() < 0.0) ++stable;
    if (stable != m)
        throw NoStabilizingSolutionError("solve_care: Hamiltonian has no m-dimensional stable subspace");

    // Stable invariant subspace basis [X1; X2]; P = X2 X1⁻¹.
    DenseMatrix x1 = ordered.orthogonal.block(0, 0, m, m);
    DenseMatrix x2 = ordered.orthogonal.block(m, 0, m, m);
    DenseMatrix p;
    try {
        p = (solve_linear(x1.transpose(), x2.transpose())).transpose();  // X2 X1⁻¹
    } catch (const SingularMatrixError&) {
        throw NoStabilizingSolutionError("solve_care: invariant-subspace basis is singular (not stabilizable?)");
    }
    p = 0.5 * (p + p.transpose());

    // Newton refinement: Aclᵀ Δ + Δ Acl = -residual(P), P += Δ.
    double res = care_residual(a, b, q, r, p);
    for (int it = 0; it < 5 && res > 1e-14 * (1.0 + p.frobenius_norm()); ++it) {
        DenseMatrix pb = p * b;
        DenseMatrix k = (1.0 / r) * pb.transpose();
        DenseMatrix acl = a - b * k;
        DenseMatrix rhs = a.transpose() * p + p * a - (1.0 / r) * (pb * pb.transpose()) + q;
        DenseMatrix delta;
        try {
            delta = solve_sylvester(acl.transpose(), acl, rhs);
        } catch (const SingularMatrixError&) {
            break;
        }
        DenseMatrix cand = 0.5 * ((p + delta) + (p + delta).transpose());
        double cand_res = care_residual(a, b, q, r, cand);
        if (cand_res >= res) break;
        p = cand;
        res = cand_res;
    }

    RiccatiSolution sol;
    sol.p_matrix = p;
    sol.gain = (1.0 / r) * (b.transpose() * p);
    sol.residual_norm = res;
    DenseMatrix acl = a - b * sol.gain;
    sol.closed_loop_eigs = eigenvalues(acl);

    for (const auto& e : sol.closed_loop_eigs)
        if (e.real() >= 0.0)
            throw NoStabilizingSolutionError("solve_care: closed loop is not Hurwitz");
    const double pf = p.frobenius_norm();
    if (res > residual_tol * (1.0 + pf * pf))
        throw NoStabilizingSolutionError("solve_care: residual above tolerance");
    return sol;
}

}  // namespace roasel

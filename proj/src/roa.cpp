#include "roasel/roa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "roasel/threads.hpp"

namespace roasel {

double ellipsoid_radius(const DenseMatrix& p, const DenseMatrix& b, double r) {
    if (p.rows() != b.rows() || b.cols() != 1)
        throw DimensionError("ellipsoid_radius: incompatible shapes");
    DenseMatrix quad = b.transpose() * p * b;
    const double sigma = quad(0, 0);
    if (sigma <= 0.0) throw DomainError("ellipsoid_radius: degenerate input (BᵀPB <= 0)");
    return 4.0 * r * r / sigma;
}

double unit_ball_volume(int m) {
    if (m < 1) throw DomainError("unit_ball_volume: dimension must be >= 1");
    return std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
}

double ellipsoid_measure(const EllipsoidRoa& roa) {
    const int m = roa.dimension;
    const double det = lu_determinant(roa.shape);
    if (det <= 0.0) throw DomainError("ellipsoid_measure: shape not positive definite");
    if (m == 1) return 2.0 * std::sqrt(roa.radius / roa.shape(0, 0));
    return unit_ball_volume(m) * std::pow(roa.radius, m / 2.0) / std::sqrt(det);
}

EllipsoidRoa make_roa(const DenseMatrix& p, const DenseMatrix& b, double r) {
    EllipsoidRoa roa;
    roa.shape = p;
    roa.dimension = p.rows();
    DenseMatrix quad = b.transpose() * p * b;
    roa.input_quadratic = quad(0, 0);
    roa.radius = ellipsoid_radius(p, b, r);
    roa.measure = ellipsoid_measure(roa);
    return roa;
}

bool contains(const EllipsoidRoa& roa, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != roa.dimension)
        throw DimensionError("contains: state length mismatch");
    DenseMatrix xv(roa.dimension, 1, x);
    DenseMatrix v = xv.transpose() * roa.shape * xv;
    return v(0, 0) <= roa.radius;
}

std::vector<std::vector<double>> boundary_points(const EllipsoidRoa& roa, int count) {
    const int m = roa.dimension;
    if (m < 2) throw DomainError("boundary_points: dimension must be >= 2");
    if (count < 3) throw DomainError("boundary_points: count must be >= 3");

    std::vector<std::vector<double>> pts;
    pts.reserve(count);

    if (m == 2) {
        // Principal-axes parameterization: P = M D Mᵀ, boundary
        // x(θ) = M diag(sqrt(δ/λ)) (cosθ, sinθ).
        std::vector<double> lam;
        DenseMatrix vecs;
        symmetric_eigen(roa.shape, lam, vecs);
        // Nudge strictly inside so membership tests never flap on round-off.
        const double shrink = 1.0 - 1e-12;
        const double a0 = shrink * std::sqrt(roa.radius / lam[0]);
        const double a1 = shrink * std::sqrt(roa.radius / lam[1]);
        for (int i = 0; i < count; ++i) {
            const double th = 2.0 * std::numbers::pi * i / count;
            const double c0 = a0 * std::cos(th), c1 = a1 * std::sin(th);
            std::vector<double> x(2);
            x[0] = vecs(0, 0) * c0 + vecs(0, 1) * c1;
            x[1] = vecs(1, 0) * c0 + vecs(1, 1) * c1;
            pts.push_back(std::move(x));
        }
        return pts;
    }

    // m >= 3: additive-recurrence low-discrepancy directions mapped to the
    // boundary via x = sqrt(δ / dᵀPd) d.
    std::vector<double> alpha(m);
    double phi = 2.0;  // fixed point of x = (1+x)^(1/(m+1)), the R_m constant
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (m + 1));
    for (int j = 0; j < m; ++j) alpha[j] = std::fmod(std::pow(1.0 / phi, j + 1), 1.0);
    for (int i = 0; i < count; ++i) {
        std::vector<double> d(m);
        double norm = 0.0;
        for (int j = 0; j < m; ++j) {
            const double u = std::fmod((i + 1) * alpha[j], 1.0);
            // map uniform to a symmetric direction component
            d[j] = 2.0 * u - 1.0;
            norm += d[j] * d[j];
        }
        if (norm == 0.0) d[0] = 1.0;
        DenseMatrix dv(m, 1, d);
        DenseMatrix quad = dv.transpose() * roa.shape * dv;
        const double t = (1.0 - 1e-12) * std::sqrt(roa.radius / quad(0, 0));
        for (int j = 0; j < m; ++j) d[j] *= t;
        pts.push_back(std::move(d));
    }
    return pts;
}

namespace {

void finalize_report(DriverReport& rep) {
    double best = -1.0;
    int best_node = 0;
    for (const auto& rec : rep.records) {
        if (rec.excluded) continue;
        if (rec.measure > best || (rec.measure == best && rec.node < best_node)) {
            best = rec.measure;
            best_node = rec.node;
        }
    }
    if (best_node == 0) throw DomainError("rank_drivers: no valid candidates");
    rep.best_candidate = best_node;
    for (auto& rec : rep.records) {
        if (!rec.excluded && best > 0.0) rec.ratio = rec.measure / best;
    }
}

}  // namespace

DriverReport rank_drivers_antistable(const NetworkSpec& net, const AnalysisConfig& cfg) {
    net.validate();
    const double margin = cfg.antistable_margin;
    for (const auto& e : eigenvalues(net.adjacency)) {
        if (e.real() < margin)
            throw DomainError("rank_drivers_antistable: adjacency is not anti-stable; use the general path");
    }
    const int n = net.node_count;
    const DenseMatrix q = cfg.state_cost_or_identity(n);
    const int p = static_cast<int>(net.candidates.size());

    DriverReport rep;
    rep.mode = ReportMode::FullAntistable;
    rep.subsystem_order = n;
    rep.records.resize(p);

    const int nthreads = thread_count();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads) if (nthreads > 1)
    for (int i = 0; i < p; ++i) {
        DriverRecord rec;
        rec.node = net.candidates[i];
        DenseMatrix b = input_matrix(net, i);
        rec.controllable = is_controllable(net.adjacency, b, cfg.rank_tol);
        if (!rec.controllable) {
            rec.excluded = true;
            rec.exclusion_reason = "candidate does not control the network";
        } else {
            try {
                rec.riccati = solve_care(net.adjacency, b, q, cfg.input_cost, cfg.care_residual_tol);
                rec.roa = make_roa(rec.riccati.p_matrix, b, cfg.input_cost);
                rec.radius = rec.roa.radius;
                rec.sqrt_det = std::sqrt(lu_determinant(rec.riccati.p_matrix));
                rec.measure = rec.roa.measure;
            } catch (const Error& e) {
                rec.excluded = true;
                rec.exclusion_reason = e.what();
            }
        }
        rep.records[i] = std::move(rec);
    }
    finalize_report(rep);
    return rep;
}

DriverReport rank_drivers_general(const NetworkSpec& net, const AnalysisConfig& cfg) {
    net.validate();
    SubsystemSplit split = split_spectrum(net.adjacency, cfg.antistable_margin);
    const int n = net.node_count;

    if (split.k == n) return rank_drivers_antistable(net, cfg);

    if (split.k == 0) {
        DriverReport rep;
        rep.mode = ReportMode::Subsystem;
        rep.subsystem_order = 0;
        rep.globally_stabilizable = true;
        rep.best_candidate = 0;
        rep.split = split;
        for (int i = 0; i < static_cast<int>(net.candidates.size()); ++i) {
            DriverRecord rec;
            rec.node = net.candidates[i];
            rec.controllable = is_controllable(net.adjacency, input_matrix(net, i), cfg.rank_tol);
            rec.measure = std::numeric_limits<double>::infinity();
            rec.ratio = 1.0;
            rep.records.push_back(std::move(rec));
        }
        return rep;
    }

    const DenseMatrix q1 = cfg.subsystem_cost_or_identity(split.k);
    const int p = static_cast<int>(net.candidates.size());

    DriverReport rep;
    rep.mode = ReportMode::Subsystem;
    rep.subsystem_order = split.k;
    rep.split = split;
    rep.records.resize(p);

    const int nthreads = thread_count();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads) if (nthreads > 1)
    for (int i = 0; i < p; ++i) {
        DriverRecord rec;
        rec.node = net.candidates[i];
        DenseMatrix b = input_matrix(net, i);
        auto part = partition_input(split, b);
        rec.controllable = is_controllable(split.antistable_block, part.top, cfg.rank_tol);
        if (!rec.controllable) {
            rec.excluded = true;
            rec.exclusion_reason = "candidate does not control the anti-stable subsystem";
        } else {
            try {
                rec.riccati = solve_care(split.antistable_block, part.top,
                                         q1, cfg.subsystem_input_cost, cfg.care_residual_tol);
                rec.roa = make_roa(rec.riccati.p_matrix, part.top, cfg.subsystem_input_cost);
                rec.radius = rec.roa.radius;
                rec.sqrt_det = std::sqrt(lu_determinant(rec.riccati.p_matrix));
                rec.measure = rec.roa.measure;
            } catch (const Error& e) {
                rec.excluded = true;
                rec.exclusion_reason = e.what();
            }
        }
        rep.records[i] = std::move(rec);
    }
    finalize_report(rep);
    return rep;
}

}  // namespace roasel

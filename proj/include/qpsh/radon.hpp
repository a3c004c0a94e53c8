#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/SVD>

#include "qpsh/montecarlo.hpp"
#include "qpsh/spectral.hpp"

namespace qpsh {

/// Affine quaternionic hyperplane E = {q : sum conj(nu_i) q_i = p}, |nu| = 1.
/// (nu a, conj(a) p) describes the same set for |a| = 1.
struct Hyperplane {
    QVector nu;
    Quaternion p;

    static constexpr double kUnitTol = 1e-9;

    Hyperplane(QVector normal, Quaternion offset) : nu(std::move(normal)), p(offset) {
        if (std::abs(norm(nu) - 1.0) > kUnitTol) throw DomainError("hyperplane normal is not a unit vector");
    }

    std::size_t n() const { return nu.size(); }

    /// Point of E closest to the origin, nu p.
    QVector foot() const { return scale_right(nu, p); }

    bool contains(const QVector& q, double tol = 1e-9) const { return dist(inner(nu, q), p) <= tol; }

    /// The same hyperplane written with normal nu a, |a| = 1.
    Hyperplane regauged(const Quaternion& a) const { return {scale_right(nu, a), conj(a) * p}; }

    /// The hyperplane E + c.
    Hyperplane translated(const QVector& c) const { return {nu, p + inner(nu, c)}; }
};

/// Uniform direction on the unit sphere of H^n and Gaussian offset.
inline Hyperplane random_hyperplane(Rng& rng, std::size_t n, double offset_scale = 1.0) {
    QVector nu = random_qvector(rng, n);
    const double r = norm(nu);
    for (auto& e : nu) e = e / r;
    return {nu, rng.quaternion() * offset_scale};
}

/// Orthonormal basis w_1..w_{n-1} of the quaternionic complement of nu:
/// Gram-Schmidt of the standard basis against nu under sum conj(x_i) y_i.
inline std::vector<QVector> complement_basis(const QVector& nu) {
    const std::size_t n = nu.size();
    std::vector<QVector> basis{nu};
    for (std::size_t k = 0; k < n && basis.size() < n; ++k) {
        QVector e(n);
        e[k] = Quaternion::one();
        if (detail::orthonormalize_against(e, basis) > 0.1) basis.push_back(std::move(e));
    }
    if (basis.size() != n) throw NumericalDegeneracy("complement_basis: could not complete the basis");
    basis.erase(basis.begin());
    return basis;
}

inline constexpr double kRadonProposalScale = 2.0;

/// Monte-Carlo estimate of the integral of f over E with its metric volume.
/// E is parametrized isometrically as nu p + sum_k w_k c_k, c in R^{4(n-1)},
/// and c is drawn from N(0, scale^2 I) (importance sampling).
inline Estimate radon_transform(const ScalarField& f, const Hyperplane& plane, std::size_t samples, std::uint64_t seed,
                                double proposal_scale = kRadonProposalScale) {
    if (f.n() != plane.n()) throw SizeMismatch("radon_transform: field and hyperplane dimensions differ");
    const QVector foot = plane.foot();
    if (plane.n() == 1) return {f.value(to_coords(foot)), 0.0, 1};
    const auto basis = complement_basis(plane.nu);
    const std::size_t dim = 4 * basis.size();
    const double sigma2 = proposal_scale * proposal_scale;
    const double log_norm = 0.5 * static_cast<double>(dim) * std::log(2.0 * std::numbers::pi * sigma2);

    std::vector<RunningStats> partial(kPartitions);
    for_each_partition(kPartitions, [&](std::size_t p) {
        Rng rng(seed, "radon", p);
        const auto [begin, end] = partition_range(samples, kPartitions, p);
        std::vector<double> c(dim);
        for (std::size_t s = begin; s < end; ++s) {
            double c2 = 0.0;
            for (auto& v : c) {
                v = proposal_scale * rng.normal();
                c2 += v * v;
            }
            QVector q = foot;
            for (std::size_t k = 0; k < basis.size(); ++k) {
                const Quaternion coeff(c[4 * k], c[4 * k + 1], c[4 * k + 2], c[4 * k + 3]);
                for (std::size_t i = 0; i < q.size(); ++i) q[i] += basis[k][i] * coeff;
            }
            const double inv_pdf = std::exp(log_norm + 0.5 * c2 / sigma2);
            partial[p].add(f.value(to_coords(q)) * inv_pdf);
        }
    });
    RunningStats total;
    for (const auto& s : partial) total.merge(s);
    return {total.mean(), total.std_error(), total.count()};
}

struct InjectivityCertificate {
    std::vector<double> singular_values;  ///< descending
    std::size_t rank = 0;
    bool pass = false;
};

inline constexpr double kRankThreshold = 1e-6;

/// Rank of M[e, b] = R(basis_b)(plane_e).  Every basis field on plane e is
/// integrated on the same sample points, so duplicated fields give identical
/// columns and are rejected.
inline InjectivityCertificate injectivity_certificate(const std::vector<ScalarField>& basis,
                                                      const std::vector<Hyperplane>& planes, std::size_t samples,
                                                      std::uint64_t seed, double proposal_scale = kRadonProposalScale) {
    if (planes.size() < basis.size()) throw DomainError("injectivity_certificate: fewer planes than basis fields");
    const auto rows = static_cast<Eigen::Index>(planes.size());
    const auto cols = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index e = 0; e < rows; ++e)
        for (Eigen::Index b = 0; b < cols; ++b)
            m(e, b) = radon_transform(basis[static_cast<std::size_t>(b)], planes[static_cast<std::size_t>(e)], samples,
                                      derive_seed(seed, "radon-plane", static_cast<std::uint64_t>(e)), proposal_scale)
                          .value;
    for (Eigen::Index a = 0; a < cols; ++a)
        for (Eigen::Index b = a + 1; b < cols; ++b)
            if (m.col(a) == m.col(b)) throw DomainError("injectivity_certificate: degenerate basis (duplicate fields)");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& sv = svd.singularValues();
    InjectivityCertificate out;
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    const double top = sv.size() ? sv(0) : 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > kRankThreshold * top) ++out.rank;
    out.pass = out.rank == basis.size();
    return out;
}

}  // namespace qpsh

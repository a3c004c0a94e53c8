#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qpsh/parallel.hpp"
#include "qpsh/random.hpp"
#include "qpsh/spectral.hpp"

namespace qpsh {

/// Real basis of the n(2n-1)-dimensional space of hyperhermitian n x n
/// matrices: the diagonal units E_ii, then for each i < j the four matrices
/// with e in (1, i, j, k) at (i, j) and conj(e) at (j, i).
inline std::vector<HHMatrix> hh_basis(std::size_t n) {
    std::vector<HHMatrix> out;
    out.reserve(n * (2 * n - 1));
    for (std::size_t i = 0; i < n; ++i) {
        HHMatrix e(n);
        e.set(i, i, Quaternion(1.0));
        out.push_back(e);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (int c = 0; c < 4; ++c) {
                HHMatrix e(n);
                e.set(i, j, Quaternion::unit(c));
                out.push_back(e);
            }
    return out;
}

namespace detail {

inline void check_slots(const std::vector<HHMatrix>& slots) {
    const std::size_t n = slots.size();
    for (const auto& a : slots)
        if (a.size() != n) throw SizeMismatch("mixed discriminant needs n matrices of size n x n");
}

inline double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

}  // namespace detail

/// det(A_1, ..., A_n) by inclusion-exclusion:
/// (1/n!) sum_{S subset [n]} (-1)^{n-|S|} det(sum_{i in S} A_i).
/// With no slots (n = 0) the value is 1.
inline double mixed_discriminant(const std::vector<HHMatrix>& slots) {
    detail::check_slots(slots);
    const std::size_t n = slots.size();
    if (n == 0) return 1.0;
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        HHMatrix sum(n);
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) {
                sum += slots[i];
                ++count;
            }
        const double sign = ((n - count) % 2 == 0) ? 1.0 : -1.0;
        total += sign * moore_det(sum);
    }
    return total / detail::factorial(n);
}

/// Same quantity by tensor-grid interpolation of P(l) = det(sum l_i A_i):
/// each l_i runs over the nodes 0..n and is weighted by the linear
/// coefficient of the matching Lagrange basis polynomial.  Cost (n+1)^n
/// Moore determinants.
inline double mixed_discriminant_interpolated(const std::vector<HHMatrix>& slots) {
    detail::check_slots(slots);
    const std::size_t n = slots.size();
    if (n == 0) return 1.0;
    const std::size_t nodes = n + 1;
    std::vector<double> weight(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        // coefficients of prod_{m != k} (x - m) / (k - m), low order first
        std::vector<double> poly{1.0};
        for (std::size_t m = 0; m < nodes; ++m) {
            if (m == k) continue;
            const double denom = static_cast<double>(k) - static_cast<double>(m);
            std::vector<double> next(poly.size() + 1, 0.0);
            for (std::size_t d = 0; d < poly.size(); ++d) {
                next[d + 1] += poly[d] / denom;
                next[d] -= poly[d] * static_cast<double>(m) / denom;
            }
            poly = std::move(next);
        }
        weight[k] = poly[1];
    }
    std::vector<std::size_t> idx(n, 0);
    double total = 0.0;
    while (true) {
        double w = 1.0;
        HHMatrix sum(n);
        for (std::size_t i = 0; i < n; ++i) {
            w *= weight[idx[i]];
            if (idx[i] != 0) sum += slots[i] * static_cast<double>(idx[i]);
        }
        if (w != 0.0) total += w * moore_det(sum);
        std::size_t p = 0;
        while (p < n && ++idx[p] == nodes) idx[p++] = 0;
        if (p == n) break;
    }
    return total / detail::factorial(n);
}

struct Inertia {
    std::size_t plus = 0;
    std::size_t minus = 0;
    std::size_t zero = 0;
    friend bool operator==(const Inertia&, const Inertia&) = default;
};

inline constexpr double kInertiaZeroTol = 1e-8;

inline void require_positive_definite(const std::vector<HHMatrix>& mats, const char* what) {
    for (const auto& a : mats)
        if (!(min_eigenvalue(a) > 0.0)) throw PreconditionFailure(std::string(what) + ": matrix is not positive definite");
}

/// Gram matrix of B(X, Y) = det(X, Y, A_1, ..., A_{n-2}) over hh_basis(n).
inline Eigen::MatrixXd aleksandrov_gram(const std::vector<HHMatrix>& fixed, std::size_t n) {
    if (n < 2 || fixed.size() + 2 != n) throw SizeMismatch("aleksandrov form needs n - 2 fixed matrices, n >= 2");
    const auto basis = hh_basis(n);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd gram(dim, dim);
    std::vector<HHMatrix> slots(n);
    std::copy(fixed.begin(), fixed.end(), slots.begin() + 2);
    for (Eigen::Index a = 0; a < dim; ++a)
        for (Eigen::Index b = a; b < dim; ++b) {
            slots[0] = basis[static_cast<std::size_t>(a)];
            slots[1] = basis[static_cast<std::size_t>(b)];
            gram(a, b) = gram(b, a) = mixed_discriminant(slots);
        }
    return gram;
}

/// Inertia of the Aleksandrov form for positive definite A_1..A_{n-2};
/// eigenvalues below 1e-8 * spectral radius count as zero.
inline Inertia aleksandrov_signature(const std::vector<HHMatrix>& fixed, std::size_t n) {
    require_positive_definite(fixed, "aleksandrov_signature");
    const Eigen::MatrixXd gram = aleksandrov_gram(fixed, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& w = solver.eigenvalues();
    const double radius = w.cwiseAbs().maxCoeff();
    Inertia out;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        if (std::abs(w(k)) <= kInertiaZeroTol * radius)
            ++out.zero;
        else if (w(k) > 0.0)
            ++out.plus;
        else
            ++out.minus;
    }
    return out;
}

struct AleksandrovCheck {
    double lhs = 0.0;    ///< det(A_1..A_{n-1}, X)^2
    double rhs = 0.0;    ///< det(A_1..A_{n-1}, A_{n-1}) det(A_1..A_{n-2}, X, X)
    double gap = 0.0;    ///< lhs - rhs
    double scale = 0.0;  ///< max(|lhs|, |rhs|)
};

inline AleksandrovCheck aleksandrov_inequality_check(const std::vector<HHMatrix>& fixed, const HHMatrix& x) {
    const std::size_t n = x.size();
    if (n < 2 || fixed.size() + 1 != n) throw SizeMismatch("aleksandrov inequality needs n - 1 fixed matrices, n >= 2");
    require_positive_definite(fixed, "aleksandrov_inequality_check");
    std::vector<HHMatrix> slots = fixed;
    slots.push_back(x);
    const double mixed_x = mixed_discriminant(slots);
    slots.back() = fixed.back();
    const double mixed_a = mixed_discriminant(slots);
    slots[n - 2] = x;
    slots[n - 1] = x;
    const double mixed_xx = mixed_discriminant(slots);
    AleksandrovCheck out;
    out.lhs = mixed_x * mixed_x;
    out.rhs = mixed_a * mixed_xx;
    out.gap = out.lhs - out.rhs;
    out.scale = std::max(std::abs(out.lhs), std::abs(out.rhs));
    return out;
}

/// 2 D(M'_IJ(A)) against D(M'_II(A)) + D(M'_JJ(A)).
inline SidePair minor_inequality_check(const HHMatrix& a, const std::vector<std::size_t>& rows,
                                       const std::vector<std::size_t>& cols) {
    if (rows.size() != cols.size()) throw SizeMismatch("minor_inequality_check: |I| != |J|");
    SidePair out;
    out.lhs = 2.0 * dieudonne_det(minor(a.matrix(), MinorSpec::keeping(rows, cols)));
    out.rhs = dieudonne_det(minor(a.matrix(), MinorSpec::keeping(rows, rows))) +
              dieudonne_det(minor(a.matrix(), MinorSpec::keeping(cols, cols)));
    return out;
}

/// All k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask)
        if (static_cast<std::size_t>(std::popcount(mask)) == k) out.push_back(subset_of_mask(mask, n));
    return out;
}

inline constexpr double kRatioFloor = 1e-10;

/// Ratio |det(A, B, ..., B)| / (max|a_ij| sum_{|I|=|J|=n-1} D(M'_IJ(B))).
/// Returns 0 when the numerator vanishes; the denominator must be positive.
inline double cn_ratio_single_b(const HHMatrix& a, const HHMatrix& b) {
    const std::size_t n = a.size();
    std::vector<HHMatrix> slots(n, b);
    slots[0] = a;
    const double num = std::abs(mixed_discriminant(slots));
    if (num == 0.0) return 0.0;
    double denom = 0.0;
    for (const auto& rows : subsets_of_size(n, n - 1))
        for (const auto& cols : subsets_of_size(n, n - 1))
            denom += dieudonne_det(minor(b.matrix(), MinorSpec::keeping(rows, cols)));
    // Singular minors force a vanishing numerator; the ratio carries no
    // information there.
    if (denom <= kRatioFloor * std::pow(1.0 + b.max_entry_norm(), static_cast<double>(n - 1))) return 0.0;
    return num / (a.max_entry_norm() * denom);
}

/// Ratio |det(A, B_1, ..., B_{n-1})| / (max|a_ij| sum_{i_1..i_{n-1}} sum_{|I|=n-1}
/// det_I(B_{i_1}, ..., B_{i_{n-1}})), det_I the mixed discriminant of the
/// principal (n-1) x (n-1) minors kept on I.
inline double cn_ratio_many_b(const HHMatrix& a, const std::vector<HHMatrix>& bs) {
    const std::size_t n = a.size();
    if (bs.size() + 1 != n) throw SizeMismatch("cn_ratio_many_b: needs n - 1 matrices B");
    std::vector<HHMatrix> slots{a};
    slots.insert(slots.end(), bs.begin(), bs.end());
    const double num = std::abs(mixed_discriminant(slots));
    if (num == 0.0) return 0.0;
    const std::size_t m = n - 1;
    double denom = 0.0;
    if (m == 0) {
        denom = 1.0;
    } else {
        const auto kept_sets = subsets_of_size(n, m);
        // Multisets of indices with their multinomial multiplicities; the
        // mixed discriminant is symmetric in its slots.
        std::vector<std::size_t> idx(m, 0);
        while (true) {
            std::vector<std::size_t> counts(m, 0);
            for (std::size_t v : idx) ++counts[v];
            double multiplicity = detail::factorial(m);
            for (std::size_t c : counts) multiplicity /= detail::factorial(c);
            for (const auto& kept : kept_sets) {
                std::vector<HHMatrix> minors;
                minors.reserve(m);
                for (std::size_t v : idx) minors.push_back(principal_minor_keeping(bs[v], kept));
                denom += multiplicity * mixed_discriminant(minors);
            }
            // next non-decreasing index tuple
            std::size_t p = m;
            while (p > 0 && idx[p - 1] == m - 1) --p;
            if (p == 0) break;
            const std::size_t v = idx[p - 1] + 1;
            for (std::size_t q = p - 1; q < m; ++q) idx[q] = v;
        }
    }
    double b_scale = 0.0;
    for (const auto& b : bs) b_scale = std::max(b_scale, b.max_entry_norm());
    if (denom <= kRatioFloor * std::pow(1.0 + b_scale, static_cast<double>(m))) return 0.0;
    return num / (a.max_entry_norm() * denom);
}

struct CnEstimate {
    double single_b = 0.0;  ///< empirical sup of cn_ratio_single_b
    double many_b = 0.0;    ///< empirical sup of cn_ratio_many_b
};

/// Monte-Carlo suprema of the two bounded ratios over Gaussian A and
/// Gaussian-generated PSD B's of random rank.  Partitions draw from
/// independent substreams and are merged by max.
inline CnEstimate cn_ratio_estimator(std::size_t n, std::size_t samples, std::uint64_t seed) {
    if (n == 0) throw DomainError("cn_ratio_estimator: n must be positive");
    std::vector<CnEstimate> partial(kPartitions);
    for_each_partition(kPartitions, [&](std::size_t p) {
        Rng rng(seed, "cn-ratio", p);
        const auto [begin, end] = partition_range(samples, kPartitions, p);
        for (std::size_t s = begin; s < end; ++s) {
            const HHMatrix a = random_hh(rng, n);
            if (a.max_entry_norm() == 0.0) continue;
            const HHMatrix b = random_psd(rng, n, 1 + rng.index(n));
            std::vector<HHMatrix> bs;
            for (std::size_t k = 0; k + 1 < n; ++k) bs.push_back(random_psd(rng, n, 1 + rng.index(n)));
            partial[p].single_b = std::max(partial[p].single_b, cn_ratio_single_b(a, b));
            partial[p].many_b = std::max(partial[p].many_b, cn_ratio_many_b(a, bs));
        }
    });
    CnEstimate out;
    for (const auto& e : partial) {
        out.single_b = std::max(out.single_b, e.single_b);
        out.many_b = std::max(out.many_b, e.many_b);
    }
    return out;
}

}  // namespace qpsh

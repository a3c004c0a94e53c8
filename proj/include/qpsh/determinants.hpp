#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qpsh/matrix.hpp"

namespace qpsh {

// ---------------------------------------------------------------------------
// Minors.  Indices are 0-based.
// ---------------------------------------------------------------------------

enum class MinorMode {
    Delete,  ///< remove the listed rows and columns (M_I, M_{I,J})
    Keep,    ///< keep the listed rows and columns (M'_{IJ})
};

struct MinorSpec {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    MinorMode mode = MinorMode::Delete;

    static MinorSpec deleting(std::vector<std::size_t> idx) { return {idx, idx, MinorMode::Delete}; }
    static MinorSpec deleting(std::vector<std::size_t> r, std::vector<std::size_t> c) {
        return {std::move(r), std::move(c), MinorMode::Delete};
    }
    static MinorSpec keeping(std::vector<std::size_t> r, std::vector<std::size_t> c) {
        return {std::move(r), std::move(c), MinorMode::Keep};
    }
};

namespace detail {

inline std::vector<std::size_t> normalized_set(std::vector<std::size_t> s, std::size_t n) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (!s.empty() && s.back() >= n) throw DomainError("minor index out of range");
    return s;
}

inline std::vector<std::size_t> complement(const std::vector<std::size_t>& s, std::size_t n) {
    std::vector<std::size_t> out;
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p < s.size() && s[p] == i) {
            ++p;
            continue;
        }
        out.push_back(i);
    }
    return out;
}

inline QMatrix take(const QMatrix& a, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    if (rows.size() != cols.size()) throw SizeMismatch("minor is not square");
    QMatrix out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = a(rows[r], cols[c]);
    return out;
}

}  // namespace detail

/// Square submatrix selected by `spec`; the result may be the empty matrix.
inline QMatrix minor(const QMatrix& a, const MinorSpec& spec) {
    auto rows = detail::normalized_set(spec.rows, a.size());
    auto cols = detail::normalized_set(spec.cols, a.size());
    if (spec.mode == MinorMode::Delete) {
        rows = detail::complement(rows, a.size());
        cols = detail::complement(cols, a.size());
    }
    return detail::take(a, rows, cols);
}

/// Principal minor M_I(A) (rows and columns in I deleted).
inline HHMatrix principal_minor_deleting(const HHMatrix& a, const std::vector<std::size_t>& deleted) {
    return HHMatrix::symmetrized(minor(a.matrix(), MinorSpec::deleting(deleted)));
}

/// Principal minor M'_{II}(A) (rows and columns in I kept).
inline HHMatrix principal_minor_keeping(const HHMatrix& a, const std::vector<std::size_t>& kept) {
    return HHMatrix::symmetrized(minor(a.matrix(), MinorSpec::keeping(kept, kept)));
}

/// Members of the subset encoded by the bitmask `mask`.
inline std::vector<std::size_t> subset_of_mask(std::size_t mask, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::size_t{1} << i)) out.push_back(i);
    return out;
}

// ---------------------------------------------------------------------------
// Dieudonne determinant
// ---------------------------------------------------------------------------

struct DieudonneResult {
    double value = 0.0;  ///< D(X) >= 0, identified with R_{>0} via |.|
    std::size_t rank = 0;
};

inline constexpr double kDieudonneSingularTol = 1e-12;

/// Row echelon reduction with largest-modulus partial pivoting.  Rows are
/// combined by left scalar multiplication, row_i -= (a_ik a_kk^-1) row_k,
/// i.e. by elementary matrices acting on the left, which have D = 1.  A
/// pivot below 1e-12 * (1 + max initial entry norm) counts as zero.
inline DieudonneResult dieudonne(const QMatrix& x) {
    const std::size_t n = x.size();
    if (n == 0) return {1.0, 0};
    QMatrix a = x;
    const double threshold = kDieudonneSingularTol * (1.0 + x.max_entry_norm());
    double product = 1.0;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < n; ++col) {
        std::size_t best = rank;
        double best_abs = -1.0;
        for (std::size_t r = rank; r < n; ++r) {
            const double v = abs(a(r, col));
            if (v > best_abs) {
                best_abs = v;
                best = r;
            }
        }
        if (best_abs <= threshold) continue;
        if (best != rank)
            for (std::size_t c = 0; c < n; ++c) std::swap(a(best, c), a(rank, c));
        const Quaternion pivot_inv = inv(a(rank, col));
        for (std::size_t r = rank + 1; r < n; ++r) {
            const Quaternion factor = a(r, col) * pivot_inv;
            a(r, col) = Quaternion();
            for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= factor * a(rank, c);
        }
        product *= best_abs;
        ++rank;
    }
    return {rank == n ? product : 0.0, rank};
}

inline double dieudonne_det(const QMatrix& x) { return dieudonne(x).value; }

// ---------------------------------------------------------------------------
// Moore determinant
// ---------------------------------------------------------------------------

inline constexpr double kPairingTol = 1e-7;

struct MooreResult {
    double value = 1.0;
    std::vector<double> eigenvalues;  ///< one per conjugate pair, ascending
    double max_pair_gap = 0.0;        ///< relative to the spectral radius
};

/// Eigenvalues of the complex adjoint of a hyperhermitian matrix, paired.
/// Throws PairingFailure when |l_2m - l_2m+1| exceeds 1e-7 * spectral radius.
inline MooreResult paired_eigenvalues(const HHMatrix& a) {
    MooreResult out;
    const std::size_t n = a.size();
    if (n == 0) return out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(complexify(a.matrix()), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalDegeneracy("complex adjoint eigen-solver failed");
    const Eigen::VectorXd& w = solver.eigenvalues();
    const double radius = std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
    out.eigenvalues.resize(n);
    out.value = 1.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double lo = w(static_cast<Eigen::Index>(2 * m));
        const double hi = w(static_cast<Eigen::Index>(2 * m + 1));
        const double gap = hi - lo;
        if (gap > kPairingTol * radius)
            throw PairingFailure("eigenvalues of the complex adjoint do not pair up");
        if (radius > 0.0) out.max_pair_gap = std::max(out.max_pair_gap, gap / radius);
        out.eigenvalues[m] = 0.5 * (lo + hi);
        out.value *= out.eigenvalues[m];
    }
    return out;
}

/// Moore determinant: product of the paired eigenvalues of the complex
/// adjoint.  The empty matrix has determinant 1.
inline double moore_det(const HHMatrix& a) { return paired_eigenvalues(a).value; }

// ---------------------------------------------------------------------------
// Identity checks
// ---------------------------------------------------------------------------

struct SidePair {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// det(A + diag(t)) against sum_I (prod_{i in I} t_i) det M_I(A).
inline SidePair expansion_check(const HHMatrix& a, const std::vector<double>& t) {
    const std::size_t n = a.size();
    if (t.size() != n) throw SizeMismatch("expansion_check: |t| != n");
    SidePair out;
    out.lhs = moore_det(add_diagonal(a, t));
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        const auto subset = subset_of_mask(mask, n);
        double weight = 1.0;
        for (std::size_t i : subset) weight *= t[i];
        if (weight == 0.0) continue;
        out.rhs += weight * moore_det(principal_minor_deleting(a, subset));
    }
    return out;
}

enum class Axis { Row, Column };

/// D(A) against sum_i |a_{r,i}| D(M_{r,i}) (or the column analogue).
inline SidePair row_subadditivity_check(const QMatrix& a, std::size_t index, Axis axis = Axis::Row) {
    const std::size_t n = a.size();
    if (index >= n) throw DomainError("row_subadditivity_check: index out of range");
    SidePair out;
    out.lhs = dieudonne_det(a);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = axis == Axis::Row ? index : i;
        const std::size_t c = axis == Axis::Row ? i : index;
        const double coeff = abs(a(r, c));
        if (coeff == 0.0) continue;
        out.rhs += coeff * dieudonne_det(minor(a, MinorSpec::deleting({r}, {c})));
    }
    return out;
}

struct ConcavityCheck {
    SidePair superadditive;  ///< det(A+B) >= det A + det B
    SidePair log_midpoint;   ///< log det((A+B)/2) >= (log det A + log det B)/2
    SidePair root_midpoint;  ///< det((A+B)/2)^{1/n} >= (det^{1/n} A + det^{1/n} B)/2
};

/// Evaluates the three concavity statements on a pair of positive definite
/// matrices.  lhs >= rhs is the expected direction of each.
inline ConcavityCheck concavity_check(const HHMatrix& a, const HHMatrix& b) {
    if (a.size() != b.size()) throw SizeMismatch("concavity_check: sizes differ");
    const double n = static_cast<double>(a.size());
    const double da = moore_det(a);
    const double db = moore_det(b);
    const double dsum = moore_det(a + b);
    const double dmid = moore_det((a + b) * 0.5);
    if (!(da > 0.0 && db > 0.0)) throw PreconditionFailure("concavity_check: inputs must be positive definite");
    ConcavityCheck out;
    out.superadditive = {dsum, da + db};
    out.log_midpoint = {std::log(dmid), 0.5 * (std::log(da) + std::log(db))};
    out.root_midpoint = {std::pow(dmid, 1.0 / n), 0.5 * (std::pow(da, 1.0 / n) + std::pow(db, 1.0 / n))};
    return out;
}

}  // namespace qpsh

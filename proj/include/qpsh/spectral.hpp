#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qpsh/determinants.hpp"

namespace qpsh {

/// A = C diag(lambda) C*, C*C = Id.
struct HHEigenDecomposition {
    std::vector<double> lambda;  ///< ascending
    QMatrix C;                   ///< eigenvectors as columns, C in Sp(n)
};

inline constexpr double kClusterTol = 1e-7;
inline constexpr double kOrthonormalityTol = 1e-7;

namespace detail {

/// Complex adjoint eigenvector [u; w] -> quaternionic vector u - conj(w) j.
/// This inverts the a + b j split used by complexify(), so A x = x lambda.
inline QVector quaternionic_from_adjoint(const Eigen::VectorXcd& v, std::size_t n) {
    QVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto u = v(static_cast<Eigen::Index>(i));
        const auto w = v(static_cast<Eigen::Index>(n + i));
        // u - conj(w) j = (Re u + Im u i) + (-Re w + Im w i) j
        x[i] = Quaternion(u.real(), u.imag(), -w.real(), w.imag());
    }
    return x;
}

/// Projects `v` off the orthonormal set `basis` (right scalars) and
/// returns its residual norm; `v` is normalized in place when nonzero.
inline double orthonormalize_against(QVector& v, const std::vector<QVector>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) {
            const Quaternion c = inner(b, v);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b[i] * c;
        }
    const double r = norm(v);
    if (r > 0.0)
        for (auto& e : v) e = e / r;
    return r;
}

}  // namespace detail

/// Spectral decomposition of a hyperhermitian matrix via its complex
/// adjoint.  Within an eigenvalue cluster (gap <= 1e-7 * spectral radius)
/// every adjoint eigenvector is lifted and Gram-Schmidt keeps a quaternionic
/// basis of the cluster.
inline HHEigenDecomposition hh_eigen(const HHMatrix& a) {
    const std::size_t n = a.size();
    HHEigenDecomposition out;
    out.C = QMatrix(n);
    if (n == 0) return out;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(complexify(a.matrix()));
    if (solver.info() != Eigen::Success) throw NumericalDegeneracy("complex adjoint eigen-solver failed");
    const Eigen::VectorXd& w = solver.eigenvalues();
    const Eigen::MatrixXcd& vecs = solver.eigenvectors();
    const double radius = std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));

    out.lambda.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double lo = w(static_cast<Eigen::Index>(2 * m));
        const double hi = w(static_cast<Eigen::Index>(2 * m + 1));
        if (hi - lo > kPairingTol * radius) throw PairingFailure("hh_eigen: eigenvalues do not pair up");
        out.lambda[m] = 0.5 * (lo + hi);
    }

    std::vector<QVector> basis;
    basis.reserve(n);
    std::size_t m = 0;
    while (m < n) {
        std::size_t end = m + 1;
        while (end < n && out.lambda[end] - out.lambda[end - 1] <= kClusterTol * radius) ++end;
        const std::size_t wanted = end - m;
        std::size_t found = 0;
        for (std::size_t c = 2 * m; c < 2 * end && found < wanted; ++c) {
            QVector x = detail::quaternionic_from_adjoint(vecs.col(static_cast<Eigen::Index>(c)), n);
            if (detail::orthonormalize_against(x, basis) > 1e-3) {
                basis.push_back(std::move(x));
                ++found;
            }
        }
        if (found != wanted) throw NumericalDegeneracy("hh_eigen: could not span an eigenvalue cluster");
        m = end;
    }

    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) out.C(r, c) = basis[c][r];

    const double defect = max_entry_diff(conj_transpose(out.C) * out.C, QMatrix::identity(n));
    if (defect > kOrthonormalityTol) throw NumericalDegeneracy("hh_eigen: eigenvector basis lost orthonormality");
    return out;
}

inline double min_eigenvalue(const HHMatrix& a) {
    if (a.size() == 0) return 0.0;
    const auto paired = paired_eigenvalues(a);
    return paired.eigenvalues.front();
}

enum class Definiteness { Positive, NotPositive, Indeterminate };

struct SylvesterResult {
    Definiteness verdict = Definiteness::Indeterminate;
    std::vector<double> leading_minors;  ///< det of the top-left k x k blocks, k = 1..n
    double margin = 0.0;

    bool positive_definite() const { return verdict == Definiteness::Positive; }
};

/// Margin of the Sylvester test: 1e-10 * (1 + max entry norm)^n.
inline double sylvester_margin(const HHMatrix& a) {
    return 1e-10 * std::pow(1.0 + a.max_entry_norm(), static_cast<double>(a.size()));
}

/// Quaternionic Sylvester criterion on leading principal minors.  A minor
/// within +-margin of zero makes the verdict indeterminate unless an earlier
/// minor is already clearly negative.
inline SylvesterResult sylvester(const HHMatrix& a) {
    SylvesterResult out;
    out.margin = sylvester_margin(a);
    const std::size_t n = a.size();
    bool indeterminate = false;
    bool negative = false;
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<std::size_t> kept(k);
        for (std::size_t i = 0; i < k; ++i) kept[i] = i;
        const double d = moore_det(principal_minor_keeping(a, kept));
        out.leading_minors.push_back(d);
        if (d < -out.margin)
            negative = true;
        else if (d <= out.margin)
            indeterminate = true;
    }
    if (negative)
        out.verdict = Definiteness::NotPositive;
    else if (indeterminate)
        out.verdict = Definiteness::Indeterminate;
    else
        out.verdict = Definiteness::Positive;
    return out;
}

/// True iff every leading principal minor exceeds the margin.
inline bool sylvester_pd(const HHMatrix& a) { return sylvester(a).positive_definite(); }

/// min eigenvalue >= -margin
inline bool is_psd(const HHMatrix& a, double margin) { return min_eigenvalue(a) >= -margin; }

}  // namespace qpsh

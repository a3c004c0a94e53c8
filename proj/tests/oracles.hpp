#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "qpsh/field.hpp"
#include "qpsh/matrix.hpp"

namespace qpsh::oracle {

/// Moore determinant by symmetric quaternionic Gaussian elimination: with a
/// real pivot a_kk, U*AU = diag(a_kk, S), S the Schur complement, and
/// det(U*U) = 1 for unipotent U.  Symmetric permutations do not change det.
inline double moore_det_schur(const HHMatrix& input) {
    QMatrix a = input.matrix();
    std::size_t n = a.size();
    double det = 1.0;
    while (n > 0) {
        std::size_t pivot = 0;
        for (std::size_t k = 1; k < n; ++k)
            if (std::abs(a(k, k).t) > std::abs(a(pivot, pivot).t)) pivot = k;
        const double p = a(pivot, pivot).t;
        if (p == 0.0) return 0.0;
        det *= p;
        QMatrix s(n - 1);
        std::vector<std::size_t> rest;
        for (std::size_t k = 0; k < n; ++k)
            if (k != pivot) rest.push_back(k);
        for (std::size_t r = 0; r < n - 1; ++r)
            for (std::size_t c = 0; c < n - 1; ++c)
                s(r, c) = a(rest[r], rest[c]) - a(rest[r], pivot) * a(pivot, rest[c]) / p;
        a = s;
        --n;
    }
    return det;
}

/// Dieudonne determinant as the square root of the Study determinant
/// |det complexify(X)|.
inline double dieudonne_study(const QMatrix& x) {
    if (x.size() == 0) return 1.0;
    return std::sqrt(std::abs(complexify(x).determinant()));
}

/// Central finite-difference Hessian of the field value.
inline Eigen::MatrixXd fd_hessian(const ScalarField& f, const Point& x, double h = 1e-4) {
    const auto d = x.size();
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) {
            Point pp = x, pm = x, mp = x, mm = x;
            pp(a) += h; pp(b) += h;
            pm(a) += h; pm(b) -= h;
            mp(a) -= h; mp(b) += h;
            mm(a) -= h; mm(b) -= h;
            out(a, b) = (f.value(pp) - f.value(pm) - f.value(mp) + f.value(mm)) / (4 * h * h);
        }
    return out;
}

inline Eigen::VectorXd fd_gradient(const ScalarField& f, const Point& x, double h = 1e-5) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index a = 0; a < x.size(); ++a) {
        Point p = x, m = x;
        p(a) += h;
        m(a) -= h;
        g(a) = (f.value(p) - f.value(m)) / (2 * h);
    }
    return g;
}

/// Composite Simpson rule on [lo, hi] with an even number of panels.
template <class F>
double simpson(F&& f, double lo, double hi, int panels = 2000) {
    const double h = (hi - lo) / panels;
    double s = f(lo) + f(hi);
    for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(lo + k * h);
    return s * h / 3.0;
}

/// Integral over R^d of a radial function g(|x|^2) supported in |x| <= r.
template <class G>
double radial_integral(G&& g, int d, double r) {
    const double sphere = 2.0 * std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0);
    return sphere * simpson([&](double t) { return g(t * t) * std::pow(t, d - 1); }, 0.0, r);
}

}  // namespace qpsh::oracle

namespace qpsh::oracle {

/// Closed-form plane integral of amplitude * exp(-|q - c|^2 / (2 w^2)) over
/// {q : <nu, q> = p}: the Gaussian splits along E and its normal fiber.
inline double gaussian_plane_integral(const QVector& center, double width, double amplitude, const QVector& nu,
                                      const Quaternion& p) {
    Quaternion s;
    for (std::size_t i = 0; i < nu.size(); ++i) s += conj(nu[i]) * center[i];
    const double dim = 4.0 * static_cast<double>(nu.size() - 1);
    return amplitude * std::pow(2.0 * M_PI * width * width, dim / 2.0) * std::exp(-norm2(p - s) / (2.0 * width * width));
}

}  // namespace qpsh::oracle

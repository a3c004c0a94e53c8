#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpsh/error.hpp"
#include "qpsh/quaternion.hpp"

namespace qpsh {

using QVector = std::vector<Quaternion>;

/// Square quaternionic matrix acting on column vectors of the right
/// H-module H^n: A(v*a) = (Av)*a.  Row-major storage; n == 0 is the empty
/// matrix used for full minors.
namespace detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace detail

class QMatrix {
public:
    QMatrix() = default;
    explicit QMatrix(std::size_t n) : n_(n), entries_(n * n) {}
    QMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows) : n_(rows.size()) {
        entries_.reserve(n_ * n_);
        for (const auto& row : rows) {
            if (row.size() != n_) throw SizeMismatch("QMatrix initializer is not square");
            entries_.insert(entries_.end(), row.begin(), row.end());
        }
    }

    static QMatrix identity(std::size_t n) {
        QMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Quaternion::one();
        return m;
    }

    static QMatrix diagonal(const QVector& d) {
        QMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    Quaternion& operator()(std::size_t r, std::size_t c) { return entries_[r * n_ + c]; }
    const Quaternion& operator()(std::size_t r, std::size_t c) const { return entries_[r * n_ + c]; }

    const std::vector<Quaternion>& entries() const { return entries_; }

    QMatrix& operator+=(const QMatrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
        return *this;
    }
    QMatrix& operator-=(const QMatrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
        return *this;
    }
    QMatrix& operator*=(double s) {
        for (auto& e : entries_) e *= s;
        return *this;
    }

    /// max_ij |a_ij|
    double max_entry_norm() const {
        double m = 0.0;
        for (const auto& e : entries_) m = std::max(m, abs(e));
        return m;
    }

    friend bool operator==(const QMatrix& a, const QMatrix& b) {
        return a.n_ == b.n_ && a.entries_ == b.entries_;
    }

private:
    void check_same(const QMatrix& o) const {
        if (o.n_ != n_) throw SizeMismatch("matrix sizes differ");
    }

    std::size_t n_ = 0;
    std::vector<Quaternion> entries_;
};

inline QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
inline QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
inline QMatrix operator*(QMatrix a, double s) { return a *= s; }
inline QMatrix operator*(double s, QMatrix a) { return a *= s; }

/// (AB)_ik = sum_j a_ij b_jk, Hamilton products in that order.
inline QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.size() != b.size()) throw SizeMismatch("mat_mul: sizes differ");
    const std::size_t n = a.size();
    QMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Quaternion aij = a(i, j);
            for (std::size_t k = 0; k < n; ++k) out(i, k) += aij * b(j, k);
        }
    return out;
}

inline QMatrix mat_mul(const QMatrix& a, const QMatrix& b) { return a * b; }

inline QVector operator*(const QMatrix& a, const QVector& v) {
    if (a.size() != v.size()) throw SizeMismatch("matrix-vector: sizes differ");
    QVector out(v.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out[i] += a(i, j) * v[j];
    return out;
}

inline QMatrix conj_transpose(const QMatrix& a) {
    QMatrix out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out(i, j) = conj(a(j, i));
    return out;
}

/// Plain transpose, no conjugation.
inline QMatrix transpose(const QMatrix& a) {
    QMatrix out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out(i, j) = a(j, i);
    return out;
}

/// max_ij |a_ij - b_ij|
inline double max_entry_diff(const QMatrix& a, const QMatrix& b) {
    if (a.size() != b.size()) throw SizeMismatch("max_entry_diff: sizes differ");
    double m = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k)
        m = std::max(m, dist(a.entries()[k], b.entries()[k]));
    return m;
}

/// max_ij |a_ij - conj(a_ji)|
inline double hyperhermitian_defect(const QMatrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i; j < a.size(); ++j) m = std::max(m, dist(a(i, j), conj(a(j, i))));
    return m;
}

inline constexpr double kHyperhermitianTol = 1e-10;

/// Quaternionic matrix with A* = A.  Every constructor either verifies the
/// structure or enforces it exactly by averaging with the adjoint.
class HHMatrix {
public:
    HHMatrix() = default;
    explicit HHMatrix(std::size_t n) : m_(n) {}

    /// Accepts `a` if its symmetry defect is at most
    /// 1e-10 * (1 + max entry norm), then symmetrizes.
    static HHMatrix checked(const QMatrix& a) {
        const double defect = hyperhermitian_defect(a);
        const double allowed = kHyperhermitianTol * (1.0 + a.max_entry_norm());
        if (!(defect <= allowed))
            throw NotHyperhermitian("matrix is not hyperhermitian: defect " + detail::sci(defect) + " exceeds " +
                                    detail::sci(allowed));
        return symmetrized(a);
    }

    /// (A + A*) / 2
    static HHMatrix symmetrized(const QMatrix& a) {
        HHMatrix h;
        h.m_ = QMatrix(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            h.m_(i, i) = Quaternion(a(i, i).t);
            for (std::size_t j = i + 1; j < a.size(); ++j) {
                const Quaternion v = (a(i, j) + conj(a(j, i))) * 0.5;
                h.m_(i, j) = v;
                h.m_(j, i) = conj(v);
            }
        }
        return h;
    }

    static HHMatrix identity(std::size_t n) { return from_trusted(QMatrix::identity(n)); }

    static HHMatrix diagonal(const std::vector<double>& d) {
        QMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = Quaternion(d[i]);
        return from_trusted(std::move(m));
    }

    std::size_t size() const { return m_.size(); }
    const Quaternion& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
    const QMatrix& matrix() const { return m_; }
    operator const QMatrix&() const { return m_; }

    /// Sets a_rc = v and a_cr = conj(v); diagonal entries keep only Re(v).
    void set(std::size_t r, std::size_t c, const Quaternion& v) {
        if (r == c) {
            m_(r, r) = Quaternion(v.t);
        } else {
            m_(r, c) = v;
            m_(c, r) = conj(v);
        }
    }

    HHMatrix& operator+=(const HHMatrix& o) {
        m_ += o.m_;
        return *this;
    }
    HHMatrix& operator-=(const HHMatrix& o) {
        m_ -= o.m_;
        return *this;
    }
    HHMatrix& operator*=(double s) {
        m_ *= s;
        return *this;
    }

    double max_entry_norm() const { return m_.max_entry_norm(); }

private:
    static HHMatrix from_trusted(QMatrix m) {
        HHMatrix h;
        h.m_ = std::move(m);
        return h;
    }

    QMatrix m_;
};

inline HHMatrix operator+(HHMatrix a, const HHMatrix& b) { return a += b; }
inline HHMatrix operator-(HHMatrix a, const HHMatrix& b) { return a -= b; }
inline HHMatrix operator*(HHMatrix a, double s) { return a *= s; }
inline HHMatrix operator*(double s, HHMatrix a) { return a *= s; }

/// T = A + diag(t)
inline HHMatrix add_diagonal(HHMatrix a, const std::vector<double>& t) {
    if (t.size() != a.size()) throw SizeMismatch("add_diagonal: |t| != n");
    for (std::size_t i = 0; i < t.size(); ++i) a.set(i, i, Quaternion(a(i, i).t + t[i]));
    return a;
}

/// Complex adjoint.  Each entry q = a + b j with a = t + x i, b = y + z i is
/// placed as [[a, b], [-conj(b), conj(a)]] across the four n x n blocks.
inline Eigen::MatrixXcd complexify(const QMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXcd out(2 * n, 2 * n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            const Quaternion& q = a(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
            const std::complex<double> za(q.t, q.x);
            const std::complex<double> zb(q.y, q.z);
            out(r, c) = za;
            out(r, n + c) = zb;
            out(n + r, c) = -std::conj(zb);
            out(n + r, n + c) = std::conj(za);
        }
    return out;
}

/// Embeds a complex matrix as a quaternionic one with entries in span{1, i}.
inline QMatrix from_complex(const Eigen::MatrixXcd& c) {
    if (c.rows() != c.cols()) throw SizeMismatch("from_complex: matrix not square");
    QMatrix out(static_cast<std::size_t>(c.rows()));
    for (Eigen::Index r = 0; r < c.rows(); ++r)
        for (Eigen::Index k = 0; k < c.cols(); ++k)
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(k)) =
                Quaternion(c(r, k).real(), c(r, k).imag());
    return out;
}

/// Matrix of the real symmetric bilinear form Re A(x, y) on R^{4n} in the
/// coordinates (t1, x1, y1, z1, ..., tn, xn, yn, zn).
inline Eigen::MatrixXd realify(const HHMatrix& a) {
    const std::size_t n = a.size();
    Eigen::MatrixXd out(4 * n, 4 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d)
                    out(static_cast<Eigen::Index>(4 * i + c), static_cast<Eigen::Index>(4 * j + d)) =
                        (conj(Quaternion::unit(c)) * a(i, j) * Quaternion::unit(d)).t;
    return out;
}

/// Real 4n x 4n matrix of the R-linear map q -> A q.
inline Eigen::MatrixXd left_action_matrix(const QMatrix& a) {
    const std::size_t n = a.size();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(4 * n, 4 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (int d = 0; d < 4; ++d) {
                const Quaternion col = a(i, j) * Quaternion::unit(d);
                for (int c = 0; c < 4; ++c)
                    out(static_cast<Eigen::Index>(4 * i + c), static_cast<Eigen::Index>(4 * j + d)) = col[c];
            }
    return out;
}

/// Real 4n x 4n matrix of the R-linear map q -> q * s (componentwise).
inline Eigen::MatrixXd right_action_matrix(const Quaternion& s, std::size_t n) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(4 * n, 4 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (int d = 0; d < 4; ++d) {
            const Quaternion col = Quaternion::unit(d) * s;
            for (int c = 0; c < 4; ++c)
                out(static_cast<Eigen::Index>(4 * i + c), static_cast<Eigen::Index>(4 * i + d)) = col[c];
        }
    return out;
}

inline QVector to_quaternions(const Eigen::VectorXd& coords) {
    QVector out(static_cast<std::size_t>(coords.size() / 4));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto b = static_cast<Eigen::Index>(4 * i);
        out[i] = Quaternion(coords(b), coords(b + 1), coords(b + 2), coords(b + 3));
    }
    return out;
}

inline Eigen::VectorXd to_coords(const QVector& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(4 * v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        for (int c = 0; c < 4; ++c) out(static_cast<Eigen::Index>(4 * i + c)) = v[i][c];
    return out;
}

/// Hyperhermitian inner product sum_i conj(x_i) y_i.
inline Quaternion inner(const QVector& x, const QVector& y) {
    if (x.size() != y.size()) throw SizeMismatch("inner: sizes differ");
    Quaternion s;
    for (std::size_t i = 0; i < x.size(); ++i) s += conj(x[i]) * y[i];
    return s;
}

inline double norm(const QVector& x) { return std::sqrt(inner(x, x).t); }

inline QVector scale_right(QVector v, const Quaternion& s) {
    for (auto& e : v) e = e * s;
    return v;
}

/// A(x, y) = sum_ij conj(x_i) a_ij y_j
inline Quaternion form_eval(const HHMatrix& a, const QVector& x, const QVector& y) {
    if (x.size() != a.size() || y.size() != a.size()) throw SizeMismatch("form_eval: sizes differ");
    Quaternion s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        Quaternion row;
        for (std::size_t j = 0; j < a.size(); ++j) row += a(i, j) * y[j];
        s += conj(x[i]) * row;
    }
    return s;
}

/// C* A C; exact hyperhermitian structure is restored after rounding.
inline HHMatrix basis_change(const HHMatrix& a, const QMatrix& c) {
    if (a.size() != c.size()) throw SizeMismatch("basis_change: sizes differ");
    return HHMatrix::symmetrized(conj_transpose(c) * a.matrix() * c);
}

}  // namespace qpsh

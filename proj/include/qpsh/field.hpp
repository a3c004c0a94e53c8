#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qpsh/matrix.hpp"

namespace qpsh {

/// Point of H^n in real coordinates (t1, x1, y1, z1, ..., tn, xn, yn, zn).
using Point = Eigen::VectorXd;

/// Value, gradient and real Hessian of a scalar field at one point.
struct Jet {
    double value = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;

    static Jet zero(Eigen::Index dim) {
        return {0.0, Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Zero(dim, dim)};
    }
};

namespace detail {

class FieldNode {
public:
    explicit FieldNode(std::size_t n) : n_(n) {}
    virtual ~FieldNode() = default;
    std::size_t quaternionic_dim() const { return n_; }
    virtual Jet jet(const Point& x) const = 0;
    virtual double value(const Point& x) const { return jet(x).value; }

private:
    std::size_t n_;
};

}  // namespace detail

/// Twice-differentiable profile g(s) used by radial fields g(|q - q0|^2).
struct RadialProfile {
    enum class Kind {
        Polynomial,  ///< sum_k c_k s^k
        Exponential, ///< amplitude * exp(-rate s)
        Log1p,       ///< log(1 + s)
        Cutoff,      ///< 1 - (10u^3 - 15u^4 + 6u^5), u = s / radius^2, 0 for u >= 1
    };

    Kind kind = Kind::Polynomial;
    std::vector<double> coeffs;
    double amplitude = 1.0;
    double rate = 1.0;
    double radius = 1.0;

    static RadialProfile polynomial(std::vector<double> c) {
        RadialProfile g;
        g.kind = Kind::Polynomial;
        g.coeffs = std::move(c);
        return g;
    }
    static RadialProfile exponential(double amplitude, double rate) {
        RadialProfile g;
        g.kind = Kind::Exponential;
        g.amplitude = amplitude;
        g.rate = rate;
        return g;
    }
    static RadialProfile log1p() {
        RadialProfile g;
        g.kind = Kind::Log1p;
        return g;
    }
    /// C^2 bump, a degree-5 polynomial in s / radius^2 on the ball.
    static RadialProfile cutoff(double radius) {
        RadialProfile g;
        g.kind = Kind::Cutoff;
        g.radius = radius;
        return g;
    }

    /// (g, g', g'') at s >= 0
    std::array<double, 3> eval(double s) const {
        switch (kind) {
            case Kind::Polynomial: {
                double v = 0.0, d1 = 0.0, d2 = 0.0;
                for (std::size_t k = coeffs.size(); k-- > 0;) {
                    d2 = d2 * s + 2.0 * d1;
                    d1 = d1 * s + v;
                    v = v * s + coeffs[k];
                }
                return {v, d1, d2};
            }
            case Kind::Exponential: {
                const double e = amplitude * std::exp(-rate * s);
                return {e, -rate * e, rate * rate * e};
            }
            case Kind::Log1p:
                return {std::log1p(s), 1.0 / (1.0 + s), -1.0 / ((1.0 + s) * (1.0 + s))};
            case Kind::Cutoff: {
                const double r2 = radius * radius;
                const double u = s / r2;
                if (u >= 1.0) return {0.0, 0.0, 0.0};
                const double v = 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
                const double du = -30.0 * u * u * (1.0 - u) * (1.0 - u);
                const double ddu = -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
                return {v, du / r2, ddu / (r2 * r2)};
            }
        }
        return {0.0, 0.0, 0.0};
    }
};

/// Monomial coef * prod_l zeta_l^{e_l} of a holomorphic polynomial on C^{2n}.
struct HolomorphicTerm {
    std::complex<double> coef;
    std::vector<int> exponents;  ///< length 2n, order (z1, w1, ..., zn, wn)
};

/// Real-valued field on H^n with exact value, gradient and 4n x 4n Hessian.
/// Immutable; copies share the expression tree.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(std::shared_ptr<const detail::FieldNode> node) : node_(std::move(node)) {}

    std::size_t n() const { return node_->quaternionic_dim(); }
    Eigen::Index real_dim() const { return static_cast<Eigen::Index>(4 * n()); }
    bool valid() const { return static_cast<bool>(node_); }

    double value(const Point& x) const { return node_->value(check(x)); }
    Eigen::VectorXd gradient(const Point& x) const { return node_->jet(check(x)).grad; }
    Eigen::MatrixXd hessian(const Point& x) const { return node_->jet(check(x)).hess; }
    Jet jet(const Point& x) const { return node_->jet(check(x)); }

    const detail::FieldNode* node() const { return node_.get(); }

    // --- constructors -----------------------------------------------------

    static ScalarField zero(std::size_t n);
    /// q -> sum conj(q_i) a_ij q_j + Re sum conj(b_i) q_i + c
    static ScalarField quadratic(const HHMatrix& a, const QVector& b, double c);
    static ScalarField quadratic(const HHMatrix& a) { return quadratic(a, QVector(a.size()), 0.0); }
    static ScalarField linear(const QVector& b, double c);
    /// amplitude * exp(-|q - center|^2 / (2 width^2))
    static ScalarField gaussian(const QVector& center, double width, double amplitude);
    static ScalarField radial(RadialProfile g, const QVector& center);
    /// Compactly supported C^2 bump of the given radius, value 1 at center.
    static ScalarField bump(const QVector& center, double radius) {
        return radial(RadialProfile::cutoff(radius), center);
    }
    static ScalarField sum(std::vector<ScalarField> terms);
    static ScalarField scale(double s, ScalarField f);
    static ScalarField product(ScalarField f, ScalarField g);
    /// f(q) * bump(center, radius)(q)
    static ScalarField cutoff(ScalarField f, double radius, const QVector& center) {
        return product(std::move(f), bump(center, radius));
    }
    /// q -> f(A (q * a))
    static ScalarField precompose(ScalarField f, const QMatrix& a, const Quaternion& s);
    /// tau * log sum_k exp(l_k(q) / tau), l_k(q) = Re sum conj(b_ki) q_i + c_k.
    static ScalarField smooth_max(std::vector<std::pair<QVector, double>> pieces, double tau);
    /// |P(z, w)|^2 in the complex coordinates of the structure given by right
    /// multiplication by i: q_m = z_m + j w_m, z_m = t_m + x_m i, w_m = y_m - z_m i.
    static ScalarField holomorphic_modulus_squared(std::size_t n, std::vector<HolomorphicTerm> terms);

private:
    const Point& check(const Point& x) const {
        if (x.size() != real_dim()) throw SizeMismatch("point dimension does not match field");
        return x;
    }

    std::shared_ptr<const detail::FieldNode> node_;
};

inline ScalarField operator+(ScalarField a, ScalarField b) { return ScalarField::sum({std::move(a), std::move(b)}); }
inline ScalarField operator-(ScalarField a, ScalarField b) {
    return ScalarField::sum({std::move(a), ScalarField::scale(-1.0, std::move(b))});
}
inline ScalarField operator*(double s, ScalarField f) { return ScalarField::scale(s, std::move(f)); }
inline ScalarField operator*(ScalarField f, ScalarField g) { return ScalarField::product(std::move(f), std::move(g)); }

// ---------------------------------------------------------------------------
// Node implementations
// ---------------------------------------------------------------------------

namespace detail {

class QuadraticNode final : public FieldNode {
public:
    QuadraticNode(const HHMatrix& a, const QVector& b, double c)
        : FieldNode(a.size()), r_(realify(a)), beta_(to_coords(b)), c_(c) {
        if (b.size() != a.size()) throw SizeMismatch("quadratic field: |b| != n");
    }
    Jet jet(const Point& x) const override {
        const Eigen::VectorXd rx = r_ * x;
        return {x.dot(rx) + beta_.dot(x) + c_, 2.0 * rx + beta_, 2.0 * r_};
    }
    double value(const Point& x) const override { return x.dot(r_ * x) + beta_.dot(x) + c_; }

private:
    Eigen::MatrixXd r_;
    Eigen::VectorXd beta_;
    double c_;
};

class RadialNode final : public FieldNode {
public:
    RadialNode(RadialProfile g, const QVector& center) : FieldNode(center.size()), g_(std::move(g)), c_(to_coords(center)) {}
    Jet jet(const Point& x) const override {
        const Eigen::VectorXd d = x - c_;
        const auto [v, d1, d2] = g_.eval(d.squaredNorm());
        Jet j;
        j.value = v;
        j.grad = 2.0 * d1 * d;
        j.hess = (4.0 * d2) * (d * d.transpose());
        j.hess.diagonal().array() += 2.0 * d1;
        return j;
    }
    double value(const Point& x) const override { return g_.eval((x - c_).squaredNorm())[0]; }

private:
    RadialProfile g_;
    Eigen::VectorXd c_;
};

class SumNode final : public FieldNode {
public:
    explicit SumNode(std::vector<ScalarField> terms) : FieldNode(terms.front().n()), terms_(std::move(terms)) {
        for (const auto& t : terms_)
            if (t.n() != quaternionic_dim()) throw SizeMismatch("sum of fields of different dimension");
    }
    Jet jet(const Point& x) const override {
        Jet out = Jet::zero(x.size());
        for (const auto& t : terms_) {
            const Jet j = t.node()->jet(x);
            out.value += j.value;
            out.grad += j.grad;
            out.hess += j.hess;
        }
        return out;
    }
    double value(const Point& x) const override {
        double v = 0.0;
        for (const auto& t : terms_) v += t.node()->value(x);
        return v;
    }

private:
    std::vector<ScalarField> terms_;
};

class ScaleNode final : public FieldNode {
public:
    ScaleNode(double s, ScalarField f) : FieldNode(f.n()), s_(s), f_(std::move(f)) {}
    Jet jet(const Point& x) const override {
        Jet j = f_.node()->jet(x);
        j.value *= s_;
        j.grad *= s_;
        j.hess *= s_;
        return j;
    }
    double value(const Point& x) const override { return s_ * f_.node()->value(x); }

private:
    double s_;
    ScalarField f_;
};

class ProductNode final : public FieldNode {
public:
    ProductNode(ScalarField f, ScalarField g) : FieldNode(f.n()), f_(std::move(f)), g_(std::move(g)) {
        if (f_.n() != g_.n()) throw SizeMismatch("product of fields of different dimension");
    }
    Jet jet(const Point& x) const override {
        const Jet a = f_.node()->jet(x);
        const Jet b = g_.node()->jet(x);
        Jet j;
        j.value = a.value * b.value;
        j.grad = a.value * b.grad + b.value * a.grad;
        j.hess = a.value * b.hess + b.value * a.hess + a.grad * b.grad.transpose() + b.grad * a.grad.transpose();
        return j;
    }
    double value(const Point& x) const override { return f_.node()->value(x) * g_.node()->value(x); }

private:
    ScalarField f_;
    ScalarField g_;
};

class PrecomposeNode final : public FieldNode {
public:
    PrecomposeNode(ScalarField f, const QMatrix& a, const Quaternion& s)
        : FieldNode(f.n()), f_(std::move(f)), m_(left_action_matrix(a) * right_action_matrix(s, a.size())) {
        if (a.size() != f_.n()) throw SizeMismatch("precompose: matrix size does not match field");
    }
    Jet jet(const Point& x) const override {
        const Jet j = f_.node()->jet(m_ * x);
        return {j.value, m_.transpose() * j.grad, m_.transpose() * j.hess * m_};
    }
    double value(const Point& x) const override { return f_.node()->value(m_ * x); }

private:
    ScalarField f_;
    Eigen::MatrixXd m_;
};

class SmoothMaxNode final : public FieldNode {
public:
    SmoothMaxNode(std::vector<std::pair<QVector, double>> pieces, double tau)
        : FieldNode(pieces.front().first.size()), tau_(tau) {
        if (!(tau > 0.0)) throw DomainError("smooth_max: temperature must be positive");
        for (const auto& [b, c] : pieces) {
            if (b.size() != quaternionic_dim()) throw SizeMismatch("smooth_max: pieces of different dimension");
            slopes_.push_back(to_coords(b));
            offsets_.push_back(c);
        }
    }
    Jet jet(const Point& x) const override {
        const std::size_t m = slopes_.size();
        std::vector<double> l(m);
        double top = -INFINITY;
        for (std::size_t k = 0; k < m; ++k) {
            l[k] = (slopes_[k].dot(x) + offsets_[k]) / tau_;
            top = std::max(top, l[k]);
        }
        double z = 0.0;
        for (double v : l) z += std::exp(v - top);
        Jet j = Jet::zero(x.size());
        j.value = tau_ * (top + std::log(z));
        Eigen::MatrixXd second = Eigen::MatrixXd::Zero(x.size(), x.size());
        for (std::size_t k = 0; k < m; ++k) {
            const double w = std::exp(l[k] - top) / z;
            j.grad += w * slopes_[k];
            second += w * slopes_[k] * slopes_[k].transpose();
        }
        j.hess = (second - j.grad * j.grad.transpose()) / tau_;
        return j;
    }

private:
    double tau_;
    std::vector<Eigen::VectorXd> slopes_;
    std::vector<double> offsets_;
};

class HolomorphicModulusNode final : public FieldNode {
public:
    HolomorphicModulusNode(std::size_t n, std::vector<HolomorphicTerm> terms) : FieldNode(n), terms_(std::move(terms)) {
        for (const auto& t : terms_)
            if (t.exponents.size() != 2 * n) throw SizeMismatch("holomorphic term needs 2n exponents");
    }
    Jet jet(const Point& x) const override {
        using C = std::complex<double>;
        const std::size_t n = quaternionic_dim();
        const std::size_t vars = 2 * n;
        std::vector<C> zeta(vars);
        for (std::size_t m = 0; m < n; ++m) {
            const auto b = static_cast<Eigen::Index>(4 * m);
            zeta[2 * m] = C(x(b), x(b + 1));
            zeta[2 * m + 1] = C(x(b + 2), -x(b + 3));
        }
        C p = 0.0;
        std::vector<C> dp(vars, 0.0);
        std::vector<C> ddp(vars * vars, 0.0);
        for (const auto& t : terms_) {
            p += t.coef * monomial(t.exponents, zeta, -1, -1);
            for (std::size_t a = 0; a < vars; ++a) {
                if (t.exponents[a] == 0) continue;
                dp[a] += t.coef * monomial(t.exponents, zeta, static_cast<int>(a), -1);
                for (std::size_t b = 0; b < vars; ++b) {
                    if (t.exponents[b] == 0 || (a == b && t.exponents[a] < 2)) continue;
                    ddp[a * vars + b] += t.coef * monomial(t.exponents, zeta, static_cast<int>(a), static_cast<int>(b));
                }
            }
        }
        // d zeta / d(real coordinate c of q_m): (1, i) for z_m, (1, -i) for w_m
        static const C kappa[4] = {C(1, 0), C(0, 1), C(1, 0), C(0, -1)};
        const auto dim = static_cast<Eigen::Index>(4 * n);
        std::vector<C> dr(static_cast<std::size_t>(dim));
        auto var_of = [](Eigen::Index r) { return static_cast<std::size_t>(2 * (r / 4) + ((r % 4) >= 2 ? 1 : 0)); };
        for (Eigen::Index r = 0; r < dim; ++r) dr[static_cast<std::size_t>(r)] = kappa[r % 4] * dp[var_of(r)];
        Jet j = Jet::zero(dim);
        j.value = std::norm(p);
        for (Eigen::Index r = 0; r < dim; ++r) j.grad(r) = 2.0 * std::real(std::conj(p) * dr[static_cast<std::size_t>(r)]);
        for (Eigen::Index r = 0; r < dim; ++r)
            for (Eigen::Index s = 0; s < dim; ++s) {
                const C drs = kappa[r % 4] * kappa[s % 4] * ddp[var_of(r) * vars + var_of(s)];
                j.hess(r, s) = 2.0 * std::real(std::conj(dr[static_cast<std::size_t>(s)]) * dr[static_cast<std::size_t>(r)] +
                                               std::conj(p) * drs);
            }
        return j;
    }

private:
    /// Monomial differentiated once in `da` and once in `db` (-1 = none).
    static std::complex<double> monomial(const std::vector<int>& e, const std::vector<std::complex<double>>& zeta, int da,
                                         int db) {
        std::complex<double> v = 1.0;
        for (std::size_t l = 0; l < e.size(); ++l) {
            int power = e[l];
            double factor = 1.0;
            for (int d : {da, db})
                if (d == static_cast<int>(l)) {
                    factor *= power;
                    --power;
                }
            if (factor == 0.0) return 0.0;
            v *= factor;
            for (int k = 0; k < power; ++k) v *= zeta[l];
        }
        return v;
    }

    std::vector<HolomorphicTerm> terms_;
};

}  // namespace detail

inline ScalarField ScalarField::zero(std::size_t n) { return quadratic(HHMatrix(n), QVector(n), 0.0); }

inline ScalarField ScalarField::quadratic(const HHMatrix& a, const QVector& b, double c) {
    return ScalarField(std::make_shared<detail::QuadraticNode>(a, b, c));
}

inline ScalarField ScalarField::linear(const QVector& b, double c) { return quadratic(HHMatrix(b.size()), b, c); }

inline ScalarField ScalarField::gaussian(const QVector& center, double width, double amplitude) {
    if (!(width > 0.0)) throw DomainError("gaussian: width must be positive");
    return radial(RadialProfile::exponential(amplitude, 1.0 / (2.0 * width * width)), center);
}

inline ScalarField ScalarField::radial(RadialProfile g, const QVector& center) {
    if (g.kind == RadialProfile::Kind::Cutoff && !(g.radius > 0.0)) throw DomainError("cutoff radius must be positive");
    return ScalarField(std::make_shared<detail::RadialNode>(std::move(g), center));
}

inline ScalarField ScalarField::sum(std::vector<ScalarField> terms) {
    if (terms.empty()) throw DomainError("sum of no fields");
    return ScalarField(std::make_shared<detail::SumNode>(std::move(terms)));
}

inline ScalarField ScalarField::scale(double s, ScalarField f) {
    return ScalarField(std::make_shared<detail::ScaleNode>(s, std::move(f)));
}

inline ScalarField ScalarField::product(ScalarField f, ScalarField g) {
    return ScalarField(std::make_shared<detail::ProductNode>(std::move(f), std::move(g)));
}

inline ScalarField ScalarField::precompose(ScalarField f, const QMatrix& a, const Quaternion& s) {
    return ScalarField(std::make_shared<detail::PrecomposeNode>(std::move(f), a, s));
}

inline ScalarField ScalarField::smooth_max(std::vector<std::pair<QVector, double>> pieces, double tau) {
    if (pieces.empty()) throw DomainError("smooth_max of no pieces");
    return ScalarField(std::make_shared<detail::SmoothMaxNode>(std::move(pieces), tau));
}

inline ScalarField ScalarField::holomorphic_modulus_squared(std::size_t n, std::vector<HolomorphicTerm> terms) {
    return ScalarField(std::make_shared<detail::HolomorphicModulusNode>(n, std::move(terms)));
}

/// |q|^2 on H^n
inline ScalarField norm_squared_field(std::size_t n) { return ScalarField::quadratic(HHMatrix::identity(n)); }

}  // namespace qpsh

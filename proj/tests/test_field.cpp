#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qpsh/random.hpp"

using namespace qpsh;

namespace {

Point random_point(Rng& rng, std::size_t n, double scale = 1.0) {
    Point p(static_cast<Eigen::Index>(4 * n));
    for (Eigen::Index k = 0; k < p.size(); ++k) p(k) = scale * rng.normal();
    return p;
}

QVector small_vector(Rng& rng, std::size_t n, double scale) {
    QVector v = random_qvector(rng, n);
    for (auto& e : v) e *= scale;
    return v;
}

/// Analytic derivatives against central differences at random points.
void expect_matches_finite_differences(const ScalarField& f, Rng& rng, double point_scale = 0.6, int points = 5) {
    for (int k = 0; k < points; ++k) {
        const Point x = random_point(rng, f.n(), point_scale);
        const Jet j = f.jet(x);
        EXPECT_NEAR(j.value, f.value(x), 1e-12 * (1 + std::abs(j.value)));
        EXPECT_LE((j.hess - j.hess.transpose()).cwiseAbs().maxCoeff(), 1e-12 * (1 + j.hess.norm()));
        const Eigen::VectorXd g = oracle::fd_gradient(f, x);
        EXPECT_LE((j.grad - g).norm(), 1e-6 * (1 + j.grad.norm()));
        const Eigen::MatrixXd h = oracle::fd_hessian(f, x);
        EXPECT_LE((j.hess - h).cwiseAbs().maxCoeff(), 1e-5 * (1 + j.hess.cwiseAbs().maxCoeff()));
    }
}

}  // namespace

TEST(Field, QuadraticValues) {
    HHMatrix a = HHMatrix::diagonal({1, 2});
    a.set(0, 1, Quaternion::j());
    const QVector b{Quaternion(1, 0, 0, 0), Quaternion(0, 0, 0, 2)};
    const ScalarField f = ScalarField::quadratic(a, b, 0.5);
    const QVector q{Quaternion(0, 1, 0, 0), Quaternion(1, 0, 1, 0)};
    // conj(q) A q + Re(conj(b) q) + c
    const Quaternion form = form_eval(a, q, q);
    const double expected = form.t + inner(b, q).t + 0.5;
    EXPECT_NEAR(f.value(to_coords(q)), expected, 1e-14);
    EXPECT_NEAR(norm_squared_field(2).value(to_coords(q)), 3.0, 1e-14);
    EXPECT_THROW(f.value(Point::Zero(4)), SizeMismatch);
}

TEST(Field, GaussianAndBumpValues) {
    const QVector c{Quaternion(1, 0, 0, 0)};
    const ScalarField g = ScalarField::gaussian(c, 2.0, 3.0);
    EXPECT_NEAR(g.value(to_coords({Quaternion(1, 0, 0, 2)})), 3.0 * std::exp(-4.0 / 8.0), 1e-14);
    const ScalarField b = ScalarField::bump(c, 2.0);
    EXPECT_EQ(b.value(to_coords(c)), 1.0);
    EXPECT_EQ(b.value(to_coords({Quaternion(3.5, 0, 0, 0)})), 0.0);
    // u = 1/4: 1 - (10/64 - 15/256 + 6/1024)
    EXPECT_NEAR(b.value(to_coords({Quaternion(2, 0, 0, 0)})), 1.0 - (10.0 / 64 - 15.0 / 256 + 6.0 / 1024), 1e-14);
    EXPECT_THROW(ScalarField::gaussian(c, 0.0, 1.0), DomainError);
}

TEST(Field, CutoffProfileIsTwiceDifferentiableAtTheEdge) {
    const auto g = RadialProfile::cutoff(1.5);
    const auto inside = g.eval(2.25 * (1 - 1e-9));
    EXPECT_NEAR(inside[0], 0.0, 1e-12);
    EXPECT_NEAR(inside[1], 0.0, 1e-12);
    EXPECT_NEAR(inside[2], 0.0, 1e-7);
}

TEST(Field, PolynomialProfileDerivatives) {
    const auto g = RadialProfile::polynomial({1.0, -2.0, 0.5, 3.0});
    const double s = 0.7;
    const auto r = g.eval(s);
    EXPECT_NEAR(r[0], 1 - 2 * s + 0.5 * s * s + 3 * s * s * s, 1e-14);
    EXPECT_NEAR(r[1], -2 + s + 9 * s * s, 1e-14);
    EXPECT_NEAR(r[2], 1 + 18 * s, 1e-14);
}

TEST(Field, FiniteDifferenceOracle) {
    Rng rng(1, "field-fd");
    for (std::size_t n = 1; n <= 3; ++n) {
        const HHMatrix a = random_hh(rng, n);
        const QVector b = random_qvector(rng, n);
        const QVector c = small_vector(rng, n, 0.3);
        expect_matches_finite_differences(ScalarField::quadratic(a, b, 0.3), rng);
        expect_matches_finite_differences(ScalarField::gaussian(c, 0.8, 1.7), rng);
        expect_matches_finite_differences(ScalarField::radial(RadialProfile::log1p(), c), rng);
        expect_matches_finite_differences(ScalarField::radial(RadialProfile::polynomial({0, 1, -0.2}), c), rng);
        expect_matches_finite_differences(ScalarField::bump(c, 1.8), rng);
        expect_matches_finite_differences(ScalarField::cutoff(ScalarField::quadratic(a), 1.8, c), rng);
        expect_matches_finite_differences(
            ScalarField::precompose(ScalarField::gaussian(c, 1.0, 1.0), random_qmatrix(rng, n), rng.unit_quaternion()),
            rng, 0.3);
        expect_matches_finite_differences(
            2.5 * ScalarField::quadratic(a) - ScalarField::gaussian(c, 1.0, 0.5) * ScalarField::quadratic(a), rng);
        std::vector<std::pair<QVector, double>> pieces;
        for (int k = 0; k < 4; ++k) pieces.emplace_back(random_qvector(rng, n), rng.normal());
        expect_matches_finite_differences(ScalarField::smooth_max(pieces, 0.7), rng);
        std::vector<HolomorphicTerm> terms;
        for (int k = 0; k < 3; ++k) {
            std::vector<int> e(2 * n);
            for (auto& v : e) v = static_cast<int>(rng.index(3));
            terms.push_back({{rng.normal(), rng.normal()}, e});
        }
        expect_matches_finite_differences(ScalarField::holomorphic_modulus_squared(n, terms), rng);
    }
}

TEST(Field, PrecomposeEvaluatesAtTheImage) {
    Rng rng(2, "field-precompose");
    const ScalarField f = ScalarField::gaussian(random_qvector(rng, 2), 1.3, 1.0);
    const QMatrix a = random_qmatrix(rng, 2);
    const Quaternion s = rng.unit_quaternion();
    const QVector q = random_qvector(rng, 2);
    const ScalarField g = ScalarField::precompose(f, a, s);
    EXPECT_NEAR(g.value(to_coords(q)), f.value(to_coords(a * scale_right(q, s))), 1e-14);
}

TEST(Field, HolomorphicCoordinates) {
    // |z1|^2 with z1 = t1 + x1 i, and |w1|^2 with w1 = y1 - z1 i
    const ScalarField fz = ScalarField::holomorphic_modulus_squared(1, {{{1, 0}, {1, 0}}});
    const ScalarField fw = ScalarField::holomorphic_modulus_squared(1, {{{1, 0}, {0, 1}}});
    const Point p = to_coords({Quaternion(1, 2, 3, 4)});
    EXPECT_NEAR(fz.value(p), 5.0, 1e-14);
    EXPECT_NEAR(fw.value(p), 25.0, 1e-14);
    EXPECT_THROW(ScalarField::holomorphic_modulus_squared(2, {{{1, 0}, {1, 0}}}), SizeMismatch);
}

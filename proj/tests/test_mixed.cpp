#include <gtest/gtest.h>

#include <algorithm>

#include "qpsh/mixed.hpp"

using namespace qpsh;

namespace {

const Quaternion I = Quaternion::i(), J = Quaternion::j();

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

std::vector<HHMatrix> random_slots(Rng& rng, std::size_t n) {
    std::vector<HHMatrix> s;
    for (std::size_t k = 0; k < n; ++k) s.push_back(random_hh(rng, n));
    return s;
}

}  // namespace

TEST(MixedDiscriminant, Examples) {
    Rng rng(1, "mixed-examples");
    for (std::size_t n = 1; n <= 4; ++n) {
        const HHMatrix a = random_hh(rng, n);
        EXPECT_LE(rel(mixed_discriminant(std::vector<HHMatrix>(n, a)), moore_det(a)), 1e-10);
        EXPECT_NEAR(mixed_discriminant(std::vector<HHMatrix>(n, HHMatrix::identity(n))), 1.0, 1e-12);
    }
    EXPECT_NEAR(mixed_discriminant({HHMatrix::diagonal({1, -1}), HHMatrix::identity(2)}), 0.0, 1e-14);
    EXPECT_THROW(mixed_discriminant({HHMatrix::identity(2)}), SizeMismatch);
}

// For n = 2, det(X, Y) = (x11 y22 + x22 y11)/2 - Re(x12 conj(y12)).
TEST(MixedDiscriminant, TwoByTwoClosedForm) {
    Rng rng(2, "mixed-2x2");
    for (int trial = 0; trial < 100; ++trial) {
        const HHMatrix x = random_hh(rng, 2), y = random_hh(rng, 2);
        const double expected = 0.5 * (x(0, 0).t * y(1, 1).t + x(1, 1).t * y(0, 0).t) - (x(0, 1) * conj(y(0, 1))).t;
        EXPECT_NEAR(mixed_discriminant({x, y}), expected, 1e-12 * (1 + std::abs(expected)) * 10);
    }
}

TEST(MixedDiscriminant, RoutesAgree) {
    Rng rng(3, "mixed-routes");
    for (std::size_t n = 1; n <= 4; ++n)
        for (int trial = 0; trial < 20; ++trial) {
            const auto s = random_slots(rng, n);
            EXPECT_LE(rel(mixed_discriminant(s), mixed_discriminant_interpolated(s)), 1e-8);
        }
}

TEST(MixedDiscriminant, SymmetricAndMultilinear) {
    Rng rng(4, "mixed-symmetry");
    for (std::size_t n = 2; n <= 4; ++n)
        for (int trial = 0; trial < 10; ++trial) {
            auto s = random_slots(rng, n);
            const double base = mixed_discriminant(s);
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            while (std::next_permutation(order.begin(), order.end())) {
                std::vector<HHMatrix> p;
                for (std::size_t k : order) p.push_back(s[k]);
                EXPECT_LE(rel(mixed_discriminant(p), base), 1e-8);
            }
            const HHMatrix a1 = random_hh(rng, n), a2 = random_hh(rng, n);
            const double l = rng.normal(), m = rng.normal();
            auto s1 = s, s2 = s, s12 = s;
            s1[0] = a1;
            s2[0] = a2;
            s12[0] = a1 * l + a2 * m;
            EXPECT_LE(rel(mixed_discriminant(s12), l * mixed_discriminant(s1) + m * mixed_discriminant(s2)), 1e-8);
        }
}

TEST(MixedDiscriminant, Positivity) {
    Rng rng(5, "mixed-positive");
    for (std::size_t n = 1; n <= 4; ++n)
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<HHMatrix> pd, psd;
            for (std::size_t k = 0; k < n; ++k) {
                pd.push_back(random_pd(rng, n));
                psd.push_back(random_psd(rng, n, 1 + rng.index(n)));
            }
            EXPECT_GT(mixed_discriminant(pd), 0.0);
            EXPECT_GE(mixed_discriminant(psd), -1e-10);
        }
}

TEST(HHBasis, CountAndIndependence) {
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto basis = hh_basis(n);
        ASSERT_EQ(basis.size(), n * (2 * n - 1));
        Eigen::MatrixXd coords(basis.size(), 4 * n * n);
        for (std::size_t b = 0; b < basis.size(); ++b) {
            EXPECT_EQ(hyperhermitian_defect(basis[b]), 0.0);
            for (std::size_t e = 0; e < n * n; ++e)
                for (int c = 0; c < 4; ++c) coords(b, 4 * e + c) = basis[b].matrix().entries()[e][c];
        }
        EXPECT_EQ(static_cast<std::size_t>(coords.fullPivLu().rank()), basis.size());
    }
}

TEST(Aleksandrov, SignatureExamples) {
    EXPECT_EQ(aleksandrov_signature({}, 2), (Inertia{1, 5, 0}));
    EXPECT_EQ(aleksandrov_signature({HHMatrix::identity(3)}, 3), (Inertia{1, 14, 0}));
    EXPECT_NEAR(mixed_discriminant({HHMatrix::identity(2), HHMatrix::identity(2)}), 1.0, 1e-14);
    Rng rng(6, "aleksandrov-sig");
    for (int trial = 0; trial < 5; ++trial) {
        EXPECT_EQ(aleksandrov_signature({random_pd(rng, 3)}, 3), (Inertia{1, 14, 0}));
        EXPECT_EQ(aleksandrov_signature({random_pd(rng, 4), random_pd(rng, 4)}, 4), (Inertia{1, 27, 0}));
    }
    EXPECT_THROW(aleksandrov_signature({HHMatrix::diagonal({1, -1, 1})}, 3), PreconditionFailure);
}

// With all A_i = Id and X diagonal of trace zero, B(X, Id) = 0 and
// B(X, X) = 2 sum_{i<j} x_i x_j / (n(n-1)) < 0.
TEST(Aleksandrov, KernelArgument) {
    for (std::size_t n = 2; n <= 4; ++n) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i) - 0.5 * static_cast<double>(n - 1);
        const HHMatrix xm = HHMatrix::diagonal(x);
        std::vector<HHMatrix> slots(n, HHMatrix::identity(n));
        slots[0] = xm;
        EXPECT_NEAR(mixed_discriminant(slots), 0.0, 1e-12);
        slots[1] = xm;
        double pairs = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) pairs += x[i] * x[j];
        EXPECT_NEAR(mixed_discriminant(slots), 2.0 * pairs / static_cast<double>(n * (n - 1)), 1e-12);
        EXPECT_LT(mixed_discriminant(slots), 0.0);
    }
}

TEST(Aleksandrov, InequalityExamples) {
    Rng rng(7, "aleksandrov-ineq");
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<HHMatrix> fixed{random_pd(rng, 3), random_pd(rng, 3)};
        for (double s : {1.0, 2.0, -0.5}) {
            const auto r = aleksandrov_inequality_check(fixed, fixed.back() * s);
            EXPECT_LE(std::abs(r.gap), 1e-8 * r.scale);
        }
        const auto r = aleksandrov_inequality_check(fixed, random_hh(rng, 3));
        EXPECT_GE(r.lhs, r.rhs - 1e-8 * r.scale);
        EXPECT_GT(r.gap, 1e-4 * r.scale);
    }
}

TEST(MinorInequality, Examples) {
    Rng rng(8, "minor-ineq");
    const HHMatrix a = random_psd(rng, 3);
    const auto same = minor_inequality_check(a, {0, 2}, {0, 2});
    EXPECT_DOUBLE_EQ(same.lhs, same.rhs);
    HHMatrix p = HHMatrix::diagonal({2, 3});
    p.set(0, 1, Quaternion(1, 1, 1, 0));
    const auto r = minor_inequality_check(p, {0}, {1});
    EXPECT_NEAR(r.lhs, 2 * std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(r.rhs, 5.0, 1e-14);
    EXPECT_THROW(minor_inequality_check(p, {0}, {0, 1}), SizeMismatch);
}

TEST(MinorInequality, RandomPsd) {
    Rng rng(9, "minor-ineq-random");
    for (int trial = 0; trial < 100; ++trial) {
        const HHMatrix a = random_psd(rng, 4, 1 + rng.index(4));
        const auto subsets = subsets_of_size(4, 2);
        const auto& rows = subsets[rng.index(subsets.size())];
        const auto& cols = subsets[rng.index(subsets.size())];
        const auto r = minor_inequality_check(a, rows, cols);
        EXPECT_LE(r.lhs, r.rhs * (1 + 1e-9) + 1e-12);
    }
}

TEST(CnRatio, OneByOneIsOne) {
    Rng rng(10, "cn-1");
    for (int trial = 0; trial < 10; ++trial) {
        const HHMatrix a = random_hh(rng, 1), b = random_psd(rng, 1);
        EXPECT_NEAR(cn_ratio_single_b(a, b), 1.0, 1e-14);
        EXPECT_NEAR(cn_ratio_many_b(a, {}), 1.0, 1e-14);
    }
    const auto est = cn_ratio_estimator(1, 200, 3);
    EXPECT_NEAR(est.single_b, 1.0, 1e-14);
    EXPECT_NEAR(est.many_b, 1.0, 1e-14);
}

TEST(CnRatio, ZeroNumerator) {
    Rng rng(11, "cn-zero");
    EXPECT_EQ(cn_ratio_single_b(HHMatrix(3), random_psd(rng, 3)), 0.0);
    EXPECT_EQ(cn_ratio_many_b(HHMatrix(3), {random_psd(rng, 3), random_psd(rng, 3)}), 0.0);
}

// The multiset enumeration must match a plain sum over all index tuples.
TEST(CnRatio, ManyBDenominatorMatchesDirectSum) {
    Rng rng(12, "cn-direct");
    const std::size_t n = 3;
    for (int trial = 0; trial < 10; ++trial) {
        const HHMatrix a = random_hh(rng, n);
        const std::vector<HHMatrix> bs{random_psd(rng, n), random_psd(rng, n)};
        double denom = 0.0;
        for (std::size_t i1 = 0; i1 < 2; ++i1)
            for (std::size_t i2 = 0; i2 < 2; ++i2)
                for (const auto& kept : subsets_of_size(n, 2))
                    denom += mixed_discriminant(
                        {principal_minor_keeping(bs[i1], kept), principal_minor_keeping(bs[i2], kept)});
        const double num = std::abs(mixed_discriminant({a, bs[0], bs[1]}));
        EXPECT_LE(rel(cn_ratio_many_b(a, bs), num / (a.max_entry_norm() * denom)), 1e-10);
    }
}

TEST(CnRatio, EstimatorIsReproducibleAndFinite) {
    const auto a = cn_ratio_estimator(2, 2000, 42);
    const auto b = cn_ratio_estimator(2, 2000, 42);
    EXPECT_EQ(a.single_b, b.single_b);
    EXPECT_EQ(a.many_b, b.many_b);
    EXPECT_TRUE(std::isfinite(a.single_b));
    EXPECT_TRUE(std::isfinite(a.many_b));
    EXPECT_GT(a.single_b, 0.0);
    EXPECT_LT(a.single_b, 100.0);
    EXPECT_LT(a.many_b, 100.0);
}

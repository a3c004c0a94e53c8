#include <gtest/gtest.h>

#include "qpsh/random.hpp"

using namespace qpsh;

namespace {

constexpr double kTight = 1e-12;

void expect_quat_near(const Quaternion& a, const Quaternion& b, double tol = kTight) {
    EXPECT_NEAR(a.t, b.t, tol);
    EXPECT_NEAR(a.x, b.x, tol);
    EXPECT_NEAR(a.y, b.y, tol);
    EXPECT_NEAR(a.z, b.z, tol);
}

}  // namespace

TEST(Quaternion, UnitRelations) {
    const auto i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
    EXPECT_EQ(i * i, Quaternion(-1.0));
    EXPECT_EQ(j * j, Quaternion(-1.0));
    EXPECT_EQ(k * k, Quaternion(-1.0));
    EXPECT_EQ(i * j, k);
    EXPECT_EQ(j * i, -k);
    EXPECT_EQ(j * k, i);
    EXPECT_EQ(k * j, -i);
    EXPECT_EQ(k * i, j);
    EXPECT_EQ(i * k, -j);
}

TEST(Quaternion, ProductExamples) {
    const Quaternion q(0.5, -1.25, 3.0, 2.0);
    EXPECT_EQ(Quaternion::one() * q, q);
    EXPECT_EQ((Quaternion(1, 1) * Quaternion(1, -1)), Quaternion(2.0));
}

TEST(Quaternion, InverseExamples) {
    EXPECT_EQ(inv(Quaternion::i()), -Quaternion::i());
    EXPECT_EQ(inv(Quaternion(2.0)), Quaternion(0.5));
    expect_quat_near(inv(Quaternion(1, 0, 1, 0)), Quaternion(0.5, 0, -0.5, 0));
    EXPECT_THROW(inv(Quaternion()), DomainError);
}

TEST(Quaternion, AbsExamples) {
    EXPECT_NEAR(abs(Quaternion::i() + Quaternion::j()), std::sqrt(2.0), kTight);
    EXPECT_EQ(abs(Quaternion()), 0.0);
}

TEST(Quaternion, RandomAlgebraicProperties) {
    Rng rng(7, "quaternion-props");
    for (int trial = 0; trial < 500; ++trial) {
        const Quaternion a = rng.quaternion(), b = rng.quaternion(), c = rng.quaternion();
        const double scale = (1 + abs(a)) * (1 + abs(b)) * (1 + abs(c));
        expect_quat_near((a * b) * c, a * (b * c), kTight * scale);
        expect_quat_near(a * (b + c), a * b + a * c, kTight * scale);
        expect_quat_near((a + b) * c, a * c + b * c, kTight * scale);
        EXPECT_NEAR(abs(a * b), abs(a) * abs(b), kTight * scale);
        expect_quat_near(conj(a * b), conj(b) * conj(a), kTight * scale);
        EXPECT_NEAR((a * b).t, (b * a).t, kTight * scale);
        const Quaternion ai = inv(a);
        expect_quat_near(a * ai, Quaternion::one(), 1e-10);
        expect_quat_near(ai * a, Quaternion::one(), 1e-10);
        // q conj(q) = |q|^2, real and non-negative
        const Quaternion n = a * conj(a);
        EXPECT_NEAR(n.x, 0.0, kTight * scale);
        EXPECT_NEAR(n.y, 0.0, kTight * scale);
        EXPECT_NEAR(n.z, 0.0, kTight * scale);
        EXPECT_NEAR(n.t, norm2(a), kTight * scale);
    }
}

TEST(Seeds, SubstreamsAreDistinctAndStable) {
    EXPECT_EQ(derive_seed(1, "a", 0), derive_seed(1, "a", 0));
    EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "a", 1));
    EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "b", 0));
    EXPECT_NE(derive_seed(1, "a", 0), derive_seed(2, "a", 0));
    Rng r1(3, "s"), r2(3, "s");
    for (int k = 0; k < 10; ++k) EXPECT_EQ(r1.normal(), r2.normal());
}

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qpsh/determinants.hpp"
#include "qpsh/random.hpp"

using namespace qpsh;

namespace {

const Quaternion I = Quaternion::i(), J = Quaternion::j(), K = Quaternion::k();

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST(Minors, DeleteAndKeep) {
    QMatrix a(3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) a(r, c) = Quaternion(10.0 * r + c);
    EXPECT_EQ(minor(a, MinorSpec::deleting({})), a);
    EXPECT_EQ(minor(a, MinorSpec::deleting({0, 1, 2})).size(), 0u);
    const QMatrix m = minor(a, MinorSpec::deleting({0}, {2}));
    EXPECT_EQ(m, (QMatrix{{Quaternion(10.0), Quaternion(11.0)}, {Quaternion(20.0), Quaternion(21.0)}}));
    EXPECT_EQ(minor(a, MinorSpec::keeping({1, 2}, {0, 1})), m);
    EXPECT_THROW(minor(a, MinorSpec::deleting({3})), DomainError);
    EXPECT_EQ(moore_det(principal_minor_deleting(HHMatrix::identity(3), {0, 1, 2})), 1.0);
    EXPECT_EQ(dieudonne_det(QMatrix()), 1.0);
}

TEST(Minors, PrincipalKeepIsHyperhermitian) {
    Rng rng(1, "minors");
    const HHMatrix a = random_hh(rng, 4);
    const HHMatrix m = principal_minor_keeping(a, {0, 2});
    EXPECT_EQ(hyperhermitian_defect(m), 0.0);
    EXPECT_EQ(m(0, 1), a(0, 2));
}

TEST(Dieudonne, Examples) {
    EXPECT_DOUBLE_EQ(dieudonne_det(QMatrix::identity(4)), 1.0);
    EXPECT_NEAR(dieudonne_det(QMatrix::diagonal({Quaternion(1, 1), 2.0 * J})), 2.0 * std::sqrt(2.0), 1e-14);
    const QMatrix c{{Quaternion(1.0), Quaternion(2.0)}, {Quaternion(3.0), Quaternion(4.0)}};
    EXPECT_NEAR(dieudonne_det(c), 2.0, 1e-14);
    const QMatrix equal_rows{{I, J, Quaternion(1.0)}, {I, J, Quaternion(1.0)}, {K, Quaternion(2.0), J}};
    const auto r = dieudonne(equal_rows);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.rank, 2u);
}

TEST(Dieudonne, MatchesStudyDeterminant) {
    Rng rng(2, "dieudonne-study");
    for (std::size_t n = 1; n <= 6; ++n)
        for (int trial = 0; trial < 40; ++trial) {
            const QMatrix x = random_qmatrix(rng, n);
            EXPECT_LE(rel(dieudonne_det(x), oracle::dieudonne_study(x)), 1e-10);
        }
}

TEST(Dieudonne, ComplexMatricesGiveAbsoluteDeterminant) {
    Rng rng(3, "dieudonne-complex");
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Random(4, 4);
        EXPECT_LE(rel(dieudonne_det(from_complex(c)), std::abs(c.determinant())), 1e-10);
    }
}

TEST(Dieudonne, MultiplicativeAndConjugateInvariant) {
    Rng rng(4, "dieudonne-mult");
    for (std::size_t n = 1; n <= 6; ++n)
        for (int trial = 0; trial < 30; ++trial) {
            const QMatrix x = random_qmatrix(rng, n), y = random_qmatrix(rng, n);
            const double dx = dieudonne_det(x), dy = dieudonne_det(y);
            EXPECT_LE(std::abs(dieudonne_det(x * y) - dx * dy), 1e-8 * std::max(1.0, dx * dy));
            EXPECT_LE(rel(dieudonne_det(conj_transpose(x)), dx), 1e-10);
        }
}

TEST(Dieudonne, RowSwapAndBlockRule) {
    Rng rng(5, "dieudonne-block");
    const QMatrix x = random_qmatrix(rng, 3), y = random_qmatrix(rng, 2);
    QMatrix swapped = x;
    for (std::size_t c = 0; c < 3; ++c) std::swap(swapped(0, c), swapped(2, c));
    EXPECT_LE(rel(dieudonne_det(swapped), dieudonne_det(x)), 1e-12);
    QMatrix block(5);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) block(r, c) = x(r, c);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) block(3 + r, 3 + c) = y(r, c);
    EXPECT_LE(rel(dieudonne_det(block), dieudonne_det(x) * dieudonne_det(y)), 1e-10);
}

// Plain transposition does not commute with the quaternion product, and D is
// not transpose invariant: [[1, j], [i, k]] is singular (row 2 = i * row 1)
// while its transpose [[1, i], [j, k]] has D = 2.
TEST(Dieudonne, TransposeCounterexample) {
    const QMatrix x{{Quaternion(1.0), J}, {I, K}};
    EXPECT_EQ(dieudonne(x).rank, 1u);
    EXPECT_EQ(dieudonne_det(x), 0.0);
    EXPECT_NEAR(dieudonne_det(transpose(x)), 2.0, 1e-14);
    EXPECT_NEAR(oracle::dieudonne_study(transpose(x)), 2.0, 1e-12);
}

TEST(Moore, Examples) {
    EXPECT_NEAR(moore_det(HHMatrix::diagonal({1, 2, 3})), 6.0, 1e-13);
    HHMatrix b = HHMatrix::diagonal({2, 3});
    b.set(0, 1, I + J);
    EXPECT_NEAR(moore_det(b), 4.0, 1e-13);
    EXPECT_EQ(moore_det(HHMatrix::identity(5)), 1.0);
    EXPECT_EQ(moore_det(HHMatrix()), 1.0);
}

TEST(Moore, TwoByTwoClosedForm) {
    Rng rng(6, "moore-2x2");
    for (int trial = 0; trial < 100; ++trial) {
        const HHMatrix a = random_hh(rng, 2);
        const double expected = a(0, 0).t * a(1, 1).t - norm2(a(0, 1));
        EXPECT_NEAR(moore_det(a), expected, 1e-12 * (1 + std::abs(expected)) * 10);
    }
}

TEST(Moore, MatchesSchurComplementOracle) {
    Rng rng(7, "moore-schur");
    for (std::size_t n = 1; n <= 6; ++n)
        for (int trial = 0; trial < 50; ++trial) {
            const HHMatrix a = random_hh(rng, n);
            EXPECT_LE(rel(moore_det(a), oracle::moore_det_schur(a)), 1e-8) << "n=" << n;
        }
}

TEST(Moore, QuarticIdentity) {
    Rng rng(8, "moore-quartic");
    for (std::size_t n = 1; n <= 5; ++n)
        for (int trial = 0; trial < 50; ++trial) {
            const HHMatrix a = random_hh(rng, n);
            const double p = moore_det(a);
            const double d = realify(a).determinant();
            EXPECT_LE(std::abs(std::pow(p, 4) - d), 1e-7 * std::max(1.0, std::abs(d)));
        }
}

TEST(Moore, ComplexHermitianAgreesWithClassical) {
    Rng rng(9, "moore-complex");
    for (std::size_t n = 1; n <= 5; ++n)
        for (int trial = 0; trial < 40; ++trial) {
            const HHMatrix a = random_complex_hermitian(rng, n);
            const Eigen::MatrixXcd c = complexify(a).topLeftCorner(n, n);
            EXPECT_NEAR(moore_det(a), c.determinant().real(), 1e-10 * std::max(1.0, std::abs(moore_det(a))));
        }
}

TEST(Moore, CongruenceAndBridge) {
    Rng rng(10, "moore-congruence");
    for (std::size_t n = 1; n <= 5; ++n)
        for (int trial = 0; trial < 40; ++trial) {
            const HHMatrix a = random_hh(rng, n);
            const QMatrix c = random_qmatrix(rng, n);
            const HHMatrix ctc = HHMatrix::symmetrized(conj_transpose(c) * c);
            EXPECT_LE(rel(moore_det(basis_change(a, c)), moore_det(a) * moore_det(ctc)), 1e-8);
            EXPECT_LE(rel(dieudonne_det(a), std::abs(moore_det(a))), 1e-8);
            // det(C*C) = D(C)^2
            EXPECT_LE(rel(moore_det(ctc), std::pow(dieudonne_det(c), 2)), 1e-8);
        }
}

TEST(Moore, PositiveOnPositiveDefinite) {
    Rng rng(11, "moore-positive");
    for (std::size_t n = 1; n <= 6; ++n)
        for (int trial = 0; trial < 50; ++trial) EXPECT_GT(moore_det(random_pd(rng, n)), 0.0);
}

TEST(Moore, HomogeneousOfDegreeN) {
    Rng rng(12, "moore-homogeneous");
    const HHMatrix a = random_hh(rng, 3);
    EXPECT_LE(rel(moore_det(a * 8.0), 512.0 * moore_det(a)), 1e-10);
}

TEST(Expansion, Examples) {
    auto r = expansion_check(HHMatrix(3), {1, 1, 1});
    EXPECT_NEAR(r.lhs, 1.0, 1e-14);
    EXPECT_NEAR(r.rhs, 1.0, 1e-14);
    r = expansion_check(HHMatrix::diagonal({1, -2, 3}), {0.5, 4, -1});
    EXPECT_NEAR(r.lhs, 1.5 * 2 * 2, 1e-12);
    EXPECT_NEAR(r.rhs, 1.5 * 2 * 2, 1e-12);
}

TEST(Expansion, RandomAgreement) {
    Rng rng(13, "expansion");
    for (std::size_t n = 1; n <= 4; ++n)
        for (int trial = 0; trial < 30; ++trial) {
            const HHMatrix a = random_hh(rng, n);
            std::vector<double> t(n);
            for (auto& v : t) v = rng.normal();
            const auto r = expansion_check(a, t);
            EXPECT_LE(rel(r.lhs, r.rhs), 1e-8);
        }
}

TEST(RowSubadditivity, Examples) {
    const QMatrix d = QMatrix::diagonal({Quaternion(2.0), I * 3.0, Quaternion(1, 1)});
    auto r = row_subadditivity_check(d, 0);
    EXPECT_NEAR(r.lhs, 6 * std::sqrt(2.0), 1e-13);
    EXPECT_NEAR(r.rhs, 6 * std::sqrt(2.0), 1e-13);
    QMatrix z = QMatrix::identity(3);
    z(0, 0) = Quaternion();
    r = row_subadditivity_check(z, 0);
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
    EXPECT_THROW(row_subadditivity_check(z, 3), DomainError);
}

TEST(RowSubadditivity, RandomRowsAndColumns) {
    Rng rng(14, "row-subadditivity");
    for (std::size_t n : {4u, 5u})
        for (int trial = 0; trial < 20; ++trial) {
            const QMatrix a = random_qmatrix(rng, n);
            for (std::size_t k = 0; k < n; ++k)
                for (Axis axis : {Axis::Row, Axis::Column}) {
                    const auto r = row_subadditivity_check(a, k, axis);
                    EXPECT_LE(r.lhs, r.rhs * (1 + 1e-9));
                }
        }
}

TEST(Concavity, RandomPositiveDefinitePairs) {
    Rng rng(15, "concavity");
    for (std::size_t n = 1; n <= 4; ++n)
        for (int trial = 0; trial < 30; ++trial) {
            const auto c = concavity_check(random_pd(rng, n), random_pd(rng, n));
            EXPECT_GE(c.superadditive.lhs, c.superadditive.rhs * (1 - 1e-9));
            EXPECT_GE(c.log_midpoint.lhs, c.log_midpoint.rhs - 1e-9);
            EXPECT_GE(c.root_midpoint.lhs, c.root_midpoint.rhs * (1 - 1e-9));
        }
    EXPECT_THROW(concavity_check(HHMatrix::diagonal({1, -1}), HHMatrix::identity(2)), PreconditionFailure);
}

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "qpsh/random.hpp"

using namespace qpsh;

namespace {

const Quaternion I = Quaternion::i(), J = Quaternion::j(), K = Quaternion::k();

}  // namespace

TEST(MatMul, IdentityAndDiagonal) {
    Rng rng(1, "matmul");
    const QMatrix a = random_qmatrix(rng, 3);
    EXPECT_EQ(QMatrix::identity(3) * a, a);
    EXPECT_EQ(a * QMatrix::identity(3), a);
    EXPECT_EQ(QMatrix::diagonal({I, I}) * QMatrix::diagonal({J, J}), QMatrix::diagonal({K, K}));
    EXPECT_THROW(QMatrix(2) * QMatrix(3), SizeMismatch);
}

TEST(MatMul, AdjointReversesProducts) {
    Rng rng(2, "adjoint");
    for (int trial = 0; trial < 100; ++trial) {
        const QMatrix a = random_qmatrix(rng, 3), b = random_qmatrix(rng, 3), c = random_qmatrix(rng, 3);
        EXPECT_LE(max_entry_diff(conj_transpose(a * b), conj_transpose(b) * conj_transpose(a)), 1e-12);
        EXPECT_LE(max_entry_diff((a * b) * c, a * (b * c)), 1e-12);
    }
}

TEST(ConjTranspose, Examples) {
    EXPECT_EQ(conj_transpose(QMatrix{{I}}), QMatrix{{-I}});
    Rng rng(3, "ct");
    const QMatrix a = random_qmatrix(rng, 4);
    EXPECT_EQ(conj_transpose(conj_transpose(a)), a);
    const HHMatrix h = random_hh(rng, 4);
    EXPECT_EQ(conj_transpose(h), h.matrix());
    EXPECT_EQ(hyperhermitian_defect(h), 0.0);
}

TEST(HHMatrix, CheckedRejectsAsymmetry) {
    QMatrix a{{Quaternion(1.0), I}, {I, Quaternion(2.0)}};
    EXPECT_THROW(HHMatrix::checked(a), NotHyperhermitian);
    a(1, 0) = -I;
    EXPECT_NO_THROW(HHMatrix::checked(a));
    a(0, 0) = Quaternion(1, 0.5);
    EXPECT_THROW(HHMatrix::checked(a), NotHyperhermitian);
}

TEST(HHMatrix, SetMirrorsEntries) {
    HHMatrix h(2);
    h.set(0, 1, Quaternion(1, 2, 3, 4));
    h.set(1, 1, Quaternion(5, 6, 0, 0));
    EXPECT_EQ(h(1, 0), Quaternion(1, -2, -3, -4));
    EXPECT_EQ(h(1, 1), Quaternion(5.0));
}

TEST(Complexify, Examples) {
    const Eigen::MatrixXcd cj = complexify(QMatrix{{J}});
    Eigen::MatrixXcd expected(2, 2);
    expected << 0.0, 1.0, -1.0, 0.0;
    EXPECT_LE((cj - expected).norm(), 0.0);
    EXPECT_LE((complexify(QMatrix::identity(3)) - Eigen::MatrixXcd::Identity(6, 6)).norm(), 0.0);
    const Eigen::MatrixXcd ci = complexify(QMatrix{{I}});
    EXPECT_EQ(ci(0, 1), 0.0);
    EXPECT_EQ(ci(0, 0), std::complex<double>(0, 1));
}

TEST(Complexify, StarHomomorphism) {
    Rng rng(4, "complexify");
    for (int trial = 0; trial < 100; ++trial) {
        const QMatrix a = random_qmatrix(rng, 3), b = random_qmatrix(rng, 3);
        EXPECT_LE((complexify(a * b) - complexify(a) * complexify(b)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE((complexify(conj_transpose(a)) - complexify(a).adjoint()).cwiseAbs().maxCoeff(), 0.0);
        EXPECT_LE((complexify(a + b) - complexify(a) - complexify(b)).cwiseAbs().maxCoeff(), 1e-15);
    }
    const HHMatrix h = random_hh(rng, 4);
    const Eigen::MatrixXcd c = complexify(h);
    EXPECT_LE((c - c.adjoint()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Complexify, RoundTripFromComplex) {
    Eigen::MatrixXcd c(2, 2);
    c << std::complex<double>(1, 2), 3.0, std::complex<double>(0, -1), 4.0;
    const QMatrix q = from_complex(c);
    EXPECT_EQ(q(0, 0), Quaternion(1, 2));
    EXPECT_LE((complexify(q).topLeftCorner(2, 2) - c).norm(), 0.0);
}

TEST(Realify, Examples) {
    EXPECT_LE((realify(HHMatrix::identity(1)) - Eigen::MatrixXd::Identity(4, 4)).norm(), 0.0);
    EXPECT_LE((realify(HHMatrix::diagonal({2.5})) - 2.5 * Eigen::MatrixXd::Identity(4, 4)).norm(), 0.0);
}

TEST(Realify, IsTheRealPartOfTheForm) {
    Rng rng(5, "realify");
    for (int trial = 0; trial < 50; ++trial) {
        const HHMatrix a = random_hh(rng, 3);
        const QVector x = random_qvector(rng, 3), y = random_qvector(rng, 3);
        const Eigen::MatrixXd r = realify(a);
        EXPECT_LE((r - r.transpose()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(to_coords(x).dot(r * to_coords(y)), form_eval(a, x, y).t, 1e-12 * (1 + r.norm()) * 10);
    }
}

TEST(Realify, EigenvaluesComeInQuadruples) {
    Rng rng(6, "realify-quad");
    for (int trial = 0; trial < 50; ++trial) {
        const HHMatrix a = random_hh(rng, 3);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(realify(a));
        const Eigen::VectorXd w = es.eigenvalues();
        const double scale = w.cwiseAbs().maxCoeff();
        for (int block = 0; block < 3; ++block)
            for (int k = 1; k < 4; ++k) EXPECT_NEAR(w(4 * block + k), w(4 * block), 1e-9 * scale);
    }
}

TEST(FormEval, Examples) {
    QVector e1{Quaternion::one(), Quaternion()};
    EXPECT_EQ(form_eval(HHMatrix::identity(2), e1, e1), Quaternion::one());
    EXPECT_THROW(form_eval(HHMatrix::identity(2), QVector(3), QVector(2)), SizeMismatch);
}

TEST(FormEval, SemilinearAndHermitian) {
    Rng rng(7, "form");
    for (int trial = 0; trial < 200; ++trial) {
        const HHMatrix a = random_hh(rng, 3);
        const QVector x = random_qvector(rng, 3), y = random_qvector(rng, 3);
        const Quaternion q = rng.quaternion();
        const Quaternion xx = form_eval(a, x, x);
        const double scale = 1 + abs(xx);
        EXPECT_NEAR(xx.x, 0.0, 1e-12 * scale * 10);
        EXPECT_NEAR(xx.y, 0.0, 1e-12 * scale * 10);
        EXPECT_NEAR(xx.z, 0.0, 1e-12 * scale * 10);
        EXPECT_LE(dist(form_eval(a, x, scale_right(y, I)), form_eval(a, x, y) * I), 1e-11);
        EXPECT_LE(dist(form_eval(a, x, scale_right(y, q)), form_eval(a, x, y) * q), 1e-11 * (1 + abs(q)));
        EXPECT_LE(dist(form_eval(a, x, y), conj(form_eval(a, y, x))), 1e-11);
    }
}

TEST(BasisChange, Examples) {
    Rng rng(8, "basis-change");
    const HHMatrix a = random_hh(rng, 3);
    EXPECT_LE(max_entry_diff(basis_change(a, QMatrix::identity(3)), a), 1e-15);
    const QMatrix c = random_qmatrix(rng, 3);
    const HHMatrix b = basis_change(a, c);
    EXPECT_EQ(hyperhermitian_defect(b), 0.0);
    EXPECT_LE(max_entry_diff(b, conj_transpose(c) * a.matrix() * c), 1e-12);
    EXPECT_THROW(basis_change(a, QMatrix(2)), SizeMismatch);
}

TEST(ActionMatrices, MatchQuaternionicOperations) {
    Rng rng(9, "action");
    const QMatrix a = random_qmatrix(rng, 2);
    const Quaternion s = rng.quaternion();
    const QVector v = random_qvector(rng, 2);
    const QVector av = a * v;
    EXPECT_LE((left_action_matrix(a) * to_coords(v) - to_coords(av)).norm(), 1e-12);
    EXPECT_LE((right_action_matrix(s, 2) * to_coords(v) - to_coords(scale_right(v, s))).norm(), 1e-12);
    // A(v s) = (A v) s
    EXPECT_LE((to_coords(a * scale_right(v, s)) - to_coords(scale_right(av, s))).norm(), 1e-12);
}

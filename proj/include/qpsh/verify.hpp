#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qpsh/determinants.hpp"
#include "qpsh/mixed.hpp"
#include "qpsh/psh.hpp"
#include "qpsh/radon.hpp"
#include "qpsh/random.hpp"
#include "qpsh/spectral.hpp"

namespace qpsh::verify {

using json = nlohmann::json;

enum class Verdict { Pass, Fail, Skip };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Skip: return "SKIP";
    }
    return "?";
}

/// FNV-1a over the bit patterns of the inputs of a case.
class Digest {
public:
    Digest& add(double v) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int k = 0; k < 8; ++k) {
            h_ ^= (bits >> (8 * k)) & 0xffU;
            h_ *= 0x100000001b3ULL;
        }
        return *this;
    }
    Digest& add(std::size_t v) { return add(static_cast<double>(v)); }
    Digest& add(const Quaternion& q) { return add(q.t).add(q.x).add(q.y).add(q.z); }
    Digest& add(const QVector& v) {
        add(v.size());
        for (const auto& q : v) add(q);
        return *this;
    }
    Digest& add(const QMatrix& m) {
        add(m.size());
        for (const auto& q : m.entries()) add(q);
        return *this;
    }
    Digest& add(const HHMatrix& m) { return add(m.matrix()); }
    Digest& add(const Point& p) {
        for (Eigen::Index k = 0; k < p.size(); ++k) add(p(k));
        return *this;
    }
    Digest& add(const std::vector<double>& v) {
        for (double d : v) add(d);
        return *this;
    }
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

inline std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string short_fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct CaseRecord {
    std::string id;
    std::uint64_t inputs_digest = 0;
    std::vector<double> observed;
    double tolerance = 0.0;
    Verdict verdict = Verdict::Pass;
};

struct Counts {
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t skip = 0;
    std::size_t total() const { return pass + fail + skip; }
    Counts& operator+=(const Counts& o) {
        pass += o.pass;
        fail += o.fail;
        skip += o.skip;
        return *this;
    }
};

inline Verdict verdict_of(const Counts& c) {
    if (c.fail) return Verdict::Fail;
    if (c.pass == 0 && c.skip) return Verdict::Skip;
    return Verdict::Pass;
}

/// One sub-check: a named family of cases.  criterion is 0 for checks that
/// belong to no numbered acceptance criterion.
struct CheckReport {
    std::string key;
    int criterion = 0;
    std::string title;
    std::vector<CaseRecord> cases;
    std::vector<std::string> notes;
    double worst = 0.0;  ///< largest observed / tolerance ratio, when meaningful

    Counts counts() const {
        Counts c;
        for (const auto& r : cases) {
            if (r.verdict == Verdict::Pass) ++c.pass;
            else if (r.verdict == Verdict::Fail) ++c.fail;
            else ++c.skip;
        }
        return c;
    }
    Verdict verdict() const { return verdict_of(counts()); }

    void add(CaseRecord r) { cases.push_back(std::move(r)); }

    /// Case with observed error err, passing iff err <= tol.
    void bound(std::string id, std::uint64_t digest, std::vector<double> observed, double err, double tol) {
        if (tol > 0.0) worst = std::max(worst, err / tol);
        observed.push_back(err);
        add({std::move(id), digest, std::move(observed), tol, err <= tol ? Verdict::Pass : Verdict::Fail});
    }

    /// Case decided by a predicate.
    void expect(std::string id, std::uint64_t digest, std::vector<double> observed, double tol, bool ok) {
        add({std::move(id), digest, std::move(observed), tol, ok ? Verdict::Pass : Verdict::Fail});
    }

    /// Runs body; a library error inside it is a failing case.
    template <class F>
    void guarded(const std::string& id, F&& body) {
        try {
            body();
        } catch (const Error& e) {
            add({id, 0, {}, 0.0, Verdict::Fail});
            if (notes.size() < 20) notes.push_back(id + ": " + e.what());
        }
    }
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    double scale = 1.0;
    std::vector<CheckReport> checks;
    double wall_seconds = 0.0;

    Counts counts() const {
        Counts c;
        for (const auto& k : checks) c += k.counts();
        return c;
    }
    Verdict verdict() const { return verdict_of(counts()); }

    json to_json(bool with_timing = true) const {
        const Counts c = counts();
        json j;
        j["suite"] = suite;
        j["seed"] = seed;
        j["scale"] = scale;
        j["cases"] = c.total();
        j["passed"] = c.pass;
        j["failed"] = c.fail;
        j["skipped"] = c.skip;
        j["verdict"] = to_string(verdict());
        j["checks"] = json::array();
        for (const auto& k : checks) {
            const Counts kc = k.counts();
            json jk;
            jk["key"] = k.key;
            jk["criterion"] = k.criterion;
            jk["title"] = k.title;
            jk["verdict"] = to_string(k.verdict());
            jk["passed"] = kc.pass;
            jk["failed"] = kc.fail;
            jk["skipped"] = kc.skip;
            jk["notes"] = k.notes;
            jk["cases"] = json::array();
            for (const auto& r : k.cases)
                jk["cases"].push_back({{"id", r.id},
                                       {"inputs_digest", hex(r.inputs_digest)},
                                       {"observed", r.observed},
                                       {"tolerance", r.tolerance},
                                       {"verdict", to_string(r.verdict)}});
            j["checks"].push_back(std::move(jk));
        }
        if (with_timing) {
            j["digest"] = hex(digest());
            j["wall_seconds"] = wall_seconds;
        }
        return j;
    }

    /// FNV-1a of the untimed JSON report.
    std::uint64_t digest() const { return fnv1a(to_json(false).dump()); }

    std::string to_csv() const {
        std::ostringstream os;
        os << "suite,check,criterion,case,inputs_digest,verdict,tolerance,observed\n";
        for (const auto& k : checks)
            for (const auto& r : k.cases) {
                os << suite << ',' << k.key << ',' << k.criterion << ',' << r.id << ',' << hex(r.inputs_digest) << ','
                   << to_string(r.verdict) << ',' << fmt(r.tolerance) << ',';
                for (std::size_t i = 0; i < r.observed.size(); ++i) os << (i ? ";" : "") << fmt(r.observed[i]);
                os << '\n';
            }
        return os.str();
    }
};

struct Config {
    std::uint64_t seed = 1;
    double scale = 1.0;           ///< multiplies case and sample counts
    double budget_seconds = 0.0;  ///< 0 for unlimited; checks past it are SKIP

    std::size_t count(std::size_t base) const {
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(base) * scale)));
    }
};

namespace detail {

inline double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// Central-difference Hessian of the value of f.
inline Eigen::MatrixXd fd_hessian(const ScalarField& f, const Point& x, double h = 1e-4) {
    const Eigen::Index d = x.size();
    Eigen::MatrixXd out(d, d);
    auto at = [&](Eigen::Index i, double si, Eigen::Index j, double sj) {
        Point y = x;
        y(i) += si;
        y(j) += sj;
        return f.value(y);
    };
    const double f0 = f.value(x);
    for (Eigen::Index i = 0; i < d; ++i) {
        out(i, i) = (-at(i, 2 * h, i, 0) + 16 * at(i, h, i, 0) - 30 * f0 + 16 * at(i, -h, i, 0) - at(i, -2 * h, i, 0)) /
                    (12 * h * h);
        for (Eigen::Index j = i + 1; j < d; ++j)
            out(i, j) = out(j, i) = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) / (4 * h * h);
    }
    return out;
}

/// Integral over a hyperplane of a Gaussian of width w and amplitude a.
inline double gaussian_plane_integral(const QVector& center, double width, double amplitude, const Hyperplane& plane) {
    const Quaternion s = inner(plane.nu, center);
    const double dim = 4.0 * static_cast<double>(plane.n() - 1);
    const double w2 = width * width;
    return amplitude * std::pow(2.0 * std::numbers::pi * w2, dim / 2.0) * std::exp(-norm2(plane.p - s) / (2.0 * w2));
}

inline std::string tag(const char* stem, std::size_t n) { return std::string(stem) + std::to_string(n); }

inline std::string id(std::size_t n, std::size_t k) { return "n" + std::to_string(n) + "-" + std::to_string(k); }

inline Point random_point(Rng& rng, std::size_t n, double s) { return to_coords(random_qvector(rng, n)) * s; }

inline HHMatrix shifted_hh(Rng& rng, std::size_t n, double centre) {
    const double shift = std::sqrt(static_cast<double>(n)) * (centre + rng.normal());
    return add_diagonal(random_hh(rng, n), std::vector<double>(n, shift));
}

inline void summarize(CheckReport& c, const char* what) {
    c.notes.push_back(std::string("worst ") + what + " / tolerance = " + short_fmt(c.worst));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// algebra
// ---------------------------------------------------------------------------

inline std::vector<CheckReport> check_quaternion_axioms(const Config& cfg) {
    CheckReport c{"quaternion-axioms", 0, "Quaternion algebra: associativity, norm, conjugation, inverse", {}, {}};
    const std::size_t cases = cfg.count(1000);
    for (std::size_t k = 0; k < cases; ++k) {
        Rng rng(cfg.seed, "quaternion-axioms", k);
        const Quaternion a = rng.quaternion(), b = rng.quaternion(), d = rng.quaternion();
        const double s = (1.0 + abs(a)) * (1.0 + abs(b)) * (1.0 + abs(d));
        const double assoc = abs((a * b) * d - a * (b * d));
        const double normm = std::abs(abs(a * b) - abs(a) * abs(b));
        const double conjr = abs(conj(a * b) - conj(b) * conj(a));
        const double invr = abs(a * inv(a) - Quaternion::one()) + abs(inv(a) * a - Quaternion::one());
        const double err = std::max({assoc, normm, conjr, invr}) / s;
        c.bound(std::to_string(k), Digest().add(a).add(b).add(d).value(), {assoc, normm, conjr, invr}, err, 1e-14);
    }
    detail::summarize(c, "residual");
    return {c};
}

inline std::vector<CheckReport> check_matrix_homomorphisms(const Config& cfg) {
    CheckReport c{"matrix-homomorphisms", 0, "complexify is a *-homomorphism; (XY)* = Y* X*", {}, {}};
    const std::size_t cases = cfg.count(500);
    for (std::size_t k = 0; k < cases; ++k) {
        const std::size_t n = 1 + k % 5;
        Rng rng(cfg.seed, "matrix-homomorphisms", k);
        const QMatrix x = random_qmatrix(rng, n), y = random_qmatrix(rng, n);
        const QMatrix xy = x * y;
        const double scale = 1.0 + xy.max_entry_norm();
        const double adj = (complexify(xy) - complexify(x) * complexify(y)).cwiseAbs().maxCoeff();
        const double star = max_entry_diff(conj_transpose(xy), conj_transpose(y) * conj_transpose(x));
        const double back = (complexify(conj_transpose(x)) - complexify(x).adjoint()).cwiseAbs().maxCoeff();
        const double err = std::max({adj, star, back}) / scale;
        c.bound(detail::id(n, k), Digest().add(x).add(y).value(), {adj, star, back}, err, 1e-12);
    }
    detail::summarize(c, "residual");
    return {c};
}

// ---------------------------------------------------------------------------
// moore
// ---------------------------------------------------------------------------

inline std::vector<CheckReport> check_moore_quartic(const Config& cfg) {
    CheckReport c{"moore-quartic", 1, "Moore quartic identity", {}, {}};
    const std::size_t per_n = cfg.count(1000);
    for (std::size_t n = 1; n <= 5; ++n) {
        for (std::size_t k = 0; k < per_n; ++k) {
            const std::string id = detail::id(n, k);
            c.guarded(id, [&] {
                Rng rng(cfg.seed, detail::tag("moore-quartic-n", n), k);
                const HHMatrix a = random_hh(rng, n);
                const double m = moore_det(a);
                const double r = realify(a).determinant();
                c.bound(id, Digest().add(a).value(), {m, r}, detail::rel_diff(std::pow(m, 4), r), 1e-7);
            });
        }
        const double id_det = moore_det(HHMatrix::identity(n));
        c.expect("identity-n" + std::to_string(n), Digest().add(n).value(), {id_det}, 0.0, id_det == 1.0);
    }
    detail::summarize(c, "relative error");
    return {c};
}

inline std::vector<CheckReport> check_complex_hermitian(const Config& cfg) {
    CheckReport c{"moore-complex", 2, "Moore determinant agrees with the classical one on complex hermitian matrices",
                  {}, {}};
    const std::size_t cases = cfg.count(500);
    for (std::size_t k = 0; k < cases; ++k) {
        const std::size_t n = 1 + k % 5;
        const std::string id = detail::id(n, k);
        c.guarded(id, [&] {
            Rng rng(cfg.seed, "moore-complex", k);
            const HHMatrix a = random_complex_hermitian(rng, n);
            Eigen::MatrixXcd h(n, n);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = 0; s < n; ++s) h(r, s) = {a(r, s).t, a(r, s).x};
            const double classical = h.determinant().real();
            const double m = moore_det(a);
            c.bound(id, Digest().add(a).value(), {m, classical}, std::abs(m - classical), 1e-10);
        });
    }
    detail::summarize(c, "absolute error");
    return {c};
}

inline std::vector<CheckReport> check_transformation_law(const Config& cfg) {
    CheckReport c{"moore-transform", 3, "moore_det(C*AC) = moore_det(A) moore_det(C*C)", {}, {}};
    const std::size_t cases = cfg.count(1000);
    for (std::size_t k = 0; k < cases; ++k) {
        const std::size_t n = 1 + k % 5;
        const std::string id = detail::id(n, k);
        c.guarded(id, [&] {
            Rng rng(cfg.seed, "moore-transform", k);
            const HHMatrix a = random_hh(rng, n);
            const QMatrix cm = random_qmatrix(rng, n);
            const double lhs = moore_det(basis_change(a, cm));
            const double rhs = moore_det(a) * moore_det(HHMatrix::symmetrized(conj_transpose(cm) * cm));
            c.bound(id, Digest().add(a).add(cm).value(), {lhs, rhs}, detail::rel_diff(lhs, rhs), 1e-8);
        });
    }
    detail::summarize(c, "relative error");
    return {c};
}

inline std::vector<CheckReport> check_expansion(const Config& cfg) {
    CheckReport c{"moore-expansion", 4, "det(A + diag t) against the sum over principal minors", {}, {}};
    const std::size_t cases = cfg.count(200);
    for (std::size_t k = 0; k < cases; ++k) {
        const std::size_t n = 1 + k % 4;
        const std::string id = detail::id(n, k);
        c.guarded(id, [&] {
            Rng rng(cfg.seed, "moore-expansion", k);
            const HHMatrix a = random_hh(rng, n);
            std::vector<double> t(n);
            for (auto& v : t) v = rng.normal();
            const SidePair s = expansion_check(a, t);
            c.bound(id, Digest().add(a).add(t).value(), {s.lhs, s.rhs}, detail::rel_diff(s.lhs, s.rhs), 1e-8);
        });
    }
    detail::summarize(c, "relative error");
    return {c};
}

inline std::vector<CheckReport> check_concavity(const Config& cfg) {
    CheckReport sup{"concavity-superadditive", 11, "det(A+B) >= det A + det B", {}, {}};
    CheckReport logm{"concavity-log", 11, "Midpoint concavity of log det", {}, {}};
    CheckReport root{"concavity-root", 11, "Midpoint concavity of det^(1/n)", {}, {}};
    constexpr double kSlack = 1e-9;
    const std::size_t cases = cfg.count(500);
    for (std::size_t k = 0; k < cases; ++k) {
        const std::size_t n = 1 + k % 4;
        const std::string id = detail::id(n, k);
        Rng rng(cfg.seed, "concavity", k);
        const HHMatrix a = random_pd(rng, n), b = random_pd(rng, n);
        const std::uint64_t dg = Digest().add(a).add(b).value();
        try {
            const ConcavityCheck r = concavity_check(a, b);
            sup.expect(id, dg, {r.superadditive.lhs, r.superadditive.rhs}, kSlack,
                       r.superadditive.lhs >= r.superadditive.rhs * (1.0 - kSlack));
            logm.expect(id, dg, {r.log_midpoint.lhs, r.log_midpoint.rhs}, kSlack,
                        r.log_midpoint.lhs >= r.log_midpoint.rhs - kSlack);
            root.expect(id, dg, {r.root_midpoint.lhs, r.root_midpoint.rhs}, kSlack,
                        r.root_midpoint.lhs >= r.root_midpoint.rhs * (1.0 - kSlack));
        } catch (const Error& e) {
            for (auto* ch : {&sup, &logm, &root}) {
                ch->add({id, dg, {}, kSlack, Verdict::Fail});
                ch->notes.push_back(id + ": " + e.what());
            }
        }
    }
    return {sup, logm, root};
}

// ---------------------------------------------------------------------------
// spectral
// ---------------------------------------------------------------------------

inline std::vector<CheckReport> check_sylvester(const Config& cfg) {
    CheckReport c{"sylvester", 5, "Sylvester criterion agrees with the eigenvalue test", {}, {}};
    const std::size_t per_n = cfg.count(1000);
    std::size_t band = 0, pd = 0, total = 0;
    for (std::size_t n = 2; n <= 5; ++n) {
        std::size_t accepted = 0;
        for (std::size_t draw = 0; accepted < per_n && draw < 10 * per_n; ++draw) {
            Rng rng(cfg.seed, detail::tag("sylvester-n", n), draw);
            const HHMatrix a = detail::shifted_hh(rng, n, 2.0);
            const SylvesterResult s = sylvester(a);
            const double lo = min_eigenvalue(a);
            if (s.verdict == Definiteness::Indeterminate || std::abs(lo) <= 1e-9 * (1.0 + a.max_entry_norm())) {
                ++band;
                continue;
            }
            const bool eig_pd = lo > 0.0;
            pd += eig_pd;
            ++total;
            c.expect(detail::id(n, draw), Digest().add(a).value(),
                     {lo, s.positive_definite() ? 1.0 : 0.0, eig_pd ? 1.0 : 0.0}, 0.0, s.positive_definite() == eig_pd);
            ++accepted;
        }
    }
    c.notes.push_back(std::to_string(pd) + " of " + std::to_string(total) + " cases positive definite");
    c.notes.push_back(std::to_string(band) + " draws in the indeterminate band replaced");
    return {c};
}

inline std::vector<CheckReport> check_eigen_reconstruction(const Config& cfg) {
    CheckReport c{"eigen-reconstruction", 0, "A C = C diag(lambda), C*C = Id, prod lambda = moore_det", {}, {}};
    const std::size_t cases = cfg.count(500);
    for (std::size_t k = 0; k < cases; ++k) {
        const std::size_t n = 1 + k % 5;
        const std::string id = detail::id(n, k);
        c.guarded(id, [&] {
            Rng rng(cfg.seed, "eigen-reconstruction", k);
            const HHMatrix a = random_hh(rng, n);
            const HHEigenDecomposition e = hh_eigen(a);
            QVector lam(n);
            double prod = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                lam[i] = Quaternion(e.lambda[i]);
                prod *= e.lambda[i];
            }
            const double scale = 1.0 + a.max_entry_norm();
            const double recon = max_entry_diff(a.matrix() * e.C, e.C * QMatrix::diagonal(lam)) / scale;
            const double ortho = max_entry_diff(conj_transpose(e.C) * e.C, QMatrix::identity(n));
            const double det = detail::rel_diff(prod, moore_det(a));
            c.bound(id, Digest().add(a).value(), {recon, ortho, det}, std::max({recon, ortho, det}), 1e-8);
        });
    }
    detail::summarize(c, "residual");
    return {c};
}

// ---------------------------------------------------------------------------
// dieudonne
// ---------------------------------------------------------------------------

inline std::vector<CheckReport> check_dieudonne(const Config& cfg) {
    constexpr double kTol = 1e-8;
    const std::size_t cases = cfg.count(1000);
    CheckReport mult{"dieudonne-multiplicative", 6, "D(XY) = D(X) D(Y)", {}, {}};
    CheckReport tr{"dieudonne-transpose", 6, "D(X^t) = D(X)", {}, {}};
    CheckReport star{"dieudonne-conjugate", 6, "D(X*) = D(X)", {}, {}};
    CheckReport hh{"dieudonne-moore", 6, "D(A) = |moore_det(A)| on hyperhermitian A", {}, {}};
    CheckReport tri{"dieudonne-diagonal", 6, "D of a triangular matrix is the product of the diagonal norms", {}, {}};
    CheckReport sing{"dieudonne-singular", 6, "A row that is a left multiple of another gives D = 0", {}, {}};
    for (std::size_t k = 0; k < cases; ++k) {
        const std::size_t n = 1 + k % 5;
        const std::string id = detail::id(n, k);
        mult.guarded(id, [&] {
            Rng rng(cfg.seed, "dieudonne-multiplicative", k);
            const QMatrix x = random_qmatrix(rng, n), y = random_qmatrix(rng, n);
            const double lhs = dieudonne_det(x * y), rhs = dieudonne_det(x) * dieudonne_det(y);
            mult.bound(id, Digest().add(x).add(y).value(), {lhs, rhs}, detail::rel_diff(lhs, rhs), kTol);
        });
        tr.guarded(id, [&] {
            Rng rng(cfg.seed, "dieudonne-transpose", k);
            const QMatrix x = random_qmatrix(rng, n);
            const double lhs = dieudonne_det(transpose(x)), rhs = dieudonne_det(x);
            tr.bound(id, Digest().add(x).value(), {lhs, rhs}, detail::rel_diff(lhs, rhs), kTol);
        });
        star.guarded(id, [&] {
            Rng rng(cfg.seed, "dieudonne-conjugate", k);
            const QMatrix x = random_qmatrix(rng, n);
            const double lhs = dieudonne_det(conj_transpose(x)), rhs = dieudonne_det(x);
            star.bound(id, Digest().add(x).value(), {lhs, rhs}, detail::rel_diff(lhs, rhs), kTol);
        });
        hh.guarded(id, [&] {
            Rng rng(cfg.seed, "dieudonne-moore", k);
            const HHMatrix a = random_hh(rng, n);
            const double lhs = dieudonne_det(a.matrix()), rhs = std::abs(moore_det(a));
            hh.bound(id, Digest().add(a).value(), {lhs, rhs}, detail::rel_diff(lhs, rhs), kTol);
        });
        tri.guarded(id, [&] {
            Rng rng(cfg.seed, "dieudonne-diagonal", k);
            QMatrix x(n);
            double prod = 1.0;
            const bool strictly_diagonal = k % 2 == 0;
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t s = r; s < n; ++s)
                    if (s == r || !strictly_diagonal) x(r, s) = rng.quaternion();
            for (std::size_t r = 0; r < n; ++r) prod *= abs(x(r, r));
            const double lhs = dieudonne_det(x);
            tri.bound(id, Digest().add(x).value(), {lhs, prod}, detail::rel_diff(lhs, prod), kTol);
        });
        const std::size_t ns = 2 + k % 4;
        const std::string sid = detail::id(ns, k);
        sing.guarded(sid, [&] {
            Rng rng(cfg.seed, "dieudonne-singular", k);
            QMatrix x = random_qmatrix(rng, ns);
            const std::size_t src = rng.index(ns);
            std::size_t dst = rng.index(ns - 1);
            if (dst >= src) ++dst;
            const Quaternion q = rng.quaternion();
            for (std::size_t s = 0; s < ns; ++s) x(dst, s) = q * x(src, s);
            const DieudonneResult d = dieudonne(x);
            sing.expect(sid, Digest().add(x).value(), {d.value, static_cast<double>(d.rank)}, 0.0,
                        d.value == 0.0 && d.rank < ns);
        });
    }
    for (auto* ch : {&mult, &tr, &star, &hh, &tri}) detail::summarize(*ch, "relative error");
    return {mult, tr, star, hh, tri, sing};
}

inline std::vector<CheckReport> check_row_subadditivity(const Config& cfg) {
    CheckReport c{"row-subadditivity", 7, "D(A) <= sum |a_ri| D(M_ri) along every row and column", {}, {}};
    constexpr double kSlack = 1e-9;
    const std::size_t cases = cfg.count(1000);
    for (std::size_t n : {4u, 5u}) {
        for (std::size_t k = 0; k < cases; ++k) {
            const std::string id = detail::id(n, k);
            c.guarded(id, [&] {
                Rng rng(cfg.seed, detail::tag("row-subadditivity-n", n), k);
                const QMatrix a = random_qmatrix(rng, n);
                double ratio = 0.0;
                bool ok = true;
                for (Axis axis : {Axis::Row, Axis::Column})
                    for (std::size_t i = 0; i < n; ++i) {
                        const SidePair s = row_subadditivity_check(a, i, axis);
                        ok = ok && s.lhs <= s.rhs * (1.0 + kSlack);
                        if (s.rhs > 0.0) ratio = std::max(ratio, s.lhs / s.rhs);
                    }
                c.expect(id, Digest().add(a).value(), {ratio}, kSlack, ok);
            });
        }
    }
    return {c};
}

inline std::vector<CheckReport> check_minor_inequality(const Config& cfg) {
    CheckReport c{"minor-inequality", 8, "2 D(M'_IJ) <= D(M'_II) + D(M'_JJ) on PSD matrices", {}, {}};
    constexpr double kSlack = 1e-9;
    const std::size_t cases = cfg.count(1000);
    for (std::size_t k = 0; k < cases; ++k) {
        const std::size_t n = 1 + k % 5;
        const std::string id = detail::id(n, k);
        c.guarded(id, [&] {
            Rng rng(cfg.seed, "minor-inequality", k);
            const HHMatrix a = random_psd(rng, n, 1 + rng.index(n));
            Digest dg;
            dg.add(a);
            bool ok = true;
            double ratio = 0.0;
            for (int pair = 0; pair < 50; ++pair) {
                const std::size_t size = 1 + rng.index(n);
                const auto pick = [&] {
                    std::vector<std::size_t> all(n);
                    for (std::size_t i = 0; i < n; ++i) all[i] = i;
                    std::shuffle(all.begin(), all.end(), rng.engine());
                    all.resize(size);
                    std::sort(all.begin(), all.end());
                    return all;
                };
                const auto rows = pick(), cols = pick();
                for (std::size_t i : rows) dg.add(i);
                for (std::size_t i : cols) dg.add(i);
                const SidePair s = minor_inequality_check(a, rows, cols);
                ok = ok && s.lhs <= s.rhs * (1.0 + kSlack);
                if (s.rhs > 0.0) ratio = std::max(ratio, s.lhs / s.rhs);
            }
            c.expect(id, dg.value(), {ratio}, kSlack, ok);
        });
    }
    return {c};
}

// ---------------------------------------------------------------------------
// mixed
// ---------------------------------------------------------------------------

inline std::vector<CheckReport> check_aleksandrov_signature(const Config& cfg) {
    CheckReport c{"aleksandrov-signature", 9, "Inertia (1, n(2n-1)-1, 0) of the Aleksandrov form", {}, {}};
    for (std::size_t n : {2u, 3u}) {
        const std::size_t cases = n == 2 ? 1 : cfg.count(50);
        const std::size_t dim = n * (2 * n - 1);
        for (std::size_t k = 0; k < cases; ++k) {
            const std::string id = detail::id(n, k);
            c.guarded(id, [&] {
                Rng rng(cfg.seed, detail::tag("aleksandrov-signature-n", n), k);
                std::vector<HHMatrix> fixed;
                Digest dg;
                dg.add(n);
                for (std::size_t i = 0; i + 2 < n; ++i) {
                    fixed.push_back(random_pd(rng, n));
                    dg.add(fixed.back());
                }
                const Inertia in = aleksandrov_signature(fixed, n);
                c.expect(id, dg.value(),
                         {static_cast<double>(in.plus), static_cast<double>(in.minus), static_cast<double>(in.zero)}, 0.0,
                         in == Inertia{1, dim - 1, 0});
            });
        }
    }
    c.notes.push_back("n = 2 has no fixed matrices, so its form is a single case");
    return {c};
}

inline std::vector<CheckReport> check_aleksandrov_inequality(const Config& cfg) {
    CheckReport ineq{"aleksandrov-inequality", 10, "det(A_1, A_2, X)^2 >= det(A_1, A_2, A_2) det(A_1, X, X)", {}, {}};
    CheckReport prop{"aleksandrov-equality", 10, "Equality when X is proportional to A_2", {}, {}};
    CheckReport strict{"aleksandrov-strict", 10, "Strict gap for X not proportional to A_2", {}, {}};
    constexpr std::size_t n = 3;
    const std::size_t cases = cfg.count(500);
    for (std::size_t k = 0; k < cases; ++k) {
        const std::string id = detail::id(n, k);
        ineq.guarded(id, [&] {
            Rng rng(cfg.seed, "aleksandrov-inequality", k);
            const std::vector<HHMatrix> fixed{random_pd(rng, n), random_pd(rng, n)};
            const HHMatrix x = random_hh(rng, n);
            const AleksandrovCheck r = aleksandrov_inequality_check(fixed, x);
            ineq.expect(id, Digest().add(fixed[0]).add(fixed[1]).add(x).value(), {r.lhs, r.rhs, r.gap}, 1e-9,
                        r.gap >= -1e-9 * r.scale);
        });
        prop.guarded(id, [&] {
            Rng rng(cfg.seed, "aleksandrov-equality", k);
            const std::vector<HHMatrix> fixed{random_pd(rng, n), random_pd(rng, n)};
            const double s = rng.normal();
            const HHMatrix x = fixed[1] * s;
            const AleksandrovCheck r = aleksandrov_inequality_check(fixed, x);
            const double err = r.scale > 0.0 ? std::abs(r.gap) / r.scale : 0.0;
            prop.bound(id, Digest().add(fixed[0]).add(fixed[1]).add(s).value(), {r.lhs, r.rhs, r.gap}, err, 1e-8);
        });
    }
    const std::size_t strict_cases = cfg.count(100);
    double least = INFINITY;
    for (std::size_t k = 0; k < strict_cases; ++k) {
        const std::string id = detail::id(n, k);
        strict.guarded(id, [&] {
            Rng rng(cfg.seed, "aleksandrov-strict", k);
            const std::vector<HHMatrix> fixed{random_pd(rng, n), random_pd(rng, n)};
            HHMatrix y = random_hh(rng, n);
            y = y * (fixed[1].max_entry_norm() / y.max_entry_norm());
            const double s = rng.uniform(-1.0, 1.0);
            const HHMatrix x = fixed[1] * s + y;
            const AleksandrovCheck r = aleksandrov_inequality_check(fixed, x);
            const double ratio = r.scale > 0.0 ? r.gap / r.scale : 0.0;
            least = std::min(least, ratio);
            strict.expect(id, Digest().add(fixed[0]).add(fixed[1]).add(x).value(), {r.lhs, r.rhs, r.gap, ratio}, 1e-4,
                          ratio > 1e-4);
        });
    }
    detail::summarize(prop, "relative gap");
    strict.notes.push_back("smallest gap / scale = " + short_fmt(least));
    return {ineq, prop, strict};
}

inline std::vector<CheckReport> check_mixed_routes(const Config& cfg) {
    CheckReport routes{"mixed-routes", 0, "Inclusion-exclusion and interpolation agree", {}, {}};
    CheckReport diag{"mixed-diagonal", 0, "det(A, ..., A) = moore_det(A)", {}, {}};
    CheckReport pos{"mixed-positive", 0, "Mixed discriminant of positive definite matrices is positive", {}, {}};
    const std::size_t cases = cfg.count(200);
    for (std::size_t k = 0; k < cases; ++k) {
        const std::size_t n = 1 + k % 4;
        const std::string id = detail::id(n, k);
        routes.guarded(id, [&] {
            Rng rng(cfg.seed, "mixed-routes", k);
            std::vector<HHMatrix> slots;
            Digest dg;
            double scale = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                slots.push_back(random_hh(rng, n));
                dg.add(slots.back());
                scale *= 1.0 + slots.back().max_entry_norm();
            }
            const double a = mixed_discriminant(slots), b = mixed_discriminant_interpolated(slots);
            routes.bound(id, dg.value(), {a, b}, std::abs(a - b) / scale, 1e-10);
        });
        diag.guarded(id, [&] {
            Rng rng(cfg.seed, "mixed-diagonal", k);
            const HHMatrix a = random_hh(rng, n);
            const double lhs = mixed_discriminant(std::vector<HHMatrix>(n, a)), rhs = moore_det(a);
            diag.bound(id, Digest().add(a).value(), {lhs, rhs}, detail::rel_diff(lhs, rhs), 1e-8);
        });
        pos.guarded(id, [&] {
            Rng rng(cfg.seed, "mixed-positive", k);
            std::vector<HHMatrix> slots;
            Digest dg;
            for (std::size_t i = 0; i < n; ++i) {
                slots.push_back(random_pd(rng, n));
                dg.add(slots.back());
            }
            const double d = mixed_discriminant(slots);
            pos.expect(id, dg.value(), {d}, 0.0, d > 0.0);
        });
    }
    detail::summarize(routes, "scaled difference");
    detail::summarize(diag, "relative error");
    return {routes, diag, pos};
}

inline std::vector<CheckReport> check_cn_estimate(const Config& cfg) {
    CheckReport c{"cn-estimate", 0, "Empirical suprema of the bounded minor ratios are finite", {}, {}};
    for (std::size_t n = 1; n <= 4; ++n) {
        const std::string id = "n" + std::to_string(n);
        c.guarded(id, [&] {
            const std::uint64_t seed = derive_seed(cfg.seed, "cn-estimate", n);
            const CnEstimate e = cn_ratio_estimator(n, cfg.count(2000), seed);
            c.expect(id, Digest().add(n).add(static_cast<double>(seed)).value(), {e.single_b, e.many_b}, 0.0,
                     std::isfinite(e.single_b) && std::isfinite(e.many_b));
        });
    }
    return {c};
}

// ---------------------------------------------------------------------------
// psh
// ---------------------------------------------------------------------------

inline std::vector<CheckReport> check_fueter_normalization(const Config& cfg) {
    CheckReport exact{"fueter-quadratic", 12, "Fueter Hessian of q*Aq + b + c is 8A", {}, {}};
    CheckReport fd{"fueter-finite-difference", 12, "Fueter Hessian matches central differences", {}, {}};
    const std::size_t cases = cfg.count(200);
    for (std::size_t k = 0; k < cases; ++k) {
        const std::size_t n = 1 + k % 3;
        const std::string id = detail::id(n, k);
        Rng rng(cfg.seed, "fueter-normalization", k);
        const HHMatrix a = random_hh(rng, n);
        const QVector b = random_qvector(rng, n);
        const double c0 = rng.normal();
        const Point p = detail::random_point(rng, n, 1.0);
        const std::uint64_t dg = Digest().add(a).add(b).add(c0).add(p).value();
        exact.guarded(id, [&] {
            const ScalarField f = ScalarField::quadratic(a, b, c0);
            const HHMatrix h = fueter_hessian(f, p);
            const double err = max_entry_diff(h.matrix(), (a * 8.0).matrix());
            exact.bound(id, dg, {}, err, 1e-8);
            const HHMatrix hfd = fueter_contract(detail::fd_hessian(f, p, 1e-3));
            const double scale = std::max(h.max_entry_norm(), 1e-300);
            fd.bound(id, dg, {}, max_entry_diff(hfd.matrix(), h.matrix()) / scale, 1e-5);
        });
    }
    detail::summarize(exact, "entry error");
    detail::summarize(fd, "relative error");
    return {exact, fd};
}

inline std::vector<CheckReport> check_psh_classification(const Config& cfg) {
    CheckReport c{"psh-quadratic", 13, "Quadratic field is psh iff A is positive semidefinite", {}, {}};
    const std::size_t cases = cfg.count(500);
    std::size_t band = 0, psd = 0;
    std::size_t accepted = 0;
    for (std::size_t draw = 0; accepted < cases && draw < 10 * cases; ++draw) {
        const std::size_t n = 1 + draw % 3;
        Rng rng(cfg.seed, "psh-quadratic", draw);
        const HHMatrix a = detail::shifted_hh(rng, n, 1.0);
        const double lo = min_eigenvalue(a);
        if (std::abs(8.0 * lo) <= 1e-8 * (1.0 + 8.0 * a.max_entry_norm())) {
            ++band;
            continue;
        }
        const PshVerdict v = is_psh(ScalarField::quadratic(a), Domain::ball(n, 1.0), 16,
                                    derive_seed(cfg.seed, "psh-quadratic-points", draw));
        const bool expected = lo >= 0.0;
        psd += expected;
        c.expect(detail::id(n, draw), Digest().add(a).value(), {lo, v.psh ? 1.0 : 0.0}, 0.0, v.psh == expected);
        ++accepted;
    }
    c.notes.push_back(std::to_string(psd) + " of " + std::to_string(accepted) + " matrices positive semidefinite");
    c.notes.push_back(std::to_string(band) + " draws in the margin band replaced");
    return {c};
}

namespace detail {

inline ScalarField random_exact_field(Rng& rng, std::size_t n, std::size_t kind) {
    switch (kind % 6) {
        case 0:
            return ScalarField::quadratic(random_hh(rng, n), random_qvector(rng, n), rng.normal());
        case 1: {
            QVector center = random_qvector(rng, n);
            for (auto& q : center) q = q * 0.5;
            return ScalarField::gaussian(center, rng.uniform(0.7, 1.5), rng.uniform(0.5, 2.0));
        }
        case 2: {
            QVector center = random_qvector(rng, n);
            for (auto& q : center) q = q * 0.3;
            return ScalarField::cutoff(ScalarField::quadratic(random_pd(rng, n), random_qvector(rng, n), 0.0), 2.5,
                                       center);
        }
        case 3: {
            std::vector<std::pair<QVector, double>> pieces;
            for (int i = 0; i < 3; ++i) pieces.emplace_back(random_qvector(rng, n), rng.normal());
            return ScalarField::smooth_max(std::move(pieces), 0.5);
        }
        case 4: {
            std::vector<HolomorphicTerm> terms;
            for (int t = 0; t < 2; ++t) {
                HolomorphicTerm term;
                term.coef = {rng.normal(), rng.normal()};
                term.exponents.resize(2 * n);
                for (auto& e : term.exponents) e = static_cast<int>(rng.index(3));
                terms.push_back(std::move(term));
            }
            return ScalarField::holomorphic_modulus_squared(n, std::move(terms));
        }
        default:
            return ScalarField::gaussian(random_qvector(rng, n), 1.2, 1.0) *
                   ScalarField::quadratic(random_hh(rng, n), random_qvector(rng, n), rng.normal());
    }
}

}  // namespace detail

inline std::vector<CheckReport> check_transform_claim(const Config& cfg) {
    CheckReport c{"psh-transform", 14, "Fueter Hessian of f(A(q a)) is A* H(f)(A(q a)) A", {}, {}};
    const std::size_t cases = cfg.count(200);
    for (std::size_t k = 0; k < cases; ++k) {
        const std::size_t n = 1 + k % 3;
        const std::string id = detail::id(n, k) + "-kind" + std::to_string(k % 6);
        c.guarded(id, [&] {
            Rng rng(cfg.seed, "psh-transform", k);
            const ScalarField f = detail::random_exact_field(rng, n, k);
            const QMatrix a = random_qmatrix(rng, n) * 0.5;
            const Quaternion s = rng.unit_quaternion();
            const Point p = detail::random_point(rng, n, 0.5);
            const TransformResidual r = linear_transform_check(f, a, s, p);
            c.bound(id, Digest().add(k % 6).add(a).add(s).add(p).value(), {r.residual, r.scale}, r.residual / r.scale,
                    1e-7);
        });
    }
    detail::summarize(c, "scaled residual");
    return {c};
}

inline std::vector<CheckReport> check_l_symmetry(const Config& cfg) {
    CheckReport pairs{"l-symmetry", 15, "All permutations of L(f_0, f_1, f_2) agree", {}, {}};
    CheckReport se{"l-symmetry-precision", 15, "Standard errors below 1% of the estimate", {}, {}};
    constexpr std::size_t n = 2;
    std::vector<ScalarField> fields;
    Digest dg;
    for (std::size_t k = 0; k <= n; ++k) {
        Rng rng(cfg.seed, "l-symmetry-field", k);
        const HHMatrix a = random_pd(rng, n);
        const QVector b = random_qvector(rng, n);
        const double c0 = rng.normal();
        dg.add(a).add(b).add(c0);
        fields.push_back(ScalarField::quadratic(a, b, c0) * ScalarField::bump(QVector(n), 1.0));
    }
    const std::size_t samples = cfg.count(1000000);
    const std::uint64_t seed = derive_seed(cfg.seed, "l-symmetry");
    dg.add(samples).add(static_cast<double>(seed));
    const auto est = l_functional_permutations(fields, Domain::ball(n, 1.0), samples, seed);
    auto name = [&](std::size_t o) {
        std::string s;
        for (std::size_t v : est.orders[o]) s += std::to_string(v);
        return s;
    };
    for (std::size_t o = 0; o < est.orders.size(); ++o) {
        const Estimate& e = est.estimates[o];
        const double rel = e.value != 0.0 ? e.std_error / std::abs(e.value) : INFINITY;
        se.bound(name(o), dg.value(), {e.value, e.std_error}, rel, 0.01);
        for (std::size_t q = o + 1; q < est.orders.size(); ++q) {
            const Estimate& f = est.estimates[q];
            const double bound = 3.0 * std::hypot(e.std_error, f.std_error);
            pairs.expect(name(o) + "-" + name(q), dg.value(), {e.value, f.value, std::abs(e.value - f.value)}, bound,
                         std::abs(e.value - f.value) <= bound);
        }
    }
    detail::summarize(se, "relative standard error");
    return {pairs, se};
}

inline std::vector<CheckReport> check_convergence(const Config& cfg) {
    CheckReport analytic{"ma-converge-analytic", 16, "Gap for f_N = (1 + 1/N)|q|^2 matches the closed form", {}, {}};
    CheckReport bump{"ma-converge-bump", 16, "Bump perturbation: monotone gaps, final gap within 2%", {}, {}};
    constexpr std::size_t n = 2;
    const Domain dom = Domain::ball(n, 1.0);
    const ScalarField phi = ScalarField::bump(QVector(n), 1.0);
    const ScalarField f = norm_squared_field(n);
    const std::vector<int> n_list{1, 2, 4, 8, 16};
    const std::size_t samples = cfg.count(100000);
    const double mass = 5.0 * std::pow(std::numbers::pi, 4) / 1008.0;
    const double base = 64.0 * mass;
    analytic.guarded("table", [&] {
        const std::uint64_t seed = derive_seed(cfg.seed, "ma-converge-analytic");
        const ConvergenceTable t = convergence_experiment(f, f, phi, dom, n_list, samples, seed);
        for (const auto& row : t.rows) {
            const double r = 1.0 + 1.0 / row.N;
            const double expected = (r * r - 1.0) * base;
            const double bound = 3.0 * row.gap.std_error;
            analytic.expect("N" + std::to_string(row.N), Digest().add(static_cast<double>(seed)).add(samples).value(),
                            {row.gap.value, row.gap.std_error, expected, row.gap.value / row.pair_f.value}, bound,
                            std::abs(row.gap.value - expected) <= bound);
        }
    });
    bump.guarded("table", [&] {
        const std::uint64_t seed = derive_seed(cfg.seed, "ma-converge-bump");
        const QVector center{Quaternion(0.3, 0.0, 0.0, 0.0), Quaternion(0.0, 0.0, 0.2, 0.0)};
        const ScalarField perturbation = 0.1 * ScalarField::bump(center, 1.0);
        const ConvergenceTable t = convergence_experiment(f, perturbation, phi, dom, n_list, samples, seed);
        const std::uint64_t dg = Digest().add(center).add(static_cast<double>(seed)).add(samples).value();
        std::vector<double> gaps;
        for (const auto& row : t.rows) gaps.push_back(row.gap.value);
        bump.expect("monotone", dg, gaps, 0.0, t.monotone);
        const auto& last = t.rows.back();
        const double rel = std::abs(last.gap.value) / std::abs(last.pair_f.value);
        bump.bound("final", dg, {last.gap.value, last.pair_f.value}, rel, 0.02);
    });
    return {analytic, bump};
}

inline std::vector<CheckReport> check_minimum_principle(const Config& cfg) {
    CheckReport c{"min-principle", 17, "min(u - v) over the ball is attained on the boundary", {}, {}};
    constexpr std::size_t n = 2;
    const Domain dom = Domain::ball(n, 1.0);
    const std::size_t samples = cfg.count(100000);
    auto run = [&](const std::string& id, const ScalarField& u, const ScalarField& v, std::uint64_t dg) {
        c.guarded(id, [&] {
            const MinimumPrincipleResult r =
                minimum_principle_experiment(u, v, dom, samples, samples, derive_seed(cfg.seed, "min-principle", dg));
            c.expect(id, dg, {r.min_interior, r.min_boundary, r.min_boundary_sampled}, r.tolerance, r.pass);
        });
    };
    run("closed-form", norm_squared_field(n), 2.0 * norm_squared_field(n), Digest().add(n).value());
    const std::size_t pairs = cfg.count(20);
    for (std::size_t k = 0; k < pairs; ++k) {
        Rng rng(cfg.seed, "min-principle-pair", k);
        const HHMatrix a = random_pd(rng, n) * 0.5;
        const HHMatrix b = a + random_psd(rng, n, 1 + rng.index(n));
        const QVector bu = random_qvector(rng, n), bv = random_qvector(rng, n);
        const double cu = rng.normal(), cv = rng.normal();
        run("pair-" + std::to_string(k), ScalarField::quadratic(a, bu, cu), ScalarField::quadratic(b, bv, cv),
            Digest().add(a).add(b).add(bu).add(bv).add(cu).add(cv).value());
    }
    return {c};
}

// ---------------------------------------------------------------------------
// radon
// ---------------------------------------------------------------------------

namespace detail {

/// 64 unit Gaussians on a centred 4 x 4 x 2 x 2 lattice of spacing 1.5 in
/// the coordinates (t_1, y_1, t_2, y_2).
inline std::vector<QVector> lattice_centers() {
    const double g4[4] = {-2.25, -0.75, 0.75, 2.25};
    const double g2[2] = {-0.75, 0.75};
    std::vector<QVector> out;
    for (double t1 : g4)
        for (double y1 : g4)
            for (double t2 : g2)
                for (double y2 : g2) out.push_back({Quaternion(t1, 0.0, y1, 0.0), Quaternion(t2, 0.0, y2, 0.0)});
    return out;
}

}  // namespace detail

inline std::vector<CheckReport> check_radon(const Config& cfg) {
    CheckReport cal{"radon-calibration", 18, "Plane integral of the unit Gaussian is (2 pi)^2 exp(-|p|^2 / 2)", {}, {}};
    CheckReport inj{"radon-injectivity", 18, "Rank 64 on the 64-Gaussian / 256-plane configuration", {}, {}};
    CheckReport exact{"radon-closed-form", 18, "Closed-form plane-integral matrix of the same configuration", {}, {}};
    constexpr std::size_t n = 2;
    const ScalarField g = ScalarField::gaussian(QVector(n), 1.0, 1.0);
    const std::size_t cal_planes = cfg.count(50);
    const std::size_t cal_samples = cfg.count(20000);
    for (std::size_t k = 0; k < cal_planes; ++k) {
        const std::string id = std::to_string(k);
        cal.guarded(id, [&] {
            Rng rng(cfg.seed, "radon-calibration", k);
            const Hyperplane plane = random_hyperplane(rng, n, 1.0);
            const Estimate e =
                radon_transform(g, plane, cal_samples, derive_seed(cfg.seed, "radon-calibration-points", k));
            const double expected = 4.0 * std::numbers::pi * std::numbers::pi * std::exp(-norm2(plane.p) / 2.0);
            const double bound = 3.0 * e.std_error;
            cal.expect(id, Digest().add(plane.nu).add(plane.p).add(cal_samples).value(),
                       {e.value, e.std_error, expected}, bound, std::abs(e.value - expected) <= bound);
        });
    }

    const auto centers = detail::lattice_centers();
    std::vector<ScalarField> basis;
    for (const auto& c : centers) basis.push_back(ScalarField::gaussian(c, 1.0, 1.0));
    std::vector<Hyperplane> planes;
    Rng rng(cfg.seed, "radon-injectivity-planes");
    Digest dg;
    for (int e = 0; e < 256; ++e) {
        planes.push_back(random_hyperplane(rng, n, 2.0));
        dg.add(planes.back().nu).add(planes.back().p);
    }
    const std::size_t samples = cfg.count(2000);
    const std::uint64_t seed = derive_seed(cfg.seed, "radon-injectivity");
    inj.guarded("certificate", [&] {
        const InjectivityCertificate cert = injectivity_certificate(basis, planes, samples, seed);
        const double ratio = cert.singular_values.back() / cert.singular_values.front();
        inj.expect("certificate", Digest(dg).add(samples).add(static_cast<double>(seed)).value(),
                   {static_cast<double>(cert.rank), cert.singular_values.front(), cert.singular_values.back(), ratio},
                   kRankThreshold, cert.rank == 64 && ratio > kRankThreshold);
    });
    exact.guarded("matrix", [&] {
        Eigen::MatrixXd m(256, 64);
        for (Eigen::Index e = 0; e < 256; ++e)
            for (Eigen::Index b = 0; b < 64; ++b)
                m(e, b) = detail::gaussian_plane_integral(centers[static_cast<std::size_t>(b)], 1.0, 1.0,
                                                          planes[static_cast<std::size_t>(e)]);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        const Eigen::VectorXd& sv = svd.singularValues();
        std::size_t rank = 0;
        for (Eigen::Index k = 0; k < sv.size(); ++k) rank += sv(k) > kRankThreshold * sv(0);
        const double ratio = sv(sv.size() - 1) / sv(0);
        exact.expect("matrix", dg.value(), {static_cast<double>(rank), sv(0), sv(sv.size() - 1), ratio}, kRankThreshold,
                     rank == 64 && ratio > kRankThreshold);
    });
    return {cal, inj, exact};
}

// ---------------------------------------------------------------------------
// registry and runner
// ---------------------------------------------------------------------------

struct Criterion {
    int number = 0;  ///< acceptance criterion, 0 for supporting checks
    std::string suite;
    std::string title;
    std::function<std::vector<CheckReport>(const Config&)> run;
};

inline const std::vector<Criterion>& registry() {
    static const std::vector<Criterion> all{
        {0, "algebra", "Quaternion algebra", check_quaternion_axioms},
        {0, "algebra", "Matrix homomorphisms", check_matrix_homomorphisms},
        {1, "moore", "Moore quartic identity", check_moore_quartic},
        {2, "moore", "Complex-hermitian agreement", check_complex_hermitian},
        {3, "moore", "Transformation law", check_transformation_law},
        {4, "moore", "Expansion identity", check_expansion},
        {11, "moore", "Concavity suite", check_concavity},
        {5, "spectral", "Sylvester criterion", check_sylvester},
        {0, "spectral", "Eigen-decomposition", check_eigen_reconstruction},
        {6, "dieudonne", "Dieudonne determinant", check_dieudonne},
        {7, "dieudonne", "Row subadditivity", check_row_subadditivity},
        {8, "dieudonne", "Minor inequality", check_minor_inequality},
        {9, "mixed", "Aleksandrov signature", check_aleksandrov_signature},
        {10, "mixed", "Aleksandrov inequality", check_aleksandrov_inequality},
        {0, "mixed", "Mixed discriminant routes", check_mixed_routes},
        {0, "mixed", "Bounded minor ratios", check_cn_estimate},
        {12, "psh", "Fueter normalization", check_fueter_normalization},
        {13, "psh", "psh classification", check_psh_classification},
        {14, "psh", "Transformation claim", check_transform_claim},
        {15, "psh", "Symmetry of L", check_l_symmetry},
        {16, "psh", "Measure convergence", check_convergence},
        {17, "psh", "Minimum principle", check_minimum_principle},
        {18, "radon", "Radon calibration and injectivity", check_radon},
    };
    return all;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"algebra", "dieudonne", "moore", "spectral", "mixed", "psh", "radon", "all"};
    return names;
}

class UnknownSuite : public Error {
public:
    explicit UnknownSuite(const std::string& name) : Error("unknown suite: " + name) {}
};

/// Runs the criteria selected by keep, in registry order.
inline SuiteReport run_selected(const std::string& label, const Config& cfg,
                                const std::function<bool(const Criterion&)>& keep) {
    SuiteReport report;
    report.suite = label;
    report.seed = cfg.seed;
    report.scale = cfg.scale;
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    for (const auto& c : registry()) {
        if (!keep(c)) continue;
        if (cfg.budget_seconds > 0.0 && elapsed() > cfg.budget_seconds) {
            CheckReport skipped{c.suite + "-" + std::to_string(c.number), c.number, c.title, {}, {}};
            skipped.add({"budget", 0, {}, 0.0, Verdict::Skip});
            skipped.notes.push_back("time budget exhausted");
            report.checks.push_back(std::move(skipped));
            continue;
        }
        for (auto& r : c.run(cfg)) report.checks.push_back(std::move(r));
    }
    report.wall_seconds = elapsed();
    return report;
}

inline SuiteReport run_suite(const std::string& name, const Config& cfg) {
    bool known = false;
    for (const auto& s : suite_names()) known = known || s == name;
    if (!known) throw UnknownSuite(name);
    return run_selected(name, cfg, [&](const Criterion& c) { return name == "all" || c.suite == name; });
}

/// Runs the numbered acceptance criteria only.
inline SuiteReport run_acceptance(const Config& cfg) {
    return run_selected("acceptance", cfg, [](const Criterion& c) { return c.number > 0; });
}

}  // namespace qpsh::verify

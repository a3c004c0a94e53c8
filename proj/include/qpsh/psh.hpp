#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "qpsh/mixed.hpp"
#include "qpsh/montecarlo.hpp"

namespace qpsh {

/// Fueter Hessian (d^2 f / dq_i d conj(q_j)) from the real Hessian:
/// entry (i, j) = sum_{a,b} e_a H[4i+a, 4j+b] conj(e_b), e = (1, i, j, k).
/// The upper triangle is computed and mirrored, so the result is exactly
/// hyperhermitian.
inline HHMatrix fueter_contract(const Eigen::MatrixXd& hess) {
    const auto n = static_cast<std::size_t>(hess.rows() / 4);
    HHMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Quaternion s;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    const double h = hess(static_cast<Eigen::Index>(4 * i + a), static_cast<Eigen::Index>(4 * j + b));
                    if (h != 0.0) s += Quaternion::unit(a) * conj(Quaternion::unit(b)) * h;
                }
            out.set(i, j, s);
        }
    return out;
}

inline HHMatrix fueter_hessian(const ScalarField& f, const Point& p) { return fueter_contract(f.hessian(p)); }

/// Moore determinant of the Fueter Hessian.
inline double ma_density(const ScalarField& f, const Point& p) { return moore_det(fueter_hessian(f, p)); }

// ---------------------------------------------------------------------------
// Plurisubharmonicity
// ---------------------------------------------------------------------------

inline constexpr double kPshMargin = 1e-9;

struct PshVerdict {
    bool psh = true;
    std::size_t checked = 0;
    Point witness;                ///< first failing point, empty when psh
    double min_eigenvalue = 0.0;  ///< at the witness, or the smallest seen
};

inline std::string format_point(const Point& p) {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (Eigen::Index k = 0; k < p.size(); ++k) os << (k ? "," : "") << p(k);
    os << ']';
    return os.str();
}

/// PSD Fueter Hessian at a point, with margin 1e-9 * (1 + max entry norm).
inline bool psd_fueter_at(const ScalarField& f, const Point& p, double* lowest = nullptr) {
    const HHMatrix h = fueter_hessian(f, p);
    const double lo = min_eigenvalue(h);
    if (lowest) *lowest = lo;
    return lo >= -kPshMargin * (1.0 + h.max_entry_norm());
}

/// Samples the domain interior and tests the Fueter Hessian for PSD.
inline PshVerdict is_psh(const ScalarField& f, const Domain& dom, std::size_t samples, std::uint64_t seed) {
    if (f.real_dim() != dom.dim()) throw SizeMismatch("is_psh: field and domain dimensions differ");
    PshVerdict out;
    out.min_eigenvalue = INFINITY;
    Rng rng(seed, "psh-check");
    for (std::size_t s = 0; s < samples; ++s) {
        const Point p = dom.sample_interior(rng);
        double lo = 0.0;
        const bool ok = psd_fueter_at(f, p, &lo);
        ++out.checked;
        if (!ok) {
            out.psh = false;
            out.witness = p;
            out.min_eigenvalue = lo;
            return out;
        }
        out.min_eigenvalue = std::min(out.min_eigenvalue, lo);
    }
    return out;
}

struct TransformResidual {
    double residual = 0.0;  ///< max entry norm of the difference
    double scale = 1.0;     ///< 1 + max entry norm of A* H(f)(A(p a)) A
};

/// Fueter Hessian of q -> f(A(q a)) at p against A* (Fueter Hessian of f at
/// A(p a)) A.
inline TransformResidual linear_transform_check(const ScalarField& f, const QMatrix& a, const Quaternion& s,
                                                const Point& p) {
    const ScalarField g = ScalarField::precompose(f, a, s);
    const HHMatrix lhs = fueter_hessian(g, p);
    const Point image = to_coords(a * scale_right(to_quaternions(p), s));
    const HHMatrix inner_h = fueter_hessian(f, image);
    const QMatrix rhs = conj_transpose(a) * inner_h.matrix() * a;
    return {max_entry_diff(lhs.matrix(), rhs), 1.0 + rhs.max_entry_norm()};
}

// ---------------------------------------------------------------------------
// Monge-Ampere integrals
// ---------------------------------------------------------------------------

/// Monte-Carlo estimate of the integral of phi * det(Fueter Hessian of f).
inline Estimate ma_pair(const ScalarField& f, const ScalarField& phi, const Domain& dom, std::size_t samples,
                        std::uint64_t seed) {
    return integrate(dom, samples, seed, [&](const Point& x) {
        const double w = phi.value(x);
        return w == 0.0 ? 0.0 : w * ma_density(f, x);
    });
}

/// Pointwise det(f_1, ..., f_n): mixed discriminant of the Fueter Hessians.
inline double mixed_density(const std::vector<ScalarField>& fields, const Point& x) {
    std::vector<HHMatrix> slots;
    slots.reserve(fields.size());
    for (const auto& f : fields) slots.push_back(fueter_hessian(f, x));
    return mixed_discriminant(slots);
}

/// L(f_0, ..., f_n) = integral of f_0 det(f_1, ..., f_n).
inline Estimate l_functional(const std::vector<ScalarField>& fields, const Domain& dom, std::size_t samples,
                             std::uint64_t seed) {
    if (fields.size() != dom.quaternionic_dim() + 1) throw SizeMismatch("l_functional needs n + 1 fields");
    const std::vector<ScalarField> rest(fields.begin() + 1, fields.end());
    return integrate(dom, samples, seed, [&](const Point& x) {
        const double w = fields[0].value(x);
        return w == 0.0 ? 0.0 : w * mixed_density(rest, x);
    });
}

/// L evaluated under every permutation of its n + 1 arguments on one set of
/// sample points.  Permutations are listed in std::next_permutation order of
/// the index vector (0, 1, ..., n).
struct PermutedEstimates {
    std::vector<std::vector<std::size_t>> orders;
    std::vector<Estimate> estimates;
};

inline PermutedEstimates l_functional_permutations(const std::vector<ScalarField>& fields, const Domain& dom,
                                                   std::size_t samples, std::uint64_t seed) {
    const std::size_t n = dom.quaternionic_dim();
    if (fields.size() != n + 1) throw SizeMismatch("l_functional needs n + 1 fields");
    PermutedEstimates out;
    std::vector<std::size_t> order(n + 1);
    for (std::size_t k = 0; k <= n; ++k) order[k] = k;
    do out.orders.push_back(order);
    while (std::next_permutation(order.begin(), order.end()));

    out.estimates = integrate_many(dom, samples, seed, out.orders.size(), [&](const Point& x, std::vector<double>& v) {
        std::vector<double> values(n + 1);
        std::vector<HHMatrix> hessians(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            const Jet j = fields[k].jet(x);
            values[k] = j.value;
            hessians[k] = fueter_contract(j.hess);
        }
        for (std::size_t o = 0; o < out.orders.size(); ++o) {
            const auto& ord = out.orders[o];
            if (values[ord[0]] == 0.0) {
                v[o] = 0.0;
                continue;
            }
            std::vector<HHMatrix> slots;
            slots.reserve(n);
            for (std::size_t k = 1; k <= n; ++k) slots.push_back(hessians[ord[k]]);
            v[o] = values[ord[0]] * mixed_discriminant(slots);
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Weak convergence of Monge-Ampere measures
// ---------------------------------------------------------------------------

struct ConvergenceRow {
    int N = 0;
    double sup_diff = 0.0;  ///< max |f_N - f| over the sample set
    Estimate pair_n;        ///< integral of phi det(f_N)
    Estimate pair_f;        ///< integral of phi det(f)
    Estimate gap;           ///< pair_n - pair_f, paired on common points
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    bool monotone = true;  ///< |gap| non-increasing along the list
    bool final_within = true;  ///< final |gap| <= 3 combined se + 2% of |pair_f|
};

inline constexpr std::size_t kPshCheckSamples = 4000;

/// f_N = f + perturbation / N for N in the list.  Each f_N must be psh on the
/// domain; otherwise PreconditionFailure with the witness point.
inline ConvergenceTable convergence_experiment(const ScalarField& f, const ScalarField& perturbation,
                                               const ScalarField& phi, const Domain& dom, const std::vector<int>& n_list,
                                               std::size_t samples, std::uint64_t seed) {
    ConvergenceTable table;
    for (int big_n : n_list) {
        if (big_n <= 0) throw DomainError("convergence_experiment: N must be positive");
        const ScalarField fn = f + ScalarField::scale(1.0 / big_n, perturbation);
        const PshVerdict v = is_psh(fn, dom, std::min(samples, kPshCheckSamples), derive_seed(seed, "convergence-psh", big_n));
        if (!v.psh)
            throw PreconditionFailure("f_N is not psh for N = " + std::to_string(big_n) + " at " + format_point(v.witness));

        ConvergenceRow row;
        row.N = big_n;
        const auto est = integrate_many(dom, samples, seed, 3, [&](const Point& x, std::vector<double>& out) {
            const double w = phi.value(x);
            if (w == 0.0) {
                out[0] = out[1] = out[2] = 0.0;
                return;
            }
            const double dn = ma_density(fn, x);
            const double d = ma_density(f, x);
            out[0] = w * dn;
            out[1] = w * d;
            out[2] = w * (dn - d);
        });
        row.pair_n = est[0];
        row.pair_f = est[1];
        row.gap = est[2];
        Rng rng(seed, "convergence-sup", static_cast<std::uint64_t>(big_n));
        for (std::size_t s = 0; s < std::min(samples, kPshCheckSamples); ++s)
            row.sup_diff = std::max(row.sup_diff, std::abs(perturbation.value(dom.sample_interior(rng))) / big_n);
        table.rows.push_back(row);
    }
    for (std::size_t r = 1; r < table.rows.size(); ++r)
        if (std::abs(table.rows[r].gap.value) > std::abs(table.rows[r - 1].gap.value)) table.monotone = false;
    if (!table.rows.empty()) {
        const auto& last = table.rows.back();
        const double combined = std::hypot(last.pair_n.std_error, last.pair_f.std_error);
        table.final_within = std::abs(last.gap.value) <= 3.0 * combined + 0.02 * std::abs(last.pair_f.value);
    }
    return table;
}

// ---------------------------------------------------------------------------
// Minimum principle
// ---------------------------------------------------------------------------

struct MinimumPrincipleResult {
    double min_interior = 0.0;
    double min_boundary = 0.0;          ///< after refinement on the sphere
    double min_boundary_sampled = 0.0;  ///< over the boundary samples only
    double tolerance = 0.0;
    bool pass = false;
};

inline constexpr double kDensityOrderSlack = 1e-9;
inline constexpr double kMinimumPrincipleTol = 1e-3;

namespace detail {

/// Projected gradient descent of g on the sphere |x - c| = r from x, with
/// backtracking.  Returns the lowest value reached.
inline double descend_on_sphere(const ScalarField& g, const Point& c, double r, Point x, int iterations = 200) {
    auto project = [&](const Point& y) -> Point { return c + (y - c) * (r / (y - c).norm()); };
    x = project(x);
    double value = g.value(x);
    double step = 0.1 * r;
    for (int it = 0; it < iterations && step > 1e-12 * r; ++it) {
        const Point normal = (x - c) / r;
        Point tangent = g.gradient(x);
        tangent -= normal * normal.dot(tangent);
        const double len = tangent.norm();
        if (len == 0.0) break;
        const Point trial = project(x - tangent * (step / len));
        const double tv = g.value(trial);
        if (tv < value) {
            x = trial;
            value = tv;
            step *= 1.5;
        } else {
            step *= 0.5;
        }
    }
    return value;
}

}  // namespace detail

/// Sampled check that min(u - v) over the closure is attained on the
/// boundary, given psh u, v with det(u) <= det(v).  On a ball the boundary
/// minimum is refined by descent on the sphere from the best boundary sample
/// and from the radial projection of the best interior sample.  The
/// hypotheses are verified at the interior samples; a violation raises
/// PreconditionFailure naming the witness.
inline MinimumPrincipleResult minimum_principle_experiment(const ScalarField& u, const ScalarField& v,
                                                           const Domain& dom, std::size_t interior_samples,
                                                           std::size_t boundary_samples, std::uint64_t seed) {
    MinimumPrincipleResult out;
    out.min_interior = INFINITY;
    out.min_boundary = INFINITY;
    double scale = 1.0;
    Point best_interior;
    Rng interior(seed, "min-principle-interior");
    for (std::size_t s = 0; s < interior_samples; ++s) {
        const Point p = dom.sample_interior(interior);
        const Jet ju = u.jet(p);
        const Jet jv = v.jet(p);
        const HHMatrix hu = fueter_contract(ju.hess);
        const HHMatrix hv = fueter_contract(jv.hess);
        const double lu = min_eigenvalue(hu);
        const double lv = min_eigenvalue(hv);
        if (lu < -kPshMargin * (1.0 + hu.max_entry_norm()))
            throw PreconditionFailure("u is not psh at " + format_point(p));
        if (lv < -kPshMargin * (1.0 + hv.max_entry_norm()))
            throw PreconditionFailure("v is not psh at " + format_point(p));
        const double du = moore_det(hu);
        const double dv = moore_det(hv);
        if (du > dv * (1.0 + kDensityOrderSlack) + kDensityOrderSlack)
            throw PreconditionFailure("density ordering det(u) <= det(v) fails at " + format_point(p));
        const double diff = ju.value - jv.value;
        if (diff < out.min_interior) best_interior = p;
        out.min_interior = std::min(out.min_interior, diff);
        scale = std::max(scale, std::abs(diff));
    }
    Rng boundary(seed, "min-principle-boundary");
    Point best_boundary;
    for (std::size_t s = 0; s < boundary_samples; ++s) {
        const Point p = dom.sample_boundary(boundary);
        const double diff = u.value(p) - v.value(p);
        if (diff < out.min_boundary) best_boundary = p;
        out.min_boundary = std::min(out.min_boundary, diff);
        scale = std::max(scale, std::abs(diff));
    }
    out.min_boundary_sampled = out.min_boundary;
    if (dom.kind() == Domain::Kind::Ball && best_boundary.size()) {
        const ScalarField g = u - v;
        out.min_boundary = std::min(out.min_boundary,
                                    detail::descend_on_sphere(g, dom.center(), dom.radius(), best_boundary));
        if (best_interior.size() && (best_interior - dom.center()).norm() > 0.0)
            out.min_boundary = std::min(out.min_boundary,
                                        detail::descend_on_sphere(g, dom.center(), dom.radius(), best_interior));
    }
    out.tolerance = kMinimumPrincipleTol * scale;
    // min over the closure equals min(interior, boundary)
    out.pass = out.min_interior >= out.min_boundary - out.tolerance;
    return out;
}

}  // namespace qpsh

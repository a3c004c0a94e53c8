#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string_view>
#include <vector>

#include "qpsh/field.hpp"
#include "qpsh/parallel.hpp"
#include "qpsh/random.hpp"

namespace qpsh {

/// Integration domain in R^{4n}: a ball or an axis-aligned box.
class Domain {
public:
    enum class Kind { Ball, Box };

    static Domain ball(const Point& center, double radius) {
        if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
        Domain d;
        d.kind_ = Kind::Ball;
        d.center_ = center;
        d.radius_ = radius;
        return d;
    }
    static Domain ball(std::size_t n, double radius) {
        return ball(Point::Zero(static_cast<Eigen::Index>(4 * n)), radius);
    }
    static Domain box(const Point& lo, const Point& hi) {
        if (lo.size() != hi.size()) throw SizeMismatch("box corners of different dimension");
        if (!((hi - lo).minCoeff() > 0.0)) throw DomainError("box must have positive extent");
        Domain d;
        d.kind_ = Kind::Box;
        d.lo_ = lo;
        d.hi_ = hi;
        return d;
    }

    Kind kind() const { return kind_; }
    Eigen::Index dim() const { return kind_ == Kind::Ball ? center_.size() : lo_.size(); }
    std::size_t quaternionic_dim() const { return static_cast<std::size_t>(dim() / 4); }
    const Point& center() const { return center_; }
    double radius() const { return radius_; }

    double volume() const {
        const double d = static_cast<double>(dim());
        if (kind_ == Kind::Ball) return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0) * std::pow(radius_, d);
        return (hi_ - lo_).prod();
    }

    /// Closed-domain membership, with a relative slack for boundary points.
    bool contains(const Point& x, double slack = 1e-12) const {
        if (kind_ == Kind::Ball) return (x - center_).norm() <= radius_ * (1.0 + slack);
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            const double s = slack * (hi_(k) - lo_(k));
            if (x(k) < lo_(k) - s || x(k) > hi_(k) + s) return false;
        }
        return true;
    }

    Point sample_interior(Rng& rng) const {
        if (kind_ == Kind::Ball) {
            Point dir = gaussian_direction(rng);
            const double r = radius_ * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim()));
            return center_ + r * dir;
        }
        Point x(dim());
        for (Eigen::Index k = 0; k < dim(); ++k) x(k) = rng.uniform(lo_(k), hi_(k));
        return x;
    }

    Point sample_boundary(Rng& rng) const {
        if (kind_ == Kind::Ball) return center_ + radius_ * gaussian_direction(rng);
        // pick a face with probability proportional to its area
        const Eigen::VectorXd extent = hi_ - lo_;
        std::vector<double> area(static_cast<std::size_t>(dim()));
        double total = 0.0;
        for (Eigen::Index k = 0; k < dim(); ++k) {
            area[static_cast<std::size_t>(k)] = extent.prod() / extent(k);
            total += 2.0 * area[static_cast<std::size_t>(k)];
        }
        double pick = rng.uniform() * total;
        const auto faces = static_cast<std::size_t>(2 * dim());
        std::size_t face = faces - 1;
        for (std::size_t f = 0; f < faces; ++f) {
            if (pick < area[f / 2]) {
                face = f;
                break;
            }
            pick -= area[f / 2];
        }
        const auto axis = static_cast<Eigen::Index>(face / 2);
        Point x = sample_interior(rng);
        x(axis) = (face % 2 == 1) ? hi_(axis) : lo_(axis);
        return x;
    }

private:
    Point gaussian_direction(Rng& rng) const {
        Point v(dim());
        do {
            for (Eigen::Index k = 0; k < dim(); ++k) v(k) = rng.normal();
        } while (v.norm() < 1e-12);
        return v / v.norm();
    }

    Kind kind_ = Kind::Ball;
    Point center_;
    double radius_ = 1.0;
    Point lo_;
    Point hi_;
};

/// Monte-Carlo estimate with its standard error.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// Streaming mean and variance (Welford), mergeable (Chan et al.).
class RunningStats {
public:
    void add(double v) {
        ++count_;
        const double delta = v - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (v - mean_);
    }
    void merge(const RunningStats& o) {
        if (o.count_ == 0) return;
        if (count_ == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(count_ + o.count_);
        const double delta = o.mean_ - mean_;
        mean_ += delta * static_cast<double>(o.count_) / total;
        m2_ += o.m2_ + delta * delta * static_cast<double>(count_) * static_cast<double>(o.count_) / total;
        count_ += o.count_;
    }
    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
    double std_error() const { return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0; }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Uniform-sampling estimates of volume * mean(integrand_k) over the domain
/// for several integrands that share the sample points.  The points depend
/// only on (seed, stream, domain, samples).
inline std::vector<Estimate> integrate_many(const Domain& dom, std::size_t samples, std::uint64_t seed,
                                            std::size_t count,
                                            const std::function<void(const Point&, std::vector<double>&)>& integrand,
                                            std::string_view stream = "mc") {
    std::vector<std::vector<RunningStats>> partial(kPartitions, std::vector<RunningStats>(count));
    for_each_partition(kPartitions, [&](std::size_t p) {
        Rng rng(seed, stream, p);
        std::vector<double> values(count);
        const auto [begin, end] = partition_range(samples, kPartitions, p);
        for (std::size_t s = begin; s < end; ++s) {
            const Point x = dom.sample_interior(rng);
            integrand(x, values);
            for (std::size_t k = 0; k < count; ++k) partial[p][k].add(values[k]);
        }
    });
    const double vol = dom.volume();
    std::vector<Estimate> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        RunningStats total;
        for (std::size_t p = 0; p < kPartitions; ++p) total.merge(partial[p][k]);
        out[k] = {vol * total.mean(), vol * total.std_error(), total.count()};
    }
    return out;
}

inline Estimate integrate(const Domain& dom, std::size_t samples, std::uint64_t seed,
                          const std::function<double(const Point&)>& integrand, std::string_view stream = "mc") {
    return integrate_many(dom, samples, seed, 1,
                          [&](const Point& x, std::vector<double>& out) { out[0] = integrand(x); }, stream)[0];
}

}  // namespace qpsh

#pragma once

#include <array>
#include <cmath>
#include <ostream>

#include "qpsh/error.hpp"

namespace qpsh {

/// q = t + x i + y j + z k with the Hamilton product.
struct Quaternion {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double t_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
        : t(t_), x(x_), y(y_), z(z_) {}

    static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
    static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
    static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
    static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

    /// Basis element e_c of (1, i, j, k).
    static constexpr Quaternion unit(int c) {
        switch (c) {
            case 0: return one();
            case 1: return i();
            case 2: return j();
            default: return k();
        }
    }

    constexpr double real() const { return t; }
    constexpr double operator[](int c) const {
        return c == 0 ? t : c == 1 ? x : c == 2 ? y : z;
    }
    constexpr std::array<double, 4> components() const { return {t, x, y, z}; }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        t += o.t; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        t -= o.t; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        t *= s; x *= s; y *= s; z *= s;
        return *this;
    }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.t, -a.x, -a.y, -a.z}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z,
            a.t * b.x + a.x * b.t + a.y * b.z - a.z * b.y,
            a.t * b.y - a.x * b.z + a.y * b.t + a.z * b.x,
            a.t * b.z + a.x * b.y - a.y * b.x + a.z * b.t};
}

constexpr bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.t == b.t && a.x == b.x && a.y == b.y && a.z == b.z;
}

constexpr Quaternion conj(const Quaternion& a) { return {a.t, -a.x, -a.y, -a.z}; }

constexpr double norm2(const Quaternion& a) {
    return a.t * a.t + a.x * a.x + a.y * a.y + a.z * a.z;
}

inline double abs(const Quaternion& a) { return std::sqrt(norm2(a)); }

/// conj(a) / |a|^2; throws DomainError on the zero quaternion.
inline Quaternion inv(const Quaternion& a) {
    const double n2 = norm2(a);
    if (n2 == 0.0) throw DomainError("inverse of the zero quaternion");
    return conj(a) / n2;
}

/// Euclidean distance |a - b|.
inline double dist(const Quaternion& a, const Quaternion& b) { return abs(a - b); }

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '[' << q.t << ',' << q.x << ',' << q.y << ',' << q.z << ']';
}

}  // namespace qpsh

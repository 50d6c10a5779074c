#pragma once

#include <cmath>
#include <string>

#include "mobius/errors.hpp"

namespace mobius {

/// Scalar field tag: real, complex or quaternion.
enum class Field { R, C, H };

inline int field_real_dim(Field f) { return f == Field::R ? 1 : (f == Field::C ? 2 : 4); }

inline const char* field_name(Field f) { return f == Field::R ? "R" : (f == Field::C ? "C" : "H"); }

/// One quaternion w + x i + y j + z k.  Real and complex scalars use the same
/// layout with the unused components pinned at zero, so a single arithmetic
/// kernel serves all three fields.
struct Quat {
    double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

    constexpr Quat() = default;
    constexpr Quat(double w_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
        : w(w_), x(x_), y(y_), z(z_) {}

    constexpr Quat operator+(const Quat& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
    constexpr Quat operator-(const Quat& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
    constexpr Quat operator-() const { return {-w, -x, -y, -z}; }
    constexpr Quat& operator+=(const Quat& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Quat& operator-=(const Quat& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr bool operator==(const Quat&) const = default;
};

// Hamilton product.  i^2 = j^2 = k^2 = -1, ij = k, jk = i, ki = j.
constexpr Quat qmul(const Quat& p, const Quat& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quat operator*(const Quat& p, const Quat& q) { return qmul(p, q); }
constexpr Quat operator*(double s, const Quat& q) { return {s * q.w, s * q.x, s * q.y, s * q.z}; }
constexpr Quat operator*(const Quat& q, double s) { return s * q; }

constexpr Quat qconj(const Quat& q) { return {q.w, -q.x, -q.y, -q.z}; }
constexpr double qre(const Quat& q) { return q.w; }
constexpr double qnormsq(const Quat& q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }
inline double qnorm(const Quat& q) { return std::sqrt(qnormsq(q)); }
constexpr double qmaxabs(const Quat& q) {
    double m = q.w < 0 ? -q.w : q.w;
    double ax = q.x < 0 ? -q.x : q.x;
    double ay = q.y < 0 ? -q.y : q.y;
    double az = q.z < 0 ? -q.z : q.z;
    if (ax > m) m = ax;
    if (ay > m) m = ay;
    if (az > m) m = az;
    return m;
}

inline Quat qinv(const Quat& q) {
    double n2 = qnormsq(q);
    if (n2 == 0.0) throw SingularMatrixError(0.0);
    return (1.0 / n2) * qconj(q);
}

// exp of a quaternion (used for unit-quaternion curves e^{t xi}).
inline Quat qexp(const Quat& q) {
    double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    double ew = std::exp(q.w);
    if (vn < 1e-300) return {ew, 0, 0, 0};
    double c = ew * std::cos(vn), s = ew * std::sin(vn) / vn;
    return {c, s * q.x, s * q.y, s * q.z};
}

/// A field-tagged scalar.  Mixed-field arithmetic is a usage error.
struct Scalar {
    Field tag = Field::R;
    Quat v;

    Scalar() = default;
    Scalar(Field f, Quat q) : tag(f), v(q) {}
    static Scalar real(double a) { return {Field::R, Quat(a)}; }
    static Scalar cplx(double a, double b) { return {Field::C, Quat(a, b)}; }
    static Scalar quat(double a, double b, double c, double d) { return {Field::H, Quat(a, b, c, d)}; }
};

inline void check_tags(const Scalar& p, const Scalar& q) {
    if (p.tag != q.tag)
        throw TagMismatchError(std::string("scalar fields differ: ") + field_name(p.tag) + " vs " +
                               field_name(q.tag));
}

inline Scalar mul(const Scalar& p, const Scalar& q) {
    check_tags(p, q);
    return {p.tag, qmul(p.v, q.v)};
}

inline Scalar add(const Scalar& p, const Scalar& q) {
    check_tags(p, q);
    return {p.tag, p.v + q.v};
}

inline Scalar conj(const Scalar& q) { return {q.tag, qconj(q.v)}; }
inline double re(const Scalar& q) { return qre(q.v); }
inline double abs(const Scalar& q) { return qnorm(q.v); }

}  // namespace mobius

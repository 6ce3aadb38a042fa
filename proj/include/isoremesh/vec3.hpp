#pragma once

#include <cmath>

namespace isoremesh {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double&       operator[](int i) { return (&x)[i]; }
    const double& operator[](int i) const { return (&x)[i]; }

    Vec3& operator+=(const Vec3& r) { x += r.x; y += r.y; z += r.z; return *this; }
    Vec3& operator-=(const Vec3& r) { x -= r.x; y -= r.y; z -= r.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    Vec3& operator/=(double s) { x /= s; y /= s; z /= s; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator/(Vec3 a, double s) { return a /= s; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

inline bool operator==(const Vec3& a, const Vec3& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
inline bool operator!=(const Vec3& a, const Vec3& b) { return !(a == b); }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double squared_norm(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(squared_norm(a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline double squared_distance(const Vec3& a, const Vec3& b) { return squared_norm(a - b); }

// Returns the zero vector when the input is too short to normalize.
inline Vec3 normalized(const Vec3& a) {
    const double n = norm(a);
    if (n <= 0.0) return {};
    return a / n;
}

inline Vec3 midpoint(const Vec3& a, const Vec3& b) { return (a + b) * 0.5; }

inline bool is_finite(const Vec3& a) {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Angle at apex `b` of the wedge a-b-c, in radians.
inline double angle_at(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 u = normalized(a - b);
    const Vec3 v = normalized(c - b);
    double d = dot(u, v);
    if (d > 1.0) d = 1.0;
    if (d < -1.0) d = -1.0;
    return std::acos(d);
}

inline double degrees(double radians) { return radians * (180.0 / 3.14159265358979323846); }
inline double radians(double deg) { return deg * (3.14159265358979323846 / 180.0); }

}  // namespace isoremesh

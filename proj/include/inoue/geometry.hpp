#pragma once

#include <complex>

#include "inoue/jet.hpp"

namespace inoue {

// A point of C x H in real chart coordinates.
struct Point {
    double x1 = 0, y1 = 0, x2 = 0, y2 = 1;

    cplx z1() const { return {x1, y1}; }
    cplx z2() const { return {x2, y2}; }
    static Point from(cplx z1, cplx z2) { return {z1.real(), z1.imag(), z2.real(), z2.imag()}; }
    double operator[](int i) const { return i == 0 ? x1 : i == 1 ? y1 : i == 2 ? x2 : y2; }
    double& operator[](int i) { return i == 0 ? x1 : i == 1 ? y1 : i == 2 ? x2 : y2; }
};

// Components g_{1 1bar}, g_{1 2bar}, g_{2 2bar}; g_{2 1bar} = conj g_{1 2bar}.
template <class S>
struct Herm2 {
    S g11{}, g12{}, g22{};
};

using Metric2 = Herm2<cplx>;

inline cplx det(const Metric2& g) { return g.g11 * g.g22 - g.g12 * std::conj(g.g12); }

inline bool positive_definite(const Metric2& g) { return g.g11.real() > 0 && det(g).real() > 0; }

inline Metric2 operator+(const Metric2& a, const Metric2& b) { return {a.g11 + b.g11, a.g12 + b.g12, a.g22 + b.g22}; }
inline Metric2 operator-(const Metric2& a, const Metric2& b) { return {a.g11 - b.g11, a.g12 - b.g12, a.g22 - b.g22}; }
inline Metric2 operator*(double s, const Metric2& a) { return {s * a.g11, s * a.g12, s * a.g22}; }

// tr_{w} v = g_w^{i jbar} (g_v)_{i jbar}
inline double trace_against(const Metric2& v, const Metric2& w)
{
    cplx d = det(w);
    cplx t = (w.g22 * v.g11 + w.g11 * v.g22 - w.g12 * std::conj(v.g12) - std::conj(w.g12) * v.g12) / d;
    return t.real();
}

// (z1, z2) -> (a z1 + b z2 + c, d z2 + e) with d > 0 and e real.
struct AffineMap {
    cplx a{1.0}, b{0.0}, c{0.0};
    double d = 1, e = 0;

    Point apply(const Point& p) const
    {
        cplx z1 = p.z1(), z2 = p.z2();
        return Point::from(a * z1 + b * z2 + c, d * z2 + e);
    }

    // the map "apply this, then next"
    AffineMap then(const AffineMap& next) const
    {
        return {next.a * a, next.a * b + next.b * d, next.a * c + next.b * e + next.c, next.d * d, next.d * e + next.e};
    }

    AffineMap inverse() const
    {
        return {1.0 / a, -b / (a * d), (b * e / d - c) / a, 1.0 / d, -e / d};
    }

    // J^T G conj(J) with J the holomorphic Jacobian; G is the metric at the image point
    Metric2 pullback(const Metric2& g) const
    {
        Metric2 r;
        r.g11 = std::norm(a) * g.g11;
        r.g12 = a * (g.g11 * std::conj(b) + g.g12 * d);
        r.g22 = b * g.g11 * std::conj(b) + b * g.g12 * d + d * std::conj(g.g12) * std::conj(b) + d * d * g.g22;
        return r;
    }
};

}  // namespace inoue

#include "inoue/surface.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace inoue {

namespace {

using ld = long double;
using lcplx = std::complex<long double>;

template <class T>
std::array<T, 3> cross(const std::array<T, 3>& a, const std::array<T, 3>& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Kernel vector of a rank-2 3x3 matrix: the largest cross product of two rows.
template <class T>
std::array<T, 3> kernel3(const std::array<std::array<T, 3>, 3>& A)
{
    std::array<T, 3> best{};
    ld best_norm = -1;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            auto v = cross(A[i], A[j]);
            ld n = std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]);
            if (n > best_norm) {
                best_norm = n;
                best = v;
            }
        }
    return best;
}

template <class T>
void normalize_max(std::array<T, 3>& v)
{
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(v[i]) > std::abs(v[k])) k = i;
    T s = v[k];
    for (auto& x : v) x /= s;
}

ld cubic(ld a, ld b, ld c, ld x) { return ((x + a) * x + b) * x + c; }

// floor with a small tolerance so values a hair below an integer do not wrap
long long tol_floor(double x) { return static_cast<long long>(std::floor(x + 1e-12)); }

AffineMap power(const AffineMap& g, long long n)
{
    AffineMap base = n < 0 ? g.inverse() : g;
    unsigned long long k = n < 0 ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
    AffineMap acc;
    while (k) {
        if (k & 1) acc = acc.then(base);
        base = base.then(base);
        k >>= 1;
    }
    return acc;
}

}  // namespace

IntMat3 default_sm_matrix() { return {{{0, 0, 1}, {1, 0, 1}, {0, 1, 0}}}; }

SMData construct_sm(const IntMat3& M)
{
    using i128 = __int128;
    const i128 m00 = M[0][0], m01 = M[0][1], m02 = M[0][2];
    const i128 m10 = M[1][0], m11 = M[1][1], m12 = M[1][2];
    const i128 m20 = M[2][0], m21 = M[2][1], m22 = M[2][2];
    const i128 det = m00 * (m11 * m22 - m12 * m21) - m01 * (m10 * m22 - m12 * m20) + m02 * (m10 * m21 - m11 * m20);
    if (det != 1) {
        std::ostringstream os;
        os << "construct_sm: det M = " << static_cast<long long>(det) << ", expected 1";
        fail(ErrorCode::not_unimodular, os.str());
    }
    const i128 tr = m00 + m11 + m22;
    const i128 c2 = (m00 * m11 - m01 * m10) + (m00 * m22 - m02 * m20) + (m11 * m22 - m12 * m21);
    // x^3 + a x^2 + b x + c
    const i128 a = -tr, b = c2, c = -det;
    const i128 disc = 18 * a * b * c - 4 * a * a * a * c + a * a * b * b - 4 * b * b * b - 27 * c * c;
    if (disc >= 0)
        fail(ErrorCode::wrong_spectrum, "construct_sm: characteristic polynomial has three real roots (discriminant >= 0)");

    const ld A = static_cast<ld>(a), Bc = static_cast<ld>(b), C = static_cast<ld>(c);
    ld R = 1 + std::max({std::abs(A), std::abs(Bc), std::abs(C)});
    ld lo = -R, hi = R;
    for (int it = 0; it < 200; ++it) {
        ld mid = 0.5L * (lo + hi);
        if (cubic(A, Bc, C, mid) > 0)
            hi = mid;
        else
            lo = mid;
    }
    ld lam = 0.5L * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        ld f = cubic(A, Bc, C, lam);
        ld df = (3 * lam + 2 * A) * lam + Bc;
        if (df != 0) lam -= f / df;
    }
    if (!(lam > 1 + 1e-12L)) fail(ErrorCode::wrong_spectrum, "construct_sm: real eigenvalue is not > 1");

    SMData d;
    d.M = M;
    d.lambda = static_cast<double>(lam);
    ld re = (static_cast<ld>(tr) - lam) / 2;
    ld im2 = 1 / lam - re * re;
    if (im2 <= 0) fail(ErrorCode::wrong_spectrum, "construct_sm: complex pair degenerated");
    lcplx mu(re, std::sqrt(im2));
    d.mu = cplx(static_cast<double>(mu.real()), static_cast<double>(mu.imag()));

    std::array<std::array<ld, 3>, 3> Ar{};
    std::array<std::array<lcplx, 3>, 3> Ac{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Ar[i][j] = static_cast<ld>(M[i][j]) - (i == j ? lam : 0);
            Ac[i][j] = static_cast<ld>(M[i][j]) - (i == j ? mu : lcplx(0));
        }
    auto ell = kernel3(Ar);
    normalize_max(ell);
    auto mv = kernel3(Ac);
    normalize_max(mv);
    for (int i = 0; i < 3; ++i) {
        d.ell[i] = static_cast<double>(ell[i]);
        d.m_vec[i] = cplx(static_cast<double>(mv[i].real()), static_cast<double>(mv[i].imag()));
    }
    return d;
}

SPlusData construct_splus(const IntMat2& N, long long p, long long q, long long r, std::optional<cplx> tau)
{
    const long long det = N[0][0] * N[1][1] - N[0][1] * N[1][0];
    if (det != 1) {
        std::ostringstream os;
        os << "construct_splus: det N = " << det << ", expected 1";
        fail(ErrorCode::not_unimodular, os.str());
    }
    const long long tr = N[0][0] + N[1][1];
    if (tr <= 2) fail(ErrorCode::not_hyperbolic, "construct_splus: N has no real eigenvalue > 1 (trace <= 2)");
    if (r == 0) fail(ErrorCode::zero_r, "construct_splus: r must be nonzero");

    SPlusData d;
    d.N = N;
    d.p = p;
    d.q = q;
    d.r = r;
    const ld trl = static_cast<ld>(tr);
    const ld alpha = (trl + std::sqrt(trl * trl - 4)) / 2;
    d.alpha_ev = static_cast<double>(alpha);

    auto eigvec = [&](ld ev) {
        std::array<ld, 2> v;
        ld n00 = N[0][0], n01 = N[0][1], n10 = N[1][0], n11 = N[1][1];
        if (std::abs(n01) >= std::abs(n10))
            v = {n01, ev - n00};
        else
            v = {ev - n11, n10};
        ld s = std::abs(v[0]) >= std::abs(v[1]) ? v[0] : v[1];
        return std::array<double, 2>{static_cast<double>(v[0] / s), static_cast<double>(v[1] / s)};
    };
    d.a = eigvec(alpha);
    d.b = eigvec(1 / alpha);

    const double a1 = d.a[0], a2 = d.a[1], b1 = d.b[0], b2 = d.b[1];
    d.kappa = (b1 * a2 - b2 * a1) / static_cast<double>(r);
    for (int i = 0; i < 2; ++i) {
        const double n1 = static_cast<double>(N[i][0]), n2 = static_cast<double>(N[i][1]);
        d.e[i] = 0.5 * n1 * (n1 - 1) * a1 * b1 + 0.5 * n2 * (n2 - 1) * a2 * b2 + n1 * n2 * b1 * a2;
    }
    // (I - N) c = e + kappa (p, q)
    const double rhs0 = d.e[0] + d.kappa * static_cast<double>(p);
    const double rhs1 = d.e[1] + d.kappa * static_cast<double>(q);
    const double i00 = 1.0 - static_cast<double>(N[0][0]), i01 = -static_cast<double>(N[0][1]);
    const double i10 = -static_cast<double>(N[1][0]), i11 = 1.0 - static_cast<double>(N[1][1]);
    const double dd = i00 * i11 - i01 * i10;
    d.c[0] = (rhs0 * i11 - i01 * rhs1) / dd;
    d.c[1] = (i00 * rhs1 - i10 * rhs0) / dd;

    const double L = std::log(d.alpha_ev);
    d.tau = tau ? *tau : cplx(0.0, L);
    d.m_slope = d.tau.imag() / L;
    return d;
}

Surface::Surface(SMData d) : kind_(SurfaceKind::sm), data_(std::move(d))
{
    const SMData& s = std::get<SMData>(data_);
    scale_ = s.lambda;
    period_ = std::log(s.lambda);
    mu_arg_ = std::arg(s.mu);
    gens_[0] = AffineMap{s.mu, 0.0, 0.0, s.lambda, 0.0};
    for (int j = 0; j < 3; ++j) gens_[j + 1] = AffineMap{1.0, 0.0, s.m_vec[j], 1.0, s.ell[j]};

    std::array<std::array<double, 3>, 3> B{};
    for (int j = 0; j < 3; ++j) {
        B[0][j] = s.m_vec[j].real();
        B[1][j] = s.m_vec[j].imag();
        B[2][j] = s.ell[j];
    }
    const double det = B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1]) -
                       B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0]) +
                       B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0]);
    if (std::abs(det) < 1e-12) fail(ErrorCode::wrong_spectrum, "fiber lattice is degenerate");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
            binv_[i][j] = (B[i1][j1] * B[i2][j2] - B[i1][j2] * B[i2][j1]) / det;
        }
    domain_.basis = B;
    init_domain();
}

Surface::Surface(SPlusData d) : kind_(SurfaceKind::splus), data_(std::move(d))
{
    const SPlusData& s = std::get<SPlusData>(data_);
    scale_ = s.alpha_ev;
    period_ = std::log(s.alpha_ev);
    gens_[0] = AffineMap{1.0, 0.0, s.tau, s.alpha_ev, 0.0};
    for (int j = 0; j < 2; ++j) gens_[j + 1] = AffineMap{1.0, s.b[j], s.c[j], 1.0, s.a[j]};
    gens_[3] = AffineMap{1.0, 0.0, s.kappa, 1.0, 0.0};
    lam_ = {{{s.a[0], s.a[1]}, {s.b[0], s.b[1]}}};
    const double det = lam_[0][0] * lam_[1][1] - lam_[0][1] * lam_[1][0];
    laminv_ = {{{lam_[1][1] / det, -lam_[0][1] / det}, {-lam_[1][0] / det, lam_[0][0] / det}}};
    domain_.basis[0] = {s.a[0], s.a[1], 0};
    domain_.basis[1] = {s.b[0], s.b[1], 0};
    domain_.basis[2] = {0, 0, s.kappa};
    init_domain();
}

void Surface::init_domain()
{
    domain_.kind = kind_;
    domain_.y_lo = 1;
    domain_.y_hi = scale_;
    domain_.lo.fill(std::numeric_limits<double>::infinity());
    domain_.hi.fill(-std::numeric_limits<double>::infinity());
    const int n = kind_ == SurfaceKind::sm ? 1 : 8;
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b)
            for (int c = 0; c <= n; ++c)
                for (int e = 0; e <= n; ++e) {
                    Point p = from_unit({double(a) / n, double(b) / n, double(c) / n, double(e) / n});
                    for (int k = 0; k < 3; ++k) {
                        domain_.lo[k] = std::min(domain_.lo[k], p[k]);
                        domain_.hi[k] = std::max(domain_.hi[k], p[k]);
                    }
                }
}

const SMData& Surface::sm() const
{
    if (kind_ != SurfaceKind::sm) fail(ErrorCode::bad_kind, "surface is not of type S_M");
    return std::get<SMData>(data_);
}

const SPlusData& Surface::splus() const
{
    if (kind_ != SurfaceKind::splus) fail(ErrorCode::bad_kind, "surface is not of type S+");
    return std::get<SPlusData>(data_);
}

AffineMap Surface::generator(int i) const
{
    if (i < 0 || i > 3) fail(ErrorCode::invalid_argument, "generator index out of range");
    return gens_[i];
}

GroupElement Surface::element(const std::vector<std::pair<int, long long>>& word) const
{
    GroupElement g;
    for (const auto& [gen, n] : word) {
        g.map = g.map.then(power(generator(gen), n));
        g.word.emplace_back(gen, n);
    }
    return g;
}

double Surface::quad_q(double w1, double w2) const
{
    const SPlusData& s = std::get<SPlusData>(data_);
    const double x2 = s.a[0] * w1 + s.a[1] * w2;
    const double v = s.b[0] * w1 + s.b[1] * w2;
    const double rk = s.b[0] * s.a[1] - s.b[1] * s.a[0];
    return 0.5 * x2 * v + 0.5 * rk * w1 * w2 + (s.c[0] - 0.5 * s.a[0] * s.b[0]) * w1 + (s.c[1] - 0.5 * s.a[1] * s.b[1]) * w2;
}

UnitCoords Surface::to_unit(const Point& p) const
{
    const double u = std::log(p.y2);
    if (kind_ == SurfaceKind::sm) {
        UnitCoords r{};
        for (int i = 0; i < 3; ++i) r[i] = binv_[i][0] * p.x1 + binv_[i][1] * p.y1 + binv_[i][2] * p.x2;
        r[3] = u / period_;
        return r;
    }
    const SPlusData& s = std::get<SPlusData>(data_);
    const double v = (p.y1 - s.m_slope * u) / p.y2;
    const double w1 = laminv_[0][0] * p.x2 + laminv_[0][1] * v;
    const double w2 = laminv_[1][0] * p.x2 + laminv_[1][1] * v;
    return {(p.x1 - quad_q(w1, w2)) / s.kappa, w1, w2, u / period_};
}

Point Surface::from_unit(const UnitCoords& c) const
{
    Point p;
    const double u = c[3] * period_;
    p.y2 = std::exp(u);
    if (kind_ == SurfaceKind::sm) {
        const auto& B = domain_.basis;
        p.x1 = B[0][0] * c[0] + B[0][1] * c[1] + B[0][2] * c[2];
        p.y1 = B[1][0] * c[0] + B[1][1] * c[1] + B[1][2] * c[2];
        p.x2 = B[2][0] * c[0] + B[2][1] * c[1] + B[2][2] * c[2];
        return p;
    }
    const SPlusData& s = std::get<SPlusData>(data_);
    p.x2 = lam_[0][0] * c[1] + lam_[0][1] * c[2];
    const double v = lam_[1][0] * c[1] + lam_[1][1] * c[2];
    p.y1 = v * p.y2 + s.m_slope * u;
    p.x1 = s.kappa * c[0] + quad_q(c[1], c[2]);
    return p;
}

std::pair<Point, GroupElement> Surface::reduce(const Point& p) const
{
    if (!(p.y2 > 0)) fail(ErrorCode::invalid_argument, "reduce: point is not in the upper half plane");
    GroupElement acc;
    Point q = p;
    auto step = [&](int gen, long long n) {
        if (n == 0) return false;
        AffineMap g = power(gens_[gen], n);
        q = g.apply(q);
        acc.map = acc.map.then(g);
        acc.word.emplace_back(gen, n);
        return true;
    };
    for (int it = 0; it < 64; ++it) {
        bool moved = step(0, -tol_floor(std::log(q.y2) / period_));
        UnitCoords c = to_unit(q);
        if (kind_ == SurfaceKind::sm) {
            for (int j = 0; j < 3; ++j) moved |= step(j + 1, -tol_floor(c[j]));
        } else {
            moved |= step(1, -tol_floor(c[1]));
            moved |= step(2, -tol_floor(to_unit(q)[2]));
            moved |= step(3, -tol_floor(to_unit(q)[0]));
        }
        if (!moved) return {q, acc};
    }
    fail(ErrorCode::non_convergent, "reduce: no convergence within 64 sweeps");
}

bool Surface::in_domain(const Point& p, double tol) const
{
    if (!(p.y2 > 0)) return false;
    UnitCoords c = to_unit(p);
    for (double x : c)
        if (x < -tol || x > 1 + tol) return false;
    return true;
}

std::array<std::array<long long, 3>, 3> Surface::fiber_action() const
{
    const SMData& s = sm();
    std::array<std::array<long long, 3>, 3> t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = s.M[j][i];
    return t;
}

Surface default_surface() { return Surface(construct_sm(default_sm_matrix())); }

}  // namespace inoue

#include "inoue/reference.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace inoue {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

void require(const Surface& s, SurfaceKind k, FormKind kind)
{
    if (s.kind() != k)
        fail(ErrorCode::bad_kind, "form '" + form_kind_name(kind) + "' is not defined on surfaces of type " + s.kind_name());
}

MetricField alpha_field()
{
    return MetricField::analytic("alpha", [](auto, auto, auto, auto y2) {
        using S = decltype(y2);
        return Herm2<S>{S(0.0), S(0.0), 0.25 / (y2 * y2)};
    });
}

MetricField beta_field()
{
    return MetricField::analytic("beta", [](auto, auto, auto, auto y2) {
        using S = decltype(y2);
        return Herm2<S>{y2, S(0.0), S(0.0)};
    });
}

MetricField alpha_prime_field()
{
    return MetricField::analytic("alpha-prime", [](auto, auto, auto, auto y2) {
        using S = decltype(y2);
        return Herm2<S>{S(0.0), S(0.0), 0.5 / (y2 * y2)};
    });
}

MetricField gamma_field(double m)
{
    return MetricField::analytic("gamma", [m](auto, auto y1, auto, auto y2) {
        using S = decltype(y2);
        S v = (y1 - m * log(y2)) / y2;
        return Herm2<S>{S(1.0), -v, v * v};
    });
}

MetricField omega_inf(const Surface& s) { return s.kind() == SurfaceKind::sm ? alpha_field() : alpha_prime_field(); }

MetricField omega_lf_default(const Surface& s)
{
    if (s.kind() == SurfaceKind::sm) return linear_combination("tricerri", {{4.0, alpha_field()}, {1.0, beta_field()}});
    return linear_combination("vaisman", {{2.0, alpha_prime_field()}, {1.0, gamma_field(s.splus().m_slope)}});
}

// Integer matrix P with f0 acting on fiber unit coordinates w as w -> P^T w.
struct FiberAction {
    std::array<std::array<long long, 3>, 3> P{}, Pinv{};
    int dim = 3;
};

FiberAction fiber_action_of(const Surface& s)
{
    FiberAction a;
    if (s.kind() == SurfaceKind::sm) {
        a.P = s.sm().M;
    } else {
        const auto& N = s.splus().N;
        a.dim = 2;
        a.P = {{{N[0][0], N[0][1], 0}, {N[1][0], N[1][1], 0}, {0, 0, 1}}};
    }
    const auto& P = a.P;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
            a.Pinv[i][j] = P[i1][j1] * P[i2][j2] - P[i1][j2] * P[i2][j1];
        }
    return a;
}

std::array<long long, 3> mul(const std::array<std::array<long long, 3>, 3>& A, const std::array<long long, 3>& v)
{
    std::array<long long, 3> r{};
    for (int i = 0; i < 3; ++i) r[i] = A[i][0] * v[0] + A[i][1] * v[1] + A[i][2] * v[2];
    return r;
}

struct Wave {
    SurfaceKind kind;
    double L, width, phase;
    std::array<long long, 3> k;
    FiberAction act;
    std::array<std::array<double, 3>, 3> basis;
    double m_slope = 0;
    std::array<std::array<double, 2>, 2> laminv{};

    template <class S>
    std::array<S, 3> fiber(const S& x1, const S& y1, const S& x2, const S& y2) const
    {
        if (kind == SurfaceKind::sm) {
            // solve basis * s = (x1, y1, x2) with the cofactor inverse
            const auto& B = basis;
            double det = B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1]) - B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0]) +
                         B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0]);
            std::array<S, 3> out;
            const S X[3] = {x1, y1, x2};
            for (int i = 0; i < 3; ++i) {
                S acc = S(0.0);
                for (int j = 0; j < 3; ++j) {
                    int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
                    acc = acc + X[j] * ((B[i1][j1] * B[i2][j2] - B[i1][j2] * B[i2][j1]) / det);
                }
                out[i] = acc;
            }
            return out;
        }
        S v = (y1 - m_slope * log(y2)) / y2;
        return {laminv[0][0] * x2 + laminv[0][1] * v, laminv[1][0] * x2 + laminv[1][1] * v, S(0.0)};
    }

    template <class S>
    S operator()(const S& x1, const S& y1, const S& x2, const S& y2) const
    {
        S u = log(y2);
        auto w = fiber(x1, y1, x2, y2);
        const double sig = width * L;
        const long long n0 = static_cast<long long>(std::floor((re(u) - 0.5 * L) / L));
        S total = S(0.0);
        for (long long n = n0 - 3; n <= n0 + 4; ++n) {
            // K_n = P^{-n} k
            std::array<long long, 3> K = k;
            for (long long j = 0; j < std::abs(n); ++j) K = mul(n > 0 ? act.Pinv : act.P, K);
            S d = u - (double(n) * L + 0.5 * L);
            S bump = exp(-(d * d) / (2 * sig * sig));
            S arg = S(phase);
            for (int i = 0; i < act.dim; ++i) arg = arg + (kTwoPi * double(K[i])) * w[i];
            total = total + bump * cos(arg);
        }
        return total;
    }
};

Wave make_wave(const Surface& s, const std::array<int, 3>& k, double phase, double width)
{
    Wave w{s.kind(), s.period(), width, phase, {k[0], k[1], k[2]}, fiber_action_of(s), s.domain().basis};
    if (s.kind() == SurfaceKind::splus) {
        const auto& sp = s.splus();
        w.m_slope = sp.m_slope;
        const double det = sp.a[0] * sp.b[1] - sp.a[1] * sp.b[0];
        w.laminv = {{{sp.b[1] / det, -sp.a[1] / det}, {-sp.b[0] / det, sp.a[0] / det}}};
    }
    return w;
}

struct FlatFactor final : ScalarField::Model {
    MetricField omega;
    bool sm;
    bool take_log;
    FlatFactor(MetricField w, bool is_sm, bool lg) : omega(std::move(w)), sm(is_sm), take_log(lg) {}
    double value(const Point& p) const override
    {
        Metric2 g = omega(p);
        if (!(g.g11.real() > 0)) fail(ErrorCode::singular_metric, "conformal_flatten: g_{1 1bar} <= 0");
        double f = (sm ? p.y2 : 1.0) / g.g11.real();
        return take_log ? std::log(f) : f;
    }
    bool has_jet() const override { return omega.has_jet(); }
    Jet jet(const Point& p, int order) const override
    {
        Herm2<Jet> h = omega.jet(p, order);
        Jet y = Jet::variable(3, p.y2, order);
        Jet f = (sm ? y : Jet(1.0)) / real(h.g11);
        return take_log ? log(f) : f;
    }
};

}  // namespace

FormKind parse_form_kind(const std::string& name)
{
    if (name == "alpha") return FormKind::alpha;
    if (name == "beta") return FormKind::beta;
    if (name == "alpha-prime" || name == "alpha_prime") return FormKind::alpha_prime;
    if (name == "gamma") return FormKind::gamma;
    if (name == "tricerri") return FormKind::tricerri;
    if (name == "vaisman") return FormKind::vaisman;
    if (name == "omega-tilde" || name == "omega_tilde") return FormKind::omega_tilde;
    if (name == "omega-infinity" || name == "omega_infinity") return FormKind::omega_infinity;
    fail(ErrorCode::bad_kind, "unknown form kind '" + name + "'");
}

std::string form_kind_name(FormKind kind)
{
    switch (kind) {
    case FormKind::alpha: return "alpha";
    case FormKind::beta: return "beta";
    case FormKind::alpha_prime: return "alpha-prime";
    case FormKind::gamma: return "gamma";
    case FormKind::tricerri: return "tricerri";
    case FormKind::vaisman: return "vaisman";
    case FormKind::omega_tilde: return "omega-tilde";
    case FormKind::omega_infinity: return "omega-infinity";
    }
    return "?";
}

MetricField form_field(const Surface& s, FormKind kind, double t)
{
    switch (kind) {
    case FormKind::alpha: require(s, SurfaceKind::sm, kind); return alpha_field();
    case FormKind::beta: require(s, SurfaceKind::sm, kind); return beta_field();
    case FormKind::tricerri: require(s, SurfaceKind::sm, kind); return omega_lf_default(s);
    case FormKind::alpha_prime: require(s, SurfaceKind::splus, kind); return alpha_prime_field();
    case FormKind::gamma: require(s, SurfaceKind::splus, kind); return gamma_field(s.splus().m_slope);
    case FormKind::vaisman: require(s, SurfaceKind::splus, kind); return omega_lf_default(s);
    case FormKind::omega_tilde: return omega_tilde(s, omega_lf_default(s), t);
    case FormKind::omega_infinity: return omega_inf(s).renamed("omega-infinity");
    }
    fail(ErrorCode::bad_kind, "unknown form kind");
}

Metric2 eval_form(const Surface& s, FormKind kind, const Point& p, double t) { return form_field(s, kind, t)(p); }

MetricField omega_tilde(const Surface& s, const MetricField& omega_lf, double t)
{
    const double e = std::exp(-t);
    return linear_combination("omega-tilde", {{e, omega_lf}, {1 - e, omega_inf(s)}});
}

MetricField omega_tilde_dt(const Surface& s, const MetricField& omega_lf, double t)
{
    const double e = std::exp(-t);
    return linear_combination("omega-tilde-dt", {{-e, omega_lf}, {e, omega_inf(s)}});
}

MetricField explicit_solution(const Surface& s, double t)
{
    const double e = std::exp(-t);
    if (s.kind() == SurfaceKind::sm)
        return linear_combination("explicit-sm", {{e, beta_field()}, {1 + 3 * e, alpha_field()}});
    return linear_combination("explicit-splus", {{e, gamma_field(s.splus().m_slope)}, {1 + e, alpha_prime_field()}});
}

MetricField explicit_solution_dt(const Surface& s, double t)
{
    const double e = std::exp(-t);
    if (s.kind() == SurfaceKind::sm)
        return linear_combination("explicit-sm-dt", {{-e, beta_field()}, {-3 * e, alpha_field()}});
    return linear_combination("explicit-splus-dt", {{-e, gamma_field(s.splus().m_slope)}, {-e, alpha_prime_field()}});
}

double is_strongly_flat(const Surface& s, const MetricField& omega, const std::vector<Point>& samples, double rel_tol)
{
    if (samples.empty()) fail(ErrorCode::invalid_argument, "is_strongly_flat: no samples");
    std::vector<double> ratio;
    for (const Point& p : samples) {
        Metric2 g = omega(p);
        if (!positive_definite(g)) fail(ErrorCode::singular_metric, "is_strongly_flat: metric not positive definite");
        ratio.push_back(g.g11.real() / (s.kind() == SurfaceKind::sm ? p.y2 : 1.0));
    }
    double mean = 0;
    for (double r : ratio) mean += r;
    mean /= double(ratio.size());
    for (double r : ratio)
        if (std::abs(r - mean) > rel_tol * std::abs(mean))
            fail(ErrorCode::not_strongly_flat, "g_{1 1bar} ratio varies beyond tolerance (" + std::to_string(r) + " vs " +
                                                   std::to_string(mean) + ")");
    return mean;
}

Flattening conformal_flatten(const Surface& s, const MetricField& omega)
{
    const bool sm = s.kind() == SurfaceKind::sm;
    ScalarField factor(std::make_shared<FlatFactor>(omega, sm, false));
    ScalarField sigma(std::make_shared<FlatFactor>(omega, sm, true));
    return {sigma, conformal(omega.name() + "-lf", factor, omega)};
}

double VolumeDensity::coefficient(const Point& p) const
{
    return kind_ == SurfaceKind::sm ? c_ / (2 * p.y2) : c_ / (p.y2 * p.y2);
}

ScalarField VolumeDensity::log_coefficient() const
{
    const double c = c_;
    if (kind_ == SurfaceKind::sm)
        return ScalarField::analytic([c](auto, auto, auto, auto y2) { return log(c / (2.0 * y2)); });
    return ScalarField::analytic([c](auto, auto, auto, auto y2) { return log(c / (y2 * y2)); });
}

VolumeDensity volume_density(const Surface& s, const MetricField& omega_lf, const std::vector<Point>& samples)
{
    return VolumeDensity(s.kind(), is_strongly_flat(s, omega_lf, samples));
}

MetricField named_metric(const Surface& s, const std::string& key, double t)
{
    if (key == "explicit-sm") {
        if (s.kind() != SurfaceKind::sm) fail(ErrorCode::bad_kind, "explicit-sm requires an S_M surface");
        return explicit_solution(s, t);
    }
    if (key == "explicit-splus") {
        if (s.kind() != SurfaceKind::splus) fail(ErrorCode::bad_kind, "explicit-splus requires an S+ surface");
        return explicit_solution(s, t);
    }
    return form_field(s, parse_form_kind(key), t);
}

std::vector<std::string> metric_names()
{
    return {"alpha", "beta", "alpha-prime", "gamma", "tricerri", "vaisman", "omega-tilde", "omega-infinity",
            "explicit-sm", "explicit-splus"};
}

ScalarField invariant_wave(const Surface& s, const std::array<int, 3>& k, double phase, double width)
{
    Wave w = make_wave(s, k, phase, width);
    return ScalarField::analytic([w](auto x1, auto y1, auto x2, auto y2) { return w(x1, y1, x2, y2); });
}

MetricField invariant_test_metric(const Surface& s, std::uint64_t seed, double amplitude)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_int_distribution<int> K(-1, 1);
    auto rk = [&] {
        std::array<int, 3> k{K(rng), K(rng), K(rng)};
        if (k == std::array<int, 3>{0, 0, 0}) k[0] = 1;
        return k;
    };
    const double L = s.period();
    struct Coef {
        double a, ph, b;
        Wave w;
    };
    auto coef = [&] { return Coef{amplitude * U(rng), kTwoPi * U(rng), amplitude * U(rng), make_wave(s, rk(), kTwoPi * U(rng), 0.2)}; };
    const Coef A = coef(), B = coef(), C = coef(), D = coef();
    const double theta = s.mu_arg();
    const bool sm = s.kind() == SurfaceKind::sm;
    const double m = sm ? 0.0 : s.splus().m_slope;

    auto fn = [=](auto x1, auto y1, auto x2, auto y2) {
        using S = decltype(y2);
        S u = log(y2);
        auto term = [&](const Coef& c) { return c.a * cos(u * (kTwoPi / L) + c.ph) + c.b * c.w(x1, y1, x2, y2); };
        S ea = exp(term(A)), eb = exp(term(B));
        S cross = 0.5 * (term(C) + cplx(0, 1) * term(D));
        if (sm) {
            S chi = exp(u * cplx(0, -theta / L)) / sqrt(y2);
            return Herm2<S>{y2 * ea, cross * chi, eb / (y2 * y2)};
        }
        S v = (y1 - m * log(y2)) / y2;
        S g11 = ea;
        S g12 = -ea * v + cross / y2;
        S g22 = ea * v * v + eb / (y2 * y2) - 2.0 * v * real(cross) / y2;
        return Herm2<S>{g11, g12, g22};
    };
    return MetricField::analytic("invariant-test-" + std::to_string(seed), fn);
}

std::vector<Point> sample_domain(const Surface& s, int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<Point> pts;
    pts.reserve(count);
    for (int i = 0; i < count; ++i) {
        UnitCoords c{U(rng), U(rng), U(rng), U(rng)};
        pts.push_back(s.from_unit(c));
    }
    return pts;
}

}  // namespace inoue

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "inoue/flow.hpp"
#include "inoue/reference.hpp"

using namespace inoue;

namespace {

// phi(t) = e^{-t} int_0^t e^s log(a(s)) ds by composite Simpson
double ode_quadrature(SurfaceKind k, double t)
{
    const int n = 20000;
    const double h = t / n;
    double sum = 0;
    for (int i = 0; i <= n; ++i) {
        const double s = i * h;
        const double w = i == 0 || i == n ? 1 : i % 2 ? 4 : 2;
        sum += w * std::exp(s) * std::log(reduced_coefficient(k, s));
    }
    return std::exp(-t) * sum * h / 3;
}

}  // namespace

TEST_CASE("constant-mode ODE against quadrature")
{
    for (SurfaceKind k : {SurfaceKind::sm, SurfaceKind::splus})
        for (double t : {0.5, 2.0, 8.0}) CHECK(constant_mode_value(k, t) == doctest::Approx(ode_quadrature(k, t)).epsilon(1e-10));
}

TEST_CASE("reduced rhs at zero data is log a(t)")
{
    std::vector<double> phi(32, 0.0), out;
    reduced_rhs(SurfaceKind::sm, 0.3, 1.0, phi, out);
    for (double v : out) CHECK(v == doctest::Approx(std::log(1 + 3 * std::exp(-1.0))));
}

TEST_CASE("reduced rhs reports positivity loss")
{
    std::vector<double> phi(32, 0.0), out;
    phi[5] = 1.0;  // a sharp spike: phi_uu very negative at node 5
    bool thrown = false;
    try {
        reduced_rhs(SurfaceKind::sm, 0.3, 0.0, phi, out);
    } catch (const Error& e) {
        thrown = e.code() == ErrorCode::positivity_loss;
    }
    CHECK(thrown);
}

TEST_CASE("non-positive initial data is rejected")
{
    Surface s = default_surface();
    const double L = s.period();
    bool thrown = false;
    try {
        ReducedFlow::from_function(s, 64, [L](double u) { return 0.5 * std::cos(2 * std::numbers::pi * 8 * u / L); });
    } catch (const Error& e) {
        thrown = e.code() == ErrorCode::invalid_initial_data;
    }
    CHECK(thrown);
}

TEST_CASE("periodic spline reproduces smooth periodic data")
{
    const int n = 64;
    const double L = 2.0;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = std::sin(std::numbers::pi * i * L / n);
    PeriodicSpline sp(L, v);
    for (double x : {0.013, 0.77, 1.5, 1.999, 2.3, -0.4}) {
        const auto e = sp.eval(x);
        CHECK(e[0] == doctest::Approx(std::sin(std::numbers::pi * x)).epsilon(1e-5));
    }
}

TEST_CASE("reduced flow with zero data follows the ODE and the explicit solution")
{
    for (Surface s : {default_surface(), Surface(construct_splus({{{1, 1}, {1, 2}}}, 0, 0, 1, cplx(0, 1)))}) {
        ReducedFlow f = ReducedFlow::from_function(s, 64, [](double) { return 0.0; });
        const auto snaps = f.run({1.0, 2.0});
        for (const auto& sn : snaps)
            for (double v : sn.phi) CHECK(std::abs(v - constant_mode_value(s.kind(), sn.t)) < 1e-6);
        const MetricField g = f.metric(), e = explicit_solution(s, 2.0);
        for (const Point& p : sample_domain(s, 10, 3)) {
            const Metric2 a = g(p), b = e(p);
            CHECK(std::abs(a.g11 - b.g11) + std::abs(a.g12 - b.g12) + std::abs(a.g22 - b.g22) < 1e-6);
        }
    }
}

TEST_CASE("full grid neighbours invert across the seam")
{
    FullGrid g(default_surface(), 5, 4);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& nb = g.neighbours(i);
        for (int a = 0; a < 4; ++a) {
            CHECK(g.neighbours(nb[2 * a])[2 * a + 1] == i);
            CHECK(g.neighbours(nb[2 * a + 1])[2 * a] == i);
        }
    }
}

TEST_CASE("full solver: zero data matches the ODE; workers do not change the result")
{
    Surface s = default_surface();
    StepOptions o;
    FullFlow a(s, 4, 6, [](const Point&) { return 0.0; }, o);
    a.advance_to(0.5);
    for (double v : a.phi()) CHECK(std::abs(v - constant_mode_value(SurfaceKind::sm, 0.5)) < 1e-6);

    const double L = s.period();
    auto rho = [L](const Point& p) { return 0.002 * std::cos(2 * std::numbers::pi * std::log(p.y2) / L); };
    o.workers = 1;
    FullFlow b(s, 4, 6, rho, o);
    o.workers = 3;
    FullFlow c(s, 4, 6, rho, o);
    b.advance_to(0.3);
    c.advance_to(0.3);
    CHECK(b.phi() == c.phi());
}

TEST_CASE("full solver agrees with the reduced solver on base-only data")
{
    Surface s = default_surface();
    const double L = s.period();
    auto rho_u = [L](double u) { return 0.002 * std::cos(2 * std::numbers::pi * u / L); };
    ReducedFlow r = ReducedFlow::from_function(s, 16, rho_u);
    r.advance_to(0.5);
    FullFlow f(s, 4, 16, [&](const Point& p) { return rho_u(std::log(p.y2)); });
    f.advance_to(0.5);
    double worst = 0;
    for (std::size_t i = 0; i < f.phi().size(); ++i) {
        const int m = f.grid().coords(i)[3];
        worst = std::max(worst, std::abs(f.phi()[i] - r.phi()[m]));
    }
    CHECK(worst < 1e-6);
}

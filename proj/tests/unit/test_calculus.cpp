#include <doctest.h>

#include <cmath>

#include "inoue/calculus.hpp"
#include "inoue/reference.hpp"
#include "inoue/verify.hpp"

using namespace inoue;

namespace {

MetricField identity()
{
    return MetricField::analytic("identity", [](auto, auto, auto, auto y2) {
        using S = decltype(y2);
        return Herm2<S>{S(1.0) + 0.0 * y2, S(0.0) * y2, S(1.0) + 0.0 * y2};
    });
}

DiffOptions fd(double h = 1e-3, int levels = 2)
{
    DiffOptions o;
    o.backend = DiffBackend::finite_difference;
    o.h = h;
    o.richardson = levels;
    return o;
}

}  // namespace

TEST_CASE("identity metric: connection, torsion, curvature vanish")
{
    const Point p{0.3, -0.2, 0.7, 1.4};
    for (DiffOptions o : {DiffOptions{}, fd()}) {
        ChernPackage pk = chern_package(identity(), p, ChernLevel::full, o);
        CHECK(pk.gamma.max_abs() < 1e-12);
        CHECK(pk.torsion.max_abs() < 1e-12);
        CHECK(pk.curvature.max_abs() < 1e-10);
        CHECK(std::abs(pk.scalar) < 1e-10);
    }
}

TEST_CASE("trace oracles")
{
    Surface s = default_surface();
    const MetricField w = named_metric(s, "tricerri");
    const MetricField w2 = linear_combination("2w", {{2.0, w}});
    for (const Point& p : sample_domain(s, 10, 2)) {
        CHECK(trace(w, w, p) == doctest::Approx(2).epsilon(1e-14));
        CHECK(trace(w2, w, p) == doctest::Approx(4).epsilon(1e-14));
    }
}

TEST_CASE("conformal identity: Ric = -ddbar(2u)")
{
    // det(e^u I) = e^{2u}
    auto u = [](auto x1, auto y1, auto x2, auto y2) { return 0.3 * sin(x1) * cos(y2) + 0.2 * y1 * x2; };
    const ScalarField uf = ScalarField::analytic(u);
    const ScalarField eu = ScalarField::analytic([u](auto a, auto b, auto c, auto d) { return exp(u(a, b, c, d)); });
    const MetricField g = conformal("conformal", eu, identity());
    const ScalarField two_u = ScalarField::analytic([u](auto a, auto b, auto c, auto d) { return 2.0 * u(a, b, c, d); });
    for (DiffOptions o : {DiffOptions{}, fd()}) {
        const Point p{0.4, 0.1, -0.3, 1.2};
        const Metric2 ric = chern_ricci(g, p, o).form;
        const Metric2 want = ddbar(two_u, p, o);
        CHECK(std::abs(ric.g11 + want.g11) < 1e-7);
        CHECK(std::abs(ric.g12 + want.g12) < 1e-7);
        CHECK(std::abs(ric.g22 + want.g22) < 1e-7);
    }
    (void)uf;
}

TEST_CASE("finite differences converge at order >= 2 on the Tricerri family")
{
    Surface s = default_surface();
    const MetricField w = explicit_solution(s, 1.0);
    const MetricField sampled = MetricField::sampled("sampled", [w](const Point& p) { return w(p); });
    const Point p = sample_domain(s, 1, 5).front();
    const double y = p.y2;
    const cplx want = -(1 + 3 * std::exp(-1.0)) / (8 * y * y * y * y);
    const double e1 = std::abs(curvature(sampled, p, fd(2e-2, 0))({1, 1, 1, 1}) - want);
    const double e2 = std::abs(curvature(sampled, p, fd(1e-2, 0))({1, 1, 1, 1}) - want);
    CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("Tricerri closed forms hold with the finite-difference backend")
{
    VerifyOptions o;
    o.points = 20;
    o.diff = fd();
    for (const auto& c : check_closed_forms(default_surface(), o)) CHECK_MESSAGE(c.pass, c.name << " " << c.value);
}

TEST_CASE("symmetries: torsion antisymmetric, curvature Hermitian, Ricci cross-check")
{
    VerifyOptions o;
    o.points = 20;
    for (const auto& c : check_symmetries(default_surface(), o)) CHECK_MESSAGE(c.pass, c.name << " " << c.value);
    // a generic non-Kaehler field
    Surface s = default_surface();
    const MetricField g = invariant_test_metric(s, 11);
    for (const Point& p : sample_domain(s, 10, 8)) {
        ChernPackage pk = chern_package(g, p, ChernLevel::curvature);
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) CHECK(std::abs(pk.T(k, i, j) + pk.T(k, j, i)) < 1e-12);
        CHECK(std::abs(pk.ricci.g11 - pk.ricci_from_curvature.g11) < 1e-7);
        CHECK(std::abs(pk.ricci.g12 - pk.ricci_from_curvature.g12) < 1e-7);
        CHECK(std::abs(pk.ricci.g22 - pk.ricci_from_curvature.g22) < 1e-7);
    }
}

TEST_CASE("Rm bounded along the Tricerri family, grows at most like e^{t/2} for a generic leafwise-flat reference")
{
    Surface s = default_surface();
    const auto pts = sample_domain(s, 20, 6);
    double lo = 1e300, hi = 0;
    const Flattening fl = conformal_flatten(s, invariant_test_metric(s, 3));
    double worst_ratio = 0, first = 0;
    for (double t : {0.0, 2.0, 5.0, 10.0}) {
        double m = 0, mg = 0;
        for (const Point& p : pts) {
            m = std::max(m, tensor_norm(curvature(explicit_solution(s, t), p), explicit_solution(s, t)(p)));
            const MetricField wt = omega_tilde(s, fl.omega_lf, t);
            mg = std::max(mg, tensor_norm(curvature(wt, p), wt(p)) * std::exp(-t / 2));
        }
        lo = std::min(lo, m);
        hi = std::max(hi, m);
        if (t == 0) first = mg;
        worst_ratio = std::max(worst_ratio, mg / first);
    }
    CHECK(hi / lo < 10);
    CHECK(worst_ratio < 10);
}

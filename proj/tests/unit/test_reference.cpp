#include <doctest.h>

#include <cmath>

#include "inoue/expr.hpp"
#include "inoue/reference.hpp"
#include "inoue/verify.hpp"

using namespace inoue;

namespace {

Surface splus_test() { return Surface(construct_splus({{{1, 1}, {1, 2}}}, 0, 0, 1, cplx(0, 1))); }

VerifyOptions small()
{
    VerifyOptions o;
    o.points = 30;
    o.residual_points = 20;
    return o;
}

}  // namespace

TEST_CASE("closed-form reference metrics on S_M")
{
    Surface s = default_surface();
    const Point p{0.1, 0.2, 0.3, 1.2};
    const Metric2 a = named_metric(s, "alpha")(p), b = named_metric(s, "beta")(p), t = named_metric(s, "tricerri")(p);
    CHECK(std::abs(a.g11) == 0);
    CHECK(a.g22.real() == doctest::Approx(1 / (4 * 1.44)));
    CHECK(b.g11.real() == doctest::Approx(1.2));
    CHECK(std::abs(b.g22) == 0);
    CHECK(t.g11.real() == doctest::Approx(1.2));
    CHECK(t.g22.real() == doctest::Approx(1 / 1.44));
    // explicit solution at t = 0 is the Tricerri metric
    const Metric2 e = explicit_solution(s, 0)(p);
    CHECK(std::abs(e.g11 - t.g11) < 1e-15);
    CHECK(std::abs(e.g22 - t.g22) < 1e-15);
}

TEST_CASE("forms of the other family raise BadKind")
{
    bool thrown = false;
    try {
        form_field(default_surface(), FormKind::alpha_prime);
    } catch (const Error& e) {
        thrown = e.code() == ErrorCode::bad_kind;
    }
    CHECK(thrown);
}

TEST_CASE("Ricci identities, volume form and explicit residual")
{
    for (Surface s : {default_surface(), splus_test()}) {
        const auto o = small();
        CHECK(check_ricci_identity(s, o).pass);
        CHECK(check_volume_form(s, o).pass);
        CHECK(check_explicit_residual(s, o).pass);
    }
}

TEST_CASE("conformal flattening: c = 1 and idempotent")
{
    for (Surface s : {default_surface(), splus_test()}) {
        for (const auto& c : check_flattening(s, small())) CHECK_MESSAGE(c.pass, c.name << " " << c.value);
        // the raw test metric is not strongly flat
        const auto pts = sample_domain(s, 20, 1);
        bool thrown = false;
        try {
            is_strongly_flat(s, invariant_test_metric(s, 2), pts);
        } catch (const Error& e) {
            thrown = e.code() == ErrorCode::not_strongly_flat;
        }
        CHECK(thrown);
    }
}

TEST_CASE("reference forms and random test metrics are Gamma-invariant")
{
    for (Surface s : {default_surface(), splus_test()}) {
        CHECK(check_form_invariance(s, small()).pass);
        const auto pts = sample_domain(s, 30, 12);
        for (int seed = 1; seed <= 3; ++seed) {
            const MetricField g = invariant_test_metric(s, seed);
            for (int i = 0; i < 4; ++i) CHECK(check_invariance(g, s.element({{i, 1}}), pts) < 1e-8);
            for (const Point& p : pts) CHECK(positive_definite(g(p)));
        }
    }
}

TEST_CASE("invariant waves and expressions")
{
    Surface s = default_surface();
    CHECK(invariance_defect(s, Expression::parse("0.3*wave(1,0,0) + cos(2*pi*u/L)").bind(s)) < 1e-10);
    CHECK(invariance_defect(s, Expression::parse("cos(u)").bind(s)) > 1e-3);
    CHECK(Expression::parse("wave(0,1,0)").uses_fiber());
    CHECK(!Expression::parse("sin(2*pi*u/L)^2").uses_fiber());
    bool thrown = false;
    try {
        Expression::parse("1 +* 2");
    } catch (const Error& e) {
        thrown = e.code() == ErrorCode::invalid_initial_data;
    }
    CHECK(thrown);
}

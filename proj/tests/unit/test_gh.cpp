#include <doctest.h>

#include <cmath>

#include "inoue/gh.hpp"
#include "inoue/reference.hpp"

using namespace inoue;

namespace {

MetricField identity()
{
    return MetricField::sampled("identity", [](const Point&) { return Metric2{1.0, 0.0, 1.0}; });
}

}  // namespace

TEST_CASE("segment length uses g_R = 2 Re(g dz dzbar)")
{
    CHECK(segment_length(identity(), {0, 0, 0, 1}, {1, 0, 0, 1}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(segment_length(identity(), {0, 0, 0, 1}, {0, 3, 0, 5}) == doctest::Approx(std::sqrt(2.0) * 5));
}

TEST_CASE("dijkstra on a path graph and disconnection")
{
    MetricGraph g;
    g.nodes = 4;
    // 0 - 1 - 2 - 3 with weights 1, 2, 3 (both directions)
    g.offsets = {0, 1, 3, 5, 6};
    g.targets = {1, 0, 2, 1, 3, 2};
    g.weights = {1, 1, 2, 2, 3, 3};
    const auto d = dijkstra(g, 0);
    CHECK(d[3] == doctest::Approx(6));
    g.offsets = {0, 1, 2, 3, 3};
    g.targets = {1, 0, 1};
    g.weights = {1, 1, 2};
    bool thrown = false;
    try {
        dijkstra(g, 0);
    } catch (const Error& e) {
        thrown = e.code() == ErrorCode::disconnected;
    }
    CHECK(thrown);
}

TEST_CASE("limit circle length from omega_inf")
{
    Surface sm = default_surface();
    CHECK(circle_length(sm, named_metric(sm, "alpha"), 256) == doctest::Approx(sm.period() / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(limit_circle(sm).length == doctest::Approx(sm.period() / std::sqrt(2.0)));
    Surface sp(construct_splus({{{1, 1}, {1, 2}}}, 0, 0, 1, cplx(0, 1)));
    CHECK(circle_length(sp, named_metric(sp, "alpha-prime"), 256) == doctest::Approx(sp.period()).epsilon(1e-6));
    CHECK(limit_circle(sp).length == doctest::Approx(sp.period()));
}

TEST_CASE("graph layouts: degrees and sources")
{
    Surface s = default_surface();
    const GraphLayout f = fiber_layout(s, 6, 1.0);
    CHECK(f.nodes == 216);
    for (std::size_t i = 0; i < f.nodes; ++i) CHECK(f.offsets[i + 1] - f.offsets[i] == 26);
    const GraphLayout q = quotient_layout(s, 4, 5);
    CHECK(q.nodes == 320);
    for (std::size_t i = 0; i < q.nodes; ++i) CHECK(q.offsets[i + 1] - q.offsets[i] == 80);
    CHECK(pick_sources(100, 8, 1).size() == 100);
    const auto a = pick_sources(30000, 16, 5), b = pick_sources(30000, 16, 5);
    CHECK(a.size() == 16);
    CHECK(a == b);
}

TEST_CASE("fiber collapses along the explicit solution")
{
    Surface s = default_surface();
    const double d0 = fiber_diameter(s, explicit_solution(s, 0), 8, 1.0);
    const double d6 = fiber_diameter(s, explicit_solution(s, 6), 8, 1.0);
    CHECK(d6 < 0.25 * d0);
}

TEST_CASE("fiber diameter is stable under refinement and worker count")
{
    Surface s = default_surface();
    const MetricField g = explicit_solution(s, 2);
    const double a = fiber_diameter(s, g, 12, 1.0, 64, 1, 1);
    const double b = fiber_diameter(s, g, 24, 1.0, 64, 1, 1);
    CHECK(std::abs(a - b) / b < 0.05);
    CHECK(fiber_diameter(s, g, 12, 1.0, 64, 1, 3) == a);
}

TEST_CASE("gh terms are deterministic across workers")
{
    Surface s = default_surface();
    const GraphLayout q = quotient_layout(s, 4, 6);
    const MetricField g = explicit_solution(s, 4);
    const GhTerms a = gh_terms(s, weigh(q, g, 1), 16, 1, 1);
    const GhTerms b = gh_terms(s, weigh(q, g, 3), 16, 1, 3);
    CHECK(a.bound == b.bound);
    CHECK(a.section == b.section);
    CHECK(a.bound >= a.section);
}

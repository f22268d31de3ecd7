#include <doctest.h>

#include <cmath>
#include <random>

#include "inoue/reference.hpp"
#include "inoue/surface.hpp"
#include "inoue/verify.hpp"

using namespace inoue;

namespace {

Surface splus_test() { return Surface(construct_splus({{{1, 1}, {1, 2}}}, 0, 0, 1, cplx(0, 1))); }

ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::ok;
}

}  // namespace

TEST_CASE("default S_M is the plastic-number surface")
{
    Surface s = default_surface();
    const double plastic = 1.32471795724474602596;
    CHECK(s.scale() == doctest::Approx(plastic).epsilon(1e-14));
    CHECK(s.period() == doctest::Approx(std::log(plastic)).epsilon(1e-14));
    // lambda |mu|^2 = 1
    CHECK(s.sm().lambda * std::norm(s.sm().mu) == doctest::Approx(1).epsilon(1e-13));
}

TEST_CASE("constructor errors")
{
    CHECK(code_of([] { construct_sm({{{1, 0, 0}, {0, 2, 0}, {0, 0, 1}}}); }) == ErrorCode::not_unimodular);
    // x^3 - 3x - 1 has three real roots
    CHECK(code_of([] { construct_sm({{{0, 0, 1}, {1, 0, 3}, {0, 1, 0}}}); }) == ErrorCode::wrong_spectrum);
    CHECK(code_of([] { construct_splus({{{1, 1}, {1, 2}}}, 0, 0, 0); }) == ErrorCode::zero_r);
    CHECK(code_of([] { construct_splus({{{1, 1}, {0, 1}}}, 0, 0, 1); }) == ErrorCode::not_hyperbolic);
}

TEST_CASE("reduce lands in the domain and preserves the orbit")
{
    for (Surface s : {default_surface(), splus_test()}) {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> x(-5, 5), ly(-2, 2);
        for (int k = 0; k < 200; ++k) {
            const Point p{x(rng), x(rng), x(rng), std::exp(ly(rng))};
            auto [q, g] = s.reduce(p);
            CHECK(s.in_domain(q, 1e-9));
            const Point back = g.map.apply(p);
            CHECK(std::abs(back.x1 - q.x1) + std::abs(back.y1 - q.y1) + std::abs(back.x2 - q.x2) +
                      std::abs(back.y2 - q.y2) <
                  1e-8);
        }
    }
}

TEST_CASE("unit chart round trip")
{
    for (Surface s : {default_surface(), splus_test()}) {
        for (const Point& p : sample_domain(s, 50, 9)) {
            const Point q = s.from_unit(s.to_unit(p));
            CHECK(std::abs(q.x1 - p.x1) + std::abs(q.y1 - p.y1) + std::abs(q.x2 - p.x2) + std::abs(q.y2 - p.y2) < 1e-11);
        }
    }
}

TEST_CASE("f0 acts on S_M fiber coordinates by the integer matrix")
{
    Surface s = default_surface();
    const auto A = s.fiber_action();
    const GroupElement f0 = s.element({{0, 1}});
    for (const Point& p : sample_domain(s, 20, 4)) {
        const UnitCoords a = s.to_unit(p), b = s.to_unit(f0.map.apply(p));
        for (int i = 0; i < 3; ++i) {
            double want = 0;
            for (int j = 0; j < 3; ++j) want += double(A[i][j]) * a[j];
            CHECK(b[i] == doctest::Approx(want).epsilon(1e-10));
        }
        CHECK(b[3] == doctest::Approx(a[3] + 1).epsilon(1e-12));
    }
}

TEST_CASE("S+ constants solve their linear system and the group relations hold")
{
    for (auto [p, q, r] : std::vector<std::array<long long, 3>>{{0, 0, 1}, {1, -2, 3}, {2, 5, -1}}) {
        Surface s(construct_splus({{{1, 1}, {1, 2}}}, p, q, r, cplx(0.3, 1.1)));
        for (const auto& c : check_splus_constants(s)) CHECK_MESSAGE(c.pass, c.name << " " << c.value);
    }
}

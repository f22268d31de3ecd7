#include <doctest.h>

#include <cmath>

#include "inoue/diagnostics.hpp"

using namespace inoue;

namespace {

Series make(const std::string& label, double (*f)(double), double t_end = 8, double dt = 0.25)
{
    Series s;
    s.label = label;
    for (double t = 0; t <= t_end + 1e-12; t += dt) {
        s.t.push_back(t);
        s.v.push_back(f(t));
    }
    return s;
}

}  // namespace

TEST_CASE("exponential fit recovers C and eps")
{
    const Series s = make("gap", [](double t) { return 2 * std::exp(-0.3 * t); });
    const RateFit f = fit_exponential(s, 1);
    CHECK(f.C == doctest::Approx(2).epsilon(1e-10));
    CHECK(f.eps == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(f.residual < 1e-10);
}

TEST_CASE("noise floor: values below it are skipped, all-below counts as converged")
{
    const Series s = make("gap", [](double t) { return t < 3 ? std::exp(-2 * t) : 1e-14; });
    const RateFit f = fit_exponential(s, 1, 1e-10);
    CHECK(f.eps == doctest::Approx(2).epsilon(1e-8));
    const Series z = make("gap", [](double) { return 0.0; });
    CHECK(fit_exponential(z, 1, 1e-10).converged);
}

TEST_CASE("envelope fit and constant")
{
    const Series s = make("sup_phi", [](double t) { return 0.7 * (1 + t) * std::exp(-t); });
    CHECK(fit_envelope(s, 1).C == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(envelope_constant(s, RateModel::potential_envelope) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("potential decay verdict")
{
    CHECK(potential_decay(make("sup_phi", [](double t) { return 0.7 * (1 + t) * std::exp(-t); })).pass);
    CHECK(!potential_decay(make("sup_phi", [](double t) { return 0.1 * std::exp(0.2 * t); })).pass);
}

TEST_CASE("trace-gap verdict uses the minimum rate")
{
    const Series fast = make("gap_tilde", [](double t) { return std::exp(-0.5 * t); });
    const Series slow = make("gap_omega", [](double t) { return std::exp(-0.05 * t); });
    CHECK(trace_gaps(fast, fast).pass);
    CHECK(!trace_gaps(fast, slow).pass);
}

TEST_CASE("all_verdicts needs sup_phi")
{
    bool thrown = false;
    try {
        all_verdicts({});
    } catch (const Error& e) {
        thrown = e.code() == ErrorCode::missing_series;
    }
    CHECK(thrown);
}

TEST_CASE("series of the zero-data reduced flow")
{
    Surface s = default_surface();
    ReducedFlow f = ReducedFlow::from_function(s, 32, [](double) { return 0.0; });
    Trajectory tr{s, SolverKind::reduced, 0, 0, f.run({0, 0.5, 1, 1.5, 2})};
    const auto series = compute_series(tr);
    for (double v : series.at("gap_tilde").v) CHECK(v < 1e-12);
    for (double v : series.at("volume_ratio_min").v) CHECK(v == doctest::Approx(1).epsilon(1e-12));
    const auto& sp = series.at("sup_phi");
    for (std::size_t i = 0; i < sp.t.size(); ++i)
        CHECK(sp.v[i] == doctest::Approx(std::abs(constant_mode_value(SurfaceKind::sm, sp.t[i]))).epsilon(1e-6));
    // R of the explicit solution: -g^{2 2bar} / (4 y^2) = -1 / (1 + 3 e^{-t})
    const auto& rmin = series.at("R_min");
    for (std::size_t i = 0; i < rmin.t.size(); ++i)
        CHECK(rmin.v[i] == doctest::Approx(-1 / (1 + 3 * std::exp(-rmin.t[i]))).epsilon(1e-6));
}

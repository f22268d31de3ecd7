// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "inoue/config.hpp"
#include "inoue/diagnostics.hpp"
#include "inoue/expr.hpp"
#include "inoue/flow.hpp"
#include "inoue/gh.hpp"
#include "inoue/pipeline.hpp"
#include "inoue/reference.hpp"
#include "inoue/verify.hpp"

using namespace inoue;
namespace fs = std::filesystem;

namespace {

int failures = 0;
// criterion 10 comes out of the criterion 8 run but is printed in order
std::pair<bool, std::string> deferred10;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, bool pass, const std::string& what)
{
    std::printf("criterion %2d %s %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Surface splus_test() { return Surface(construct_splus({{{1, 1}, {1, 2}}}, 0, 0, 1, cplx(0, 1))); }

// x^3 - 5x^2 - 1: long enough period for rho = 0.1 cos(2 pi u / L) to be admissible
Surface perturbed_surface() { return Surface(construct_sm({{{0, 0, 1}, {1, 0, 0}, {0, 1, 5}}})); }

// worst check in a list, and whether all passed
std::pair<bool, double> worst(const std::vector<CheckResult>& v)
{
    bool ok = !v.empty();
    double w = 0;
    for (const auto& c : v) {
        ok = ok && c.pass;
        w = std::max(w, c.value);
    }
    return {ok, w};
}

void criterion1()
{
    const auto t0 = std::chrono::steady_clock::now();
    VerifyOptions o;
    o.points = 100;
    o.times = {0, 1, 5};
    auto [ok, w] = worst(check_closed_forms(default_surface(), o));
    const double s = seconds_since(t0);
    report(1, ok && s < 10, fmt("Tricerri closed forms at 100 points, t in {0,1,5}: max rel err %.3g (tol 1e-7), %.2f s (limit 10 s)", w, s));
}

void criterion2()
{
    VerifyOptions o;
    auto [ok, w] = worst(check_parallel_tensors(default_surface(), o));
    report(2, ok, fmt("|nabla Rm|, |dbar dbar T|, |nabla dbar T| on the Tricerri family: max %.3g (tol 1e-6)", w));
}

void criterion3()
{
    VerifyOptions o;
    const CheckResult a = check_ricci_identity(default_surface(), o), b = check_ricci_identity(splus_test(), o);
    report(3, a.pass && b.pass, fmt("Ric(w_T) + alpha: %.3g, Ric(w_V) + alpha': %.3g at 100 points (tol 1e-6)", a.value, b.value));
}

void criterion4()
{
    VerifyOptions o;
    o.residual_points = 50;
    o.residual_times = {0, 1, 3, 6};
    const CheckResult a = check_explicit_residual(default_surface(), o), b = check_explicit_residual(splus_test(), o);
    report(4, a.pass && b.pass,
           fmt("explicit-solution residual, 50 points x t in {0,1,3,6}: S_M %.3g, S+ %.3g (tol 1e-6)", a.value, b.value));
}

void criterion5()
{
    VerifyOptions o;
    o.flat_metrics = 5;
    const auto a = check_flattening(default_surface(), o), b = check_flattening(splus_test(), o);
    const bool ok = a[0].pass && a[1].pass && b[0].pass && b[1].pass;
    report(5, ok,
           fmt("flattening of 5 random invariant metrics: |c-1| %.3g / %.3g (tol 1e-8), idempotence %.3g / %.3g (tol 1e-10) on S_M / S+",
               a[0].value, b[0].value, a[1].value, b[1].value));
}

void criterion6()
{
    const Surface s = splus_test();
    const auto consts = check_splus_constants(s);
    VerifyOptions o;
    o.points = 100;
    const CheckResult inv = check_form_invariance(s, o);
    report(6, consts[0].pass && inv.pass,
           fmt("S+ (c1,c2) residual %.3g (tol 1e-12); alpha', gamma invariance under f0..f3: %.3g (tol 1e-9); group relations %.3g",
               consts[0].value, inv.value, consts[1].value));
}

void criterion7()
{
    const Surface s = default_surface();
    const auto t0 = std::chrono::steady_clock::now();
    ReducedFlow f = ReducedFlow::from_function(s, 256, [](double) { return 0.0; });
    const std::vector<double> times{1, 2, 4, 8};
    const auto ode = constant_mode_ode(SurfaceKind::sm, times);
    double err = 0, merr = 0;
    const auto pts = sample_domain(s, 100, 21);
    for (std::size_t k = 0; k < times.size(); ++k) {
        f.advance_to(times[k]);
        for (double v : f.phi()) err = std::max(err, std::abs(v - ode[k]));
        const MetricField g = f.metric(), e = explicit_solution(s, times[k]);
        for (const Point& p : pts) {
            const Metric2 a = g(p), b = e(p);
            merr = std::max({merr, std::abs(a.g11 - b.g11), std::abs(a.g12 - b.g12), std::abs(a.g22 - b.g22)});
        }
    }
    const double sec = seconds_since(t0);
    report(7, err < 1e-6 && merr < 1e-6 && sec < 30,
           fmt("reduced zero data, n = 256 to t = 8: |phi - ODE| %.3g, metric vs explicit %.3g (tol 1e-6), %.2f s (limit 30 s)",
               err, merr, sec));
}

const Verdict* find(const std::vector<Verdict>& vs, const std::string& name)
{
    for (const auto& v : vs)
        if (v.name == name) return &v;
    return nullptr;
}

double value(const Verdict* v, const std::string& key)
{
    if (!v) return NAN;
    for (const auto& [k, x] : v->values)
        if (k == key) return x;
    return NAN;
}

void criteria8and10()
{
    const Surface s = perturbed_surface();
    const double L = s.period();
    const auto t0 = std::chrono::steady_clock::now();
    ReducedFlow f = ReducedFlow::from_function(
        s, 256, [L](double u) { return 0.1 * std::cos(2 * std::numbers::pi * u / L); });
    std::vector<double> times;
    for (int k = 0; k <= 32; ++k) times.push_back(0.25 * k);
    Trajectory tr{s, SolverKind::reduced, 0, 0, f.run(times)};
    const auto series = compute_series(tr);
    const auto verdicts = all_verdicts(series);
    const double sec = seconds_since(t0);

    const Verdict *pd = find(verdicts, "potential_decay"), *gaps = find(verdicts, "trace_gaps"),
                  *phid = find(verdicts, "phidot_bound"), *vol = find(verdicts, "volume_ratio"),
                  *curv = find(verdicts, "scalar_curvature_bounds");
    const bool ok8 = pd && gaps && phid && vol && pd->pass && gaps->pass && phid->pass && vol->pass && sec < 60;
    report(8, ok8,
           fmt("perturbed reduced run on x^3-5x^2-1 (L = %.4f): C_env %.3g vs first half %.3g, C_fit %.3g vs %.3g (factor 2); "
               "eps %.3g / %.3g (min 0.1, inf = below noise floor); sup|phidot|(t>=1) %.3g (<= 10); volume ratio [%.4g, %.4g] "
               "(within [0.1, 10]); %.2f s (limit 60 s)",
               L, value(pd, "C_envelope"), value(pd, "C_envelope_first_half"), value(pd, "C_fit"),
               value(pd, "C_fit_first_half"), value(gaps, "eps_tilde"), value(gaps, "eps_omega"),
               value(phid, "max_sup_phidot"), value(vol, "min_ratio"), value(vol, "max_ratio"), sec));

    const auto& rmin = series.at("R_min");
    const auto& rmax = series.at("R_max");
    bool ok10 = curv != nullptr;
    double lo = 1e300, hi_ratio = -1e300;
    for (std::size_t i = 0; i < rmin.t.size(); ++i) {
        lo = std::min(lo, rmin.v[i]);
        hi_ratio = std::max(hi_ratio, rmax.v[i] * std::exp(-rmax.t[i] / 2));
        ok10 = ok10 && rmin.v[i] >= -10 && rmax.v[i] <= 10 * std::exp(rmax.t[i] / 2);
    }
    deferred10 = {ok10, fmt("scalar curvature on the perturbed run: min R %.4g (>= -10), max R e^{-t/2} %.4g (<= 10)", lo, hi_ratio)};
}

void criterion9()
{
    const Surface s = default_surface();
    const auto rho = Expression::parse("0.002*wave(1,0,0) + 0.002*cos(2*pi*u/L)").bind(s);
    const auto t0 = std::chrono::steady_clock::now();
    FullFlow f(s, 12, 12, rho);
    f.advance_to(3.0);
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < f.phi().size(); ++i) {
        const Metric2 g = f.metric_at(3.0, f.phi(), i), r = f.reference_at(3.0, i);
        for (double tr : {trace_against(r, g), trace_against(g, r)}) {
            lo = std::min(lo, tr);
            hi = std::max(hi, tr);
        }
    }
    const double sec = seconds_since(t0);
    const long halvings = f.log().halvings;
    report(9, halvings <= 8 && lo >= 1.7 && hi <= 2.3 && sec < 600,
           fmt("full 12^4 flow, rho = 0.002 wave(1,0,0) + 0.002 cos(2 pi u/L), t = 3: %ld halvings (<= 8), traces in [%.6f, %.6f] "
               "(within [1.7, 2.3]), %ld steps, %.1f s (limit 600 s)",
               halvings, lo, hi, f.log().steps, sec));
}

void criterion11()
{
    const Surface s = default_surface();
    const auto t0 = std::chrono::steady_clock::now();
    const double expected = s.period() / std::sqrt(2.0);
    const double len = circle_length(s, named_metric(s, "alpha"), 256);
    const double rel = std::abs(len - expected) / expected;

    ReducedFlow f = ReducedFlow::from_function(s, 256, [](double) { return 0.0; });
    const GraphLayout q = quotient_layout(s, 12, 12);
    std::vector<double> bound;
    double d0 = 0, d6 = 0;
    for (double t : {0.0, 2.0, 4.0, 6.0}) {
        f.advance_to(t);
        const MetricField g = f.metric();
        if (t == 0) d0 = fiber_diameter(s, g, 24, 1.0);
        if (t == 6) d6 = fiber_diameter(s, g, 24, 1.0);
        bound.push_back(gh_terms(s, weigh(q, g)).bound);
    }
    double rise = 0;
    for (std::size_t k = 1; k < bound.size(); ++k) rise = std::max(rise, bound[k] / bound[k - 1] - 1);
    const double sec = seconds_since(t0);
    report(11, rel < 0.02 && d6 < 0.25 * d0 && rise <= 0.05 && sec < 120,
           fmt("alpha circle %.6f vs L/sqrt2 %.6f (rel %.2g, tol 0.02); fiber diameter 24^3: %.4f -> %.4f (ratio %.3f < 0.25); "
               "gh bound %.4f %.4f %.4f %.4f (max rise %.3g <= 0.05); %.1f s (limit 120 s)",
               len, expected, rel, d0, d6, d6 / d0, bound[0], bound[1], bound[2], bound[3], rise, sec));
}

std::map<std::string, std::string> csv_files(const fs::path& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.path().extension() != ".csv") continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        out[fs::relative(e.path(), dir).string()] = s.str();
    }
    return out;
}

void criterion12()
{
    const fs::path root = fs::temp_directory_path() / "inoue_acceptance_determinism";
    fs::remove_all(root);
    const std::vector<std::string> configs{
        "[flow]\nn = 64\nt_end = 6\ninitial = 0.002*cos(2*pi*u/L)\n[verify]\npoints = 20\nresidual_points = 10\n"
        "[gh]\nfiber_n = 10\nquotient_fiber = 5\nquotient_base = 6\nsamples = 16\n",
        "[run]\nstages = flow, diagnose, gh\n[flow]\nsolver = full\nn_fiber = 4\nn_base = 6\nt_end = 3\nsnapshot_every = 0.1\n"
        "initial = 0.002*wave(1,0,0)\n[gh]\ntimes = 0, 2\nfiber_n = 6\nquotient_fiber = 4\nquotient_base = 6\nsamples = 8\n"};
    bool same = true;
    std::size_t files = 0;
    std::string note;
    for (std::size_t k = 0; k < configs.size(); ++k) {
        std::map<std::string, std::string> ref;
        for (int w : {1, 3}) {
            const auto v = validate_config(configs[k], ".", {"run.workers=" + std::to_string(w)});
            if (!v.ok()) {
                same = false;
                note = v.report();
                break;
            }
            const fs::path dir = root / (std::to_string(k) + "_w" + std::to_string(w));
            const RunManifest m = execute(*v.config, dir.string());
            for (const auto& st : m.stages)
                if (st.status != "ok") {
                    same = false;
                    note = stage_name(st.stage) + ": " + st.message;
                }
            auto got = csv_files(dir);
            if (w == 1) ref = got;
            else same = same && got == ref && !got.empty();
            files += w == 1 ? got.size() : 0;
        }
    }
    report(12, same,
           fmt("reduced and full pipelines with 1 and 3 workers: %zu CSV files byte-identical%s%s", files,
               note.empty() ? "" : "; ", note.c_str()));
}

}  // namespace

int main()
{
    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criteria8and10();
    criterion9();
    report(10, deferred10.first, deferred10.second);
    criterion11();
    criterion12();
    std::printf("%d criteria failed, %.1f s total\n", failures, seconds_since(t0));
    return failures ? 1 : 0;
}

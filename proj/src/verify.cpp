#include "inoue/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "inoue/parallel.hpp"
#include "inoue/reference.hpp"

namespace inoue {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rel(cplx got, cplx want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

double max_abs(const Metric2& m) { return std::max({std::abs(m.g11), std::abs(m.g12), std::abs(m.g22)}); }

// per-point evaluation, reduced by max in index order
template <class F>
std::vector<double> per_point(std::size_t n, int workers, int width, F&& f)
{
    std::vector<double> v(n * width, 0.0);
    parallel_for(n, workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) f(i, &v[i * width]);
    });
    std::vector<double> worst(width, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < width; ++k) worst[k] = std::max(worst[k], v[i * width + k]);
    return worst;
}

std::string times_label(const std::vector<double>& ts)
{
    std::string s = "t in {";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s%g", i ? "," : "", ts[i]);
        s += buf;
    }
    return s + "}";
}

const char* lf_name(const Surface& s) { return s.kind() == SurfaceKind::sm ? "tricerri" : "vaisman"; }
const char* inf_name(const Surface& s) { return s.kind() == SurfaceKind::sm ? "alpha" : "alpha-prime"; }

}  // namespace

CheckResult make_check(std::string name, double value, double tolerance, int points, std::string detail)
{
    CheckResult r;
    r.name = std::move(name);
    r.value = value;
    r.tolerance = tolerance;
    r.points = points;
    r.pass = std::isfinite(value) && value < tolerance;
    r.detail = std::move(detail);
    return r;
}

std::vector<CheckResult> check_closed_forms(const Surface& s, const VerifyOptions& opt)
{
    const auto pts = sample_domain(s, opt.points, opt.seed);
    const bool sm = s.kind() == SurfaceKind::sm;
    const int width = sm ? 5 : 2;
    const std::size_t n = pts.size() * opt.times.size();
    const cplx I(0, 1);
    auto worst = per_point(n, opt.workers, width, [&](std::size_t idx, double* out) {
        const double t = opt.times[idx / pts.size()];
        const Point& p = pts[idx % pts.size()];
        const double y = p.y2;
        ChernPackage pk = chern_package(explicit_solution(s, t), p, ChernLevel::curvature, opt.diff);
        if (sm) {
            const double et = std::exp(-t);
            out[0] = rel(pk.Gamma(0, 1, 0), -I / (2 * y));
            out[1] = rel(pk.Gamma(1, 1, 1), I / y);
            out[2] = rel(pk.T(0, 0, 1), I / (2 * y));
            out[3] = rel(pk.R(1, 1, 1, 1), -(1 + 3 * et) / (8 * y * y * y * y));
            out[4] = rel(pk.R(1, 1, 0, 0), et / (4 * y));
        } else {
            const double d = 1 + std::exp(t);
            out[0] = rel(pk.Gamma(1, 0, 0), I * y / d);
            out[1] = rel(pk.T(1, 0, 1), I * s.splus().m_slope / d);
        }
    });
    const int np = static_cast<int>(n);
    const std::string tl = times_label(opt.times);
    if (sm)
        return {make_check("christoffel_1_21", worst[0], 1e-7, np, "-i/(2 y2), " + tl),
                make_check("christoffel_2_22", worst[1], 1e-7, np, "i/y2, " + tl),
                make_check("torsion_1_12", worst[2], 1e-7, np, "i/(2 y2), " + tl),
                make_check("curvature_22_22", worst[3], 1e-7, np, "-(1+3e^-t)/(8 y2^4), " + tl),
                make_check("curvature_22_11", worst[4], 1e-7, np, "e^-t/(4 y2), " + tl)};
    return {make_check("christoffel_2_11", worst[0], 1e-7, np, "i y2/(1+e^t), " + tl),
            make_check("torsion_2_12", worst[1], 1e-7, np, "i m/(1+e^t), " + tl)};
}

std::vector<CheckResult> check_parallel_tensors(const Surface& s, const VerifyOptions& opt)
{
    if (s.kind() != SurfaceKind::sm) return {};
    const auto pts = sample_domain(s, opt.points, opt.seed);
    const std::size_t n = pts.size() * opt.times.size();
    auto worst = per_point(n, opt.workers, 3, [&](std::size_t idx, double* out) {
        const double t = opt.times[idx / pts.size()];
        ChernPackage pk = chern_package(explicit_solution(s, t), pts[idx % pts.size()], ChernLevel::full, opt.diff);
        TensorNorms nm = tensor_norms(pk);
        out[0] = nm.nabla_rm;
        out[1] = nm.dbar_dbar_torsion;
        out[2] = nm.nabla_dbar_torsion;
    });
    const int np = static_cast<int>(n);
    return {make_check("nabla_rm", worst[0], 1e-6, np, "|nabla Rm|_g"),
            make_check("dbar_dbar_torsion", worst[1], 1e-6, np, "|dbar dbar T|_g"),
            make_check("nabla_dbar_torsion", worst[2], 1e-6, np, "|nabla dbar T|_g")};
}

std::vector<CheckResult> check_symmetries(const Surface& s, const VerifyOptions& opt)
{
    const auto pts = sample_domain(s, opt.points, opt.seed + 1);
    const std::size_t n = pts.size() * opt.times.size();
    auto worst = per_point(n, opt.workers, 3, [&](std::size_t idx, double* out) {
        const double t = opt.times[idx / pts.size()];
        ChernPackage pk = chern_package(explicit_solution(s, t), pts[idx % pts.size()], ChernLevel::curvature, opt.diff);
        double anti = 0, herm = 0, scale = 0;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) anti = std::max(anti, std::abs(pk.T(k, i, j) + pk.T(k, j, i)));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) {
                        herm = std::max(herm, std::abs(pk.R(i, j, k, l) - std::conj(pk.R(j, i, l, k))));
                        scale = std::max(scale, std::abs(pk.R(i, j, k, l)));
                    }
        Metric2 d = pk.ricci - pk.ricci_from_curvature;
        out[0] = anti;
        out[1] = herm / std::max(scale, 1.0);
        out[2] = max_abs(d);
    });
    const int np = static_cast<int>(n);
    return {make_check("torsion_antisymmetry", worst[0], 1e-12, np),
            make_check("curvature_hermitian_symmetry", worst[1], 1e-12, np),
            make_check("ricci_cross_check", worst[2], 1e-7, np, "-ddbar log det g vs contracted curvature")};
}

CheckResult check_ricci_identity(const Surface& s, const VerifyOptions& opt)
{
    const auto pts = sample_domain(s, opt.points, opt.seed + 2);
    const MetricField lf = named_metric(s, lf_name(s)), inf = named_metric(s, inf_name(s));
    auto worst = per_point(pts.size(), opt.workers, 1, [&](std::size_t i, double* out) {
        RicciResult r = chern_ricci(lf, pts[i], opt.diff);
        out[0] = max_abs(r.form + inf(pts[i]));
    });
    return make_check("ricci_identity", worst[0], 1e-6, int(pts.size()),
                      std::string("Ric(") + lf_name(s) + ") = -" + inf_name(s));
}

CheckResult check_volume_form(const Surface& s, const VerifyOptions& opt)
{
    const auto pts = sample_domain(s, opt.points, opt.seed + 3);
    const MetricField lf = named_metric(s, lf_name(s)), inf = named_metric(s, inf_name(s));
    const VolumeDensity vol = volume_density(s, lf, pts);
    const ScalarField lc = vol.log_coefficient();
    auto worst = per_point(pts.size(), opt.workers, 1, [&](std::size_t i, double* out) {
        out[0] = max_abs(ddbar(lc, pts[i], opt.diff) - inf(pts[i]));
    });
    return make_check("volume_form_ddbar", worst[0], 1e-6, int(pts.size()),
                      std::string("ddbar log Omega = ") + inf_name(s));
}

CheckResult check_explicit_residual(const Surface& s, const VerifyOptions& opt)
{
    const auto pts = sample_domain(s, opt.residual_points, opt.seed + 4);
    const std::size_t n = pts.size() * opt.residual_times.size();
    auto worst = per_point(n, opt.workers, 1, [&](std::size_t idx, double* out) {
        const double t = opt.residual_times[idx / pts.size()];
        const Point& p = pts[idx % pts.size()];
        const MetricField w = explicit_solution(s, t);
        RicciResult r = chern_ricci(w, p, opt.diff);
        out[0] = max_abs(explicit_solution_dt(s, t)(p) + r.form + w(p));
    });
    return make_check("explicit_residual", worst[0], 1e-6, int(n),
                      "d/dt omega + Ric(omega) + omega, " + times_label(opt.residual_times));
}

std::vector<CheckResult> check_flattening(const Surface& s, const VerifyOptions& opt)
{
    const auto pts = sample_domain(s, opt.points, opt.seed + 5);
    double c_err = 0, idem = 0;
    std::string note;
    for (int k = 0; k < opt.flat_metrics; ++k) {
        const MetricField g = invariant_test_metric(s, opt.seed + 100 + k);
        const Flattening f1 = conformal_flatten(s, g);
        try {
            c_err = std::max(c_err, std::abs(is_strongly_flat(s, f1.omega_lf, pts, 1e-8) - 1));
        } catch (const Error& e) {
            c_err = kInf;
            note = e.what();
        }
        const Flattening f2 = conformal_flatten(s, f1.omega_lf);
        for (const Point& p : pts) {
            const Metric2 a = f1.omega_lf(p), b = f2.omega_lf(p);
            idem = std::max(idem, max_abs(a - b) / max_abs(a));
        }
    }
    const int np = static_cast<int>(pts.size()) * opt.flat_metrics;
    return {make_check("flatten_constant", c_err, 1e-8, np, note.empty() ? "|c - 1|" : note),
            make_check("flatten_idempotent", idem, 1e-10, np)};
}

CheckResult check_form_invariance(const Surface& s, const VerifyOptions& opt)
{
    const auto pts = sample_domain(s, opt.points, opt.seed + 6);
    const bool sm = s.kind() == SurfaceKind::sm;
    const std::vector<std::string> names = sm ? std::vector<std::string>{"alpha", "beta", "tricerri"}
                                              : std::vector<std::string>{"alpha-prime", "gamma", "vaisman"};
    double worst = 0;
    for (const auto& name : names) {
        const MetricField f = named_metric(s, name);
        for (int i = 0; i < 4; ++i)
            for (long long e : {1LL, -1LL}) worst = std::max(worst, check_invariance(f, s.element({{i, e}}), pts));
    }
    std::string detail;
    for (const auto& n : names) detail += (detail.empty() ? "" : ", ") + n;
    return make_check("form_invariance", worst, 1e-9, int(pts.size()), detail + " under f0..f3 and inverses");
}

std::vector<CheckResult> check_splus_constants(const Surface& s)
{
    if (s.kind() != SurfaceKind::splus) return {};
    const SPlusData& d = s.splus();
    double res = 0;
    for (int i = 0; i < 2; ++i) {
        const double n1 = double(d.N[i][0]), n2 = double(d.N[i][1]);
        const double e = 0.5 * n1 * (n1 - 1) * d.a[0] * d.b[0] + 0.5 * n2 * (n2 - 1) * d.a[1] * d.b[1] +
                         n1 * n2 * d.b[0] * d.a[1];
        const double lhs = d.c[i] - (double(d.N[i][0]) * d.c[0] + double(d.N[i][1]) * d.c[1]);
        const double rhs = e + d.kappa * double(i == 0 ? d.p : d.q);
        res = std::max(res, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    double rel_defect = 0;
    const AffineMap f0 = s.generator(0);
    for (int i = 0; i < 2; ++i) {
        const AffineMap lhs = f0.inverse().then(s.generator(i + 1)).then(f0);
        const AffineMap rhs = s.element({{3, i == 0 ? d.p : d.q}, {2, d.N[i][1]}, {1, d.N[i][0]}}).map;
        rel_defect = std::max({rel_defect, std::abs(lhs.a - rhs.a), std::abs(lhs.b - rhs.b), std::abs(lhs.c - rhs.c),
                               std::abs(lhs.d - rhs.d), std::abs(lhs.e - rhs.e)});
    }
    return {make_check("splus_constants_residual", res, 1e-12, 2, "(I - N) c = e + kappa (p, q)"),
            make_check("splus_group_relations", rel_defect, 1e-9, 2, "f0 f_i f0^-1 = f1^n_i1 f2^n_i2 f3^p_i")};
}

std::vector<CheckResult> verify_tensors(const Surface& s, const VerifyOptions& opt)
{
    std::vector<CheckResult> out;
    auto add = [&](std::vector<CheckResult> v) { out.insert(out.end(), v.begin(), v.end()); };
    add(check_closed_forms(s, opt));
    add(check_parallel_tensors(s, opt));
    add(check_symmetries(s, opt));
    out.push_back(check_ricci_identity(s, opt));
    out.push_back(check_volume_form(s, opt));
    out.push_back(check_explicit_residual(s, opt));
    add(check_flattening(s, opt));
    out.push_back(check_form_invariance(s, opt));
    add(check_splus_constants(s));
    return out;
}

}  // namespace inoue

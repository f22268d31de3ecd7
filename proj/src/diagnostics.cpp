#include "inoue/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "inoue/calculus.hpp"

namespace inoue {

void Series::validate() const
{
    if (t.size() != v.size()) fail(ErrorCode::invalid_argument, "series '" + label + "': length mismatch");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(v[i]))
            fail(ErrorCode::invalid_argument, "series '" + label + "': non-finite entry");
        if (i > 0 && !(t[i] > t[i - 1]))
            fail(ErrorCode::invalid_argument, "series '" + label + "': times not strictly increasing");
    }
}

std::string rate_model_name(RateModel m)
{
    switch (m) {
    case RateModel::exponential: return "C*exp(-eps*t)";
    case RateModel::potential_envelope: return "C*(1+t)*exp(-t)";
    case RateModel::half_exponential: return "C*exp(t/2)";
    case RateModel::constant: return "C";
    }
    return "?";
}

RateFit fit_exponential(const Series& s, double t_from, double floor)
{
    s.validate();
    RateFit f;
    f.model = RateModel::exponential;
    std::vector<double> x, y;
    int window = 0;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        if (s.t[i] < t_from) continue;
        ++window;
        if (s.v[i] > floor && s.v[i] > 0) {
            x.push_back(s.t[i]);
            y.push_back(std::log(s.v[i]));
        }
    }
    if (window < 2) fail(ErrorCode::insufficient_data, "series '" + s.label + "': fewer than 2 points in the fit window");
    f.points = static_cast<int>(x.size());
    if (x.empty()) {
        f.converged = true;
        return f;
    }
    if (x.size() == 1) fail(ErrorCode::insufficient_data, "series '" + s.label + "': one point above the noise floor");
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n, my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
    const double slope = sxy / sxx;
    f.eps = -slope;
    f.C = std::exp(my - slope * mx);
    double r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = y[i] - (my + slope * (x[i] - mx));
        r += d * d;
    }
    f.residual = std::sqrt(r / n);
    return f;
}

RateFit fit_envelope(const Series& s, double t_from)
{
    s.validate();
    RateFit f;
    f.model = RateModel::potential_envelope;
    std::vector<double> d;
    for (std::size_t i = 0; i < s.t.size(); ++i)
        if (s.t[i] >= t_from && s.v[i] > 0) d.push_back(std::log(s.v[i]) - std::log1p(s.t[i]) + s.t[i]);
    if (d.size() < 2) fail(ErrorCode::insufficient_data, "series '" + s.label + "': fewer than 2 positive points to fit");
    double m = 0;
    for (double v : d) m += v;
    m /= double(d.size());
    double r = 0;
    for (double v : d) r += (v - m) * (v - m);
    f.C = std::exp(m);
    f.residual = std::sqrt(r / double(d.size()));
    f.points = static_cast<int>(d.size());
    return f;
}

double envelope_constant(const Series& s, RateModel m, double t_max)
{
    s.validate();
    double c = 0;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        if (s.t[i] > t_max) break;
        const double t = s.t[i];
        double scale = 1;
        if (m == RateModel::potential_envelope) scale = (1 + t) * std::exp(-t);
        if (m == RateModel::half_exponential) scale = std::exp(t / 2);
        if (m == RateModel::exponential) fail(ErrorCode::invalid_argument, "envelope_constant needs a fixed-rate model");
        c = std::max(c, s.v[i] / scale);
    }
    return c;
}

// ------------------------------------------------------------------ series

namespace {

Series make_series(const std::string& label) { return Series{label, {}, {}}; }

void push(std::map<std::string, Series>& m, const std::string& label, double t, double v)
{
    auto it = m.find(label);
    if (it == m.end()) it = m.emplace(label, make_series(label)).first;
    it->second.t.push_back(t);
    it->second.v.push_back(v);
}

double sup_abs(const std::vector<double>& v)
{
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

std::map<std::string, Series> compute_series(const Trajectory& traj, const DiagnoseOptions& opt)
{
    if (traj.snapshots.empty()) fail(ErrorCode::insufficient_data, "trajectory has no snapshots");
    std::map<std::string, Series> out;
    const Surface& s = traj.surface;
    const double L = s.period();

    if (traj.solver == SolverKind::reduced) {
        // one fiber position for all sample points; the reduced metric is fiber-invariant
        const Point fib = sample_domain(s, 1, opt.seed).front();
        const int stride = std::max(1, opt.node_stride);
        for (const Snapshot& sn : traj.snapshots) {
            const int n = static_cast<int>(sn.phi.size());
            const MetricField g = reduced_metric(s, sn.t, sn.phi);
            const MetricField ref = form_field(s, FormKind::omega_tilde, sn.t);
            double gap1 = 0, gap2 = 0, vmin = 1e300, vmax = 0, rmin = 1e300, rmax = -1e300, cal = 0, grad = 0;
            std::vector<double> u(n);
            for (int i = 0; i < n; ++i) u[i] = sn.phi[i] + sn.phidot[i];
            const double h = L / n;
            for (int i = 0; i < n; i += stride) {
                const Point p{fib.x1, fib.y1, fib.x2, std::exp(i * h)};
                const Metric2 gv = g(p), rv = ref(p);
                gap1 = std::max(gap1, std::abs(trace_against(gv, rv) - 2));
                gap2 = std::max(gap2, std::abs(trace_against(rv, gv) - 2));
                const double vr = det(gv).real() / det(rv).real();
                vmin = std::min(vmin, vr);
                vmax = std::max(vmax, vr);
                const ChernPackage pk = chern_package(g, p, ChernLevel::curvature);
                const ChernPackage pr = chern_package(ref, p, ChernLevel::connection);
                rmin = std::min(rmin, pk.scalar);
                rmax = std::max(rmax, pk.scalar);
                cal = std::max(cal, calabi_quantity(pk, pr));
                // |du|^2_g = g^{i jbar} d_i u d_jbar u with u = u(y2): d_{z2} u = -(i/2) u_y
                const double uy = (u[(i + 1) % n] - u[(i + n - 1) % n]) / (2 * h) / p.y2;
                grad = std::max(grad, gv.g11.real() / det(gv).real() * 0.25 * uy * uy);
            }
            push(out, "sup_phi", sn.t, sup_abs(sn.phi));
            push(out, "sup_phidot", sn.t, sup_abs(sn.phidot));
            push(out, "sup_u", sn.t, sup_abs(u));
            push(out, "gap_tilde", sn.t, gap1);
            push(out, "gap_omega", sn.t, gap2);
            push(out, "volume_ratio_min", sn.t, vmin);
            push(out, "volume_ratio_max", sn.t, vmax);
            push(out, "R_min", sn.t, rmin);
            push(out, "R_max", sn.t, rmax);
            push(out, "calabi_S", sn.t, cal);
            push(out, "sup_grad_u", sn.t, grad);
        }
    } else {
        FullFlow probe(s, traj.n_fiber, traj.n_base, [](const Point&) { return 0.0; });
        const std::size_t n = probe.grid().size();
        for (const Snapshot& sn : traj.snapshots) {
            if (sn.phi.size() != n) fail(ErrorCode::invalid_argument, "snapshot size does not match the grid");
            double gap1 = 0, gap2 = 0, vmin = 1e300, vmax = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const Metric2 gv = probe.metric_at(sn.t, sn.phi, i), rv = probe.reference_at(sn.t, i);
                gap1 = std::max(gap1, std::abs(trace_against(gv, rv) - 2));
                gap2 = std::max(gap2, std::abs(trace_against(rv, gv) - 2));
                const double vr = det(gv).real() / det(rv).real();
                vmin = std::min(vmin, vr);
                vmax = std::max(vmax, vr);
            }
            std::vector<double> u(n);
            for (std::size_t i = 0; i < n; ++i) u[i] = sn.phi[i] + sn.phidot[i];
            push(out, "sup_phi", sn.t, sup_abs(sn.phi));
            push(out, "sup_phidot", sn.t, sup_abs(sn.phidot));
            push(out, "sup_u", sn.t, sup_abs(u));
            push(out, "gap_tilde", sn.t, gap1);
            push(out, "gap_omega", sn.t, gap2);
            push(out, "volume_ratio_min", sn.t, vmin);
            push(out, "volume_ratio_max", sn.t, vmax);
        }
    }
    for (auto& [k, v] : out) v.validate();
    return out;
}

// ------------------------------------------------------------------ verdicts

namespace {

void need_points(const Series& s, std::size_t n)
{
    s.validate();
    if (s.t.size() < n)
        fail(ErrorCode::insufficient_data, "series '" + s.label + "' has " + std::to_string(s.t.size()) +
                                               " points, need " + std::to_string(n));
}

bool within_factor(double a, double b, double k) { return a > 0 && b > 0 && a <= k * b && b <= k * a; }

}  // namespace

Verdict potential_decay(const Series& sup_phi, const DiagnoseOptions& opt)
{
    need_points(sup_phi, 8);
    const double t_end = sup_phi.t.back(), t_half = sup_phi.t.front() + 0.5 * (t_end - sup_phi.t.front());
    Series half = sup_phi;
    while (!half.t.empty() && half.t.back() > t_half) half.t.pop_back(), half.v.pop_back();
    const RateFit full = fit_envelope(sup_phi, opt.t_from);
    const RateFit first = fit_envelope(half, opt.t_from);
    const double c_env = envelope_constant(sup_phi, RateModel::potential_envelope);
    const double c_env_half = envelope_constant(half, RateModel::potential_envelope);
    Verdict v;
    v.name = "potential_decay";
    const bool stable_fit = within_factor(full.C, first.C, opt.stability_factor);
    const bool stable_env = within_factor(c_env, c_env_half, opt.stability_factor);
    v.pass = stable_fit && stable_env;
    v.values = {{"C_fit", full.C},          {"C_fit_first_half", first.C}, {"fit_residual", full.residual},
                {"C_envelope", c_env},       {"C_envelope_first_half", c_env_half},
                {"stability_factor", opt.stability_factor}};
    v.note = "sup|phi| <= C (1+t) e^{-t} holds with C = C_envelope at every snapshot; PASS requires the least-squares "
             "and envelope constants of the first half of the window to agree with the full window within the "
             "stability factor";
    return v;
}

Verdict trace_gaps(const Series& gap_tilde, const Series& gap_omega, const DiagnoseOptions& opt)
{
    need_points(gap_tilde, 3);
    need_points(gap_omega, 3);
    const RateFit a = fit_exponential(gap_tilde, opt.t_from, opt.noise_floor);
    const RateFit b = fit_exponential(gap_omega, opt.t_from, opt.noise_floor);
    Verdict v;
    v.name = "trace_gaps";
    auto ok = [&](const RateFit& f) { return f.converged || f.eps >= opt.eps_min; };
    v.pass = ok(a) && ok(b);
    auto eps = [](const RateFit& f) { return f.converged ? std::numeric_limits<double>::infinity() : f.eps; };
    v.values = {{"eps_tilde", eps(a)}, {"C_tilde", a.C}, {"points_tilde", double(a.points)},
                {"eps_omega", eps(b)}, {"C_omega", b.C}, {"points_omega", double(b.points)},
                {"eps_min", opt.eps_min},   {"noise_floor", opt.noise_floor}};
    v.note = "log-linear fit over t >= t_from of gaps above the noise floor; a gap entirely below the floor counts as "
             "converged (eps reported as infinity)";
    return v;
}

Verdict scalar_curvature_bounds(const Series& r_min, const Series& r_max, const DiagnoseOptions& opt)
{
    need_points(r_min, 1);
    need_points(r_max, 1);
    double c0 = 0;
    for (double x : r_min.v) c0 = std::max(c0, -x);
    double c1 = 0;
    for (std::size_t i = 0; i < r_max.t.size(); ++i) c1 = std::max(c1, r_max.v[i] * std::exp(-r_max.t[i] / 2));
    Verdict v;
    v.name = "scalar_curvature_bounds";
    v.pass = c0 <= opt.curvature_C && c1 <= opt.curvature_C;
    v.values = {{"C_lower_fit", c0}, {"C_upper_fit", c1}, {"C_allowed", opt.curvature_C}};
    v.note = "R >= -C_lower_fit and R <= C_upper_fit e^{t/2} at every snapshot";
    return v;
}

Verdict calabi_trend(const Series& s, const DiagnoseOptions&)
{
    need_points(s, 2);
    Verdict v;
    v.name = "calabi_quantity";
    v.informational = true;
    double max_all = 0, at2 = 0, after = 0;
    bool have2 = false;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        max_all = std::max(max_all, s.v[i]);
        if (s.t[i] >= 2 && !have2) at2 = s.v[i], have2 = true;
        if (s.t[i] > 2) after = std::max(after, s.v[i]);
    }
    v.pass = std::isfinite(max_all) && (!have2 || after <= 1.05 * at2 + 1e-12);
    v.values = {{"max_S", max_all}, {"S_at_t2", at2}, {"max_S_after_t2", after}};
    v.note = "informational: S = |Gamma - Gamma~|^2_g should stay bounded with no upward trend after t = 2";
    return v;
}

Verdict u_quantity(const Series& sup_u, const std::optional<Series>& sup_grad_u, const DiagnoseOptions& opt)
{
    need_points(sup_u, 1);
    Verdict v;
    v.name = "u_quantity";
    double m = 0;
    for (double x : sup_u.v) m = std::max(m, x);
    double g = 0;
    if (sup_grad_u) {
        sup_grad_u->validate();
        for (double x : sup_grad_u->v) g = std::max(g, x);
    }
    v.pass = m <= opt.u_bound && g <= opt.u_bound;
    v.values = {{"max_sup_u", m}, {"final_sup_u", sup_u.v.back()}, {"max_sup_grad_u", g}, {"bound", opt.u_bound}};
    v.note = "u = phi + phidot; sup|u| and sup|du|^2_g stay below the bound";
    return v;
}

Verdict phidot_bound(const Series& sup_phidot, const DiagnoseOptions& opt)
{
    need_points(sup_phidot, 1);
    double m = 0;
    for (std::size_t i = 0; i < sup_phidot.t.size(); ++i)
        if (sup_phidot.t[i] >= opt.t_from) m = std::max(m, sup_phidot.v[i]);
    Verdict v;
    v.name = "phidot_bound";
    v.pass = m <= opt.phidot_bound;
    v.values = {{"max_sup_phidot", m}, {"from_t", opt.t_from}, {"bound", opt.phidot_bound}};
    return v;
}

Verdict volume_ratio(const Series& vmin, const Series& vmax, const DiagnoseOptions& opt)
{
    need_points(vmin, 1);
    need_points(vmax, 1);
    const double lo = *std::min_element(vmin.v.begin(), vmin.v.end());
    const double hi = *std::max_element(vmax.v.begin(), vmax.v.end());
    Verdict v;
    v.name = "volume_ratio";
    v.pass = lo >= 1 / opt.volume_C && hi <= opt.volume_C;
    v.values = {{"min_ratio", lo}, {"max_ratio", hi}, {"C", opt.volume_C}};
    v.note = "C^{-1} <= w^2 / w~^2 <= C at every sample";
    return v;
}

std::vector<Verdict> all_verdicts(const std::map<std::string, Series>& series, const DiagnoseOptions& opt)
{
    auto get = [&](const std::string& k) -> const Series& {
        auto it = series.find(k);
        if (it == series.end()) fail(ErrorCode::missing_series, "missing series '" + k + "'");
        return it->second;
    };
    auto has = [&](const std::string& k) { return series.count(k) > 0; };
    std::vector<Verdict> out;
    out.push_back(potential_decay(get("sup_phi"), opt));
    out.push_back(trace_gaps(get("gap_tilde"), get("gap_omega"), opt));
    out.push_back(phidot_bound(get("sup_phidot"), opt));
    out.push_back(volume_ratio(get("volume_ratio_min"), get("volume_ratio_max"), opt));
    if (has("R_min")) out.push_back(scalar_curvature_bounds(get("R_min"), get("R_max"), opt));
    if (has("calabi_S")) out.push_back(calabi_trend(get("calabi_S"), opt));
    std::optional<Series> grad;
    if (has("sup_grad_u")) grad = get("sup_grad_u");
    out.push_back(u_quantity(get("sup_u"), grad, opt));
    return out;
}

}  // namespace inoue

#include "inoue/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "inoue/expr.hpp"
#include "inoue/flow.hpp"
#include "inoue/gh.hpp"
#include "inoue/reference.hpp"
#include "inoue/verify.hpp"

namespace inoue {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json map_json(const AffineMap& m)
{
    return {{"a", cplx_json(m.a)}, {"b", cplx_json(m.b)}, {"c", cplx_json(m.c)}, {"d", m.d}, {"e", m.e}};
}

class Csv {
public:
    explicit Csv(const std::vector<std::string>& header)
    {
        for (std::size_t i = 0; i < header.size(); ++i) s_ += (i ? "," : "") + header[i];
        s_ += '\n';
    }
    Csv& cell(const std::string& v)
    {
        s_ += (first_ ? "" : ",") + v;
        first_ = false;
        return *this;
    }
    Csv& cell(double v) { return cell(format_number(v)); }
    Csv& cell(long long v) { return cell(std::to_string(v)); }
    void end()
    {
        s_ += '\n';
        first_ = true;
    }
    const std::string& str() const { return s_; }

private:
    std::string s_;
    bool first_ = true;
};

struct RunState {
    const RunConfig& cfg;
    fs::path dir;
    std::optional<Surface> surface;
    std::optional<Trajectory> traj;
    std::map<std::string, Series> series;
    // metric at each gh time, in gh.times order
    std::vector<MetricField> gh_metrics;
    std::vector<VerdictRecord> verdicts;
    std::vector<std::string> written;

    void write(const std::string& rel, const std::string& bytes)
    {
        fs::path p = dir / rel;
        fs::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        out << bytes;
        if (!out) fail(ErrorCode::io_error, "cannot write " + p.string());
        if (std::find(written.begin(), written.end(), rel) == written.end()) written.push_back(rel);
    }
};

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* inf_form(const Surface& s) { return s.kind() == SurfaceKind::sm ? "alpha" : "alpha-prime"; }

// ---- stages ----

void run_construct(RunState& st)
{
    const Surface& s = *st.surface;
    json j;
    j["kind"] = s.kind_name();
    j["scale"] = s.scale();
    j["period"] = s.period();
    if (s.kind() == SurfaceKind::sm) {
        const SMData& d = s.sm();
        j["matrix"] = d.M;
        j["lambda"] = d.lambda;
        j["mu"] = cplx_json(d.mu);
        j["ell"] = d.ell;
        json m = json::array();
        for (cplx z : d.m_vec) m.push_back(cplx_json(z));
        j["m"] = m;
    } else {
        const SPlusData& d = s.splus();
        j["n"] = d.N;
        j["alpha"] = d.alpha_ev;
        j["a"] = d.a;
        j["b"] = d.b;
        j["p"] = d.p;
        j["q"] = d.q;
        j["r"] = d.r;
        j["tau"] = cplx_json(d.tau);
        j["c"] = d.c;
        j["e"] = d.e;
        j["m_slope"] = d.m_slope;
        j["kappa"] = d.kappa;
    }
    json gens = json::array();
    for (int i = 0; i < 4; ++i) gens.push_back(map_json(s.generator(i)));
    j["generators"] = gens;
    const auto& dom = s.domain();
    j["domain"] = {{"y2", {dom.y_lo, dom.y_hi}}, {"basis", dom.basis}, {"box_lo", dom.lo}, {"box_hi", dom.hi}};
    st.write("surface.json", j.dump(2) + "\n");
}

void run_verify(RunState& st)
{
    const RunConfig& c = st.cfg;
    VerifyOptions opt;
    opt.points = c.verify.points;
    opt.times = c.verify.times;
    opt.residual_points = c.verify.residual_points;
    opt.residual_times = c.verify.residual_times;
    opt.flat_metrics = c.verify.flat_metrics;
    opt.seed = c.seed;
    opt.workers = c.workers;
    opt.diff.backend = c.verify.backend;
    const auto checks = verify_tensors(*st.surface, opt);

    Csv csv({"check", "value", "tolerance", "points", "pass"});
    json list = json::array();
    bool all = true;
    for (const auto& r : checks) {
        csv.cell(r.name).cell(r.value).cell(r.tolerance).cell((long long)r.points).cell(r.pass ? "1" : "0");
        csv.end();
        list.push_back({{"check", r.name},
                        {"value", number(r.value)},
                        {"tolerance", r.tolerance},
                        {"points", r.points},
                        {"pass", r.pass},
                        {"identity", r.detail}});
        st.verdicts.push_back({"verify-tensors", r.name, r.pass, false});
        all = all && r.pass;
    }
    json j;
    j["surface"] = st.surface->kind_name();
    j["seed"] = c.seed;
    j["backend"] = c.verify.backend == DiffBackend::finite_difference ? "fd"
                   : c.verify.backend == DiffBackend::jet             ? "jet"
                                                                      : "auto";
    j["pass"] = all;
    j["checks"] = list;
    st.write("verify.csv", csv.str());
    st.write("verify.json", j.dump(2) + "\n");
}

std::vector<double> snapshot_times(const RunConfig& c)
{
    std::vector<double> ts;
    const double every = c.flow.snapshot_every, end = c.flow.t_end;
    for (long k = 0;; ++k) {
        const double t = k * every;
        if (t > end + 1e-9) break;
        ts.push_back(std::min(t, end));
    }
    ts.push_back(end);
    if (c.has(Stage::gh)) ts.insert(ts.end(), c.gh.times.begin(), c.gh.times.end());
    std::sort(ts.begin(), ts.end());
    std::vector<double> u;
    for (double t : ts)
        if (u.empty() || t - u.back() > 1e-9) u.push_back(t);
    return u;
}

std::optional<std::size_t> gh_slot(const RunConfig& c, double t)
{
    for (std::size_t i = 0; i < c.gh.times.size(); ++i)
        if (std::abs(c.gh.times[i] - t) <= 1e-9) return i;
    return std::nullopt;
}

void run_flow(RunState& st)
{
    const RunConfig& c = st.cfg;
    const Surface& s = *st.surface;
    const Expression expr = Expression::parse(c.flow.initial);
    const auto rho = expr.bind(s);
    StepOptions opt = c.flow.step;
    opt.workers = c.workers;
    const auto times = snapshot_times(c);

    Trajectory traj{s, c.flow.solver, 0, 0, {}};
    StepLog log;
    st.gh_metrics.assign(c.gh.times.size(), MetricField());
    std::vector<std::vector<Metric2>> nodal;
    std::vector<Point> points;

    const auto t0 = std::chrono::steady_clock::now();
    if (c.flow.solver == SolverKind::reduced) {
        ReducedFlow f = ReducedFlow::from_function(
            s, c.flow.n, [&](double u) { return rho(Point{0, 0, 0, std::exp(u)}); }, opt);
        for (int i = 0; i < f.size(); ++i) points.push_back({0, 0, 0, std::exp(f.node_u(i))});
        for (double t : times) {
            f.advance_to(t);
            traj.snapshots.push_back(f.snapshot());
            const MetricField g = f.metric();
            if (auto k = gh_slot(c, t)) st.gh_metrics[*k] = g;
            std::vector<Metric2> m;
            for (const Point& p : points) m.push_back(g(p));
            nodal.push_back(std::move(m));
        }
        log = f.log();
    } else {
        FullFlow f(s, c.flow.n_fiber, c.flow.n_base, rho, opt);
        traj.n_fiber = c.flow.n_fiber;
        traj.n_base = c.flow.n_base;
        const std::size_t nn = f.phi().size();
        for (std::size_t i = 0; i < nn; ++i) points.push_back(f.grid().point(i));
        for (double t : times) {
            f.advance_to(t);
            traj.snapshots.push_back(f.snapshot());
            if (auto k = gh_slot(c, t)) st.gh_metrics[*k] = f.metric();
            std::vector<Metric2> m(nn);
            for (std::size_t i = 0; i < nn; ++i) m[i] = f.metric_at(t, f.phi(), i);
            nodal.push_back(std::move(m));
        }
        log = f.log();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Csv csv({"t", "node", "x1", "y1", "x2", "y2", "phi", "phidot", "g11", "g12_re", "g12_im", "g22"});
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        const Snapshot& sn = traj.snapshots[k];
        for (std::size_t i = 0; i < sn.phi.size(); ++i) {
            const Point& p = points[i];
            const Metric2& g = nodal[k][i];
            csv.cell(sn.t).cell((long long)i).cell(p.x1).cell(p.y1).cell(p.x2).cell(p.y2).cell(sn.phi[i]);
            csv.cell(sn.phidot[i]).cell(g.g11.real()).cell(g.g12.real()).cell(g.g12.imag()).cell(g.g22.real());
            csv.end();
        }
    }
    st.write("snapshots.csv", csv.str());

    json j;
    j["solver"] = c.flow.solver == SolverKind::reduced ? "reduced" : "full";
    j["surface"] = s.kind_name();
    if (c.flow.solver == SolverKind::reduced) j["grid"] = {{"n", c.flow.n}};
    else j["grid"] = {{"n_fiber", c.flow.n_fiber}, {"n_base", c.flow.n_base}};
    j["initial"] = c.flow.initial;
    j["t_end"] = c.flow.t_end;
    j["snapshot_times"] = times;
    j["integrator"] = integrator_name(opt.integrator);
    j["adaptive"] = opt.adaptive;
    j["steps"] = log.steps;
    j["rhs_evals"] = log.rhs_evals;
    j["rejected_steps"] = log.rejected;
    j["positivity_halvings"] = log.halvings;
    j["max_stages"] = log.max_stages;
    j["last_dt"] = log.last_dt;
    j["seconds"] = seconds;
    st.write("flow.json", j.dump(2) + "\n");
    st.traj = std::move(traj);
}

json verdict_json(const Verdict& v)
{
    json vals = json::object();
    for (const auto& [k, x] : v.values) vals[k] = number(x);
    return {{"name", v.name}, {"pass", v.pass}, {"informational", v.informational}, {"values", vals}, {"note", v.note}};
}

void run_diagnose(RunState& st)
{
    st.series = compute_series(*st.traj, st.cfg.diagnose);
    for (const auto& [label, s] : st.series) {
        Csv csv({"t", "value"});
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            csv.cell(s.t[i]).cell(s.v[i]);
            csv.end();
        }
        st.write("series/" + label + ".csv", csv.str());
    }
    const auto verdicts = all_verdicts(st.series, st.cfg.diagnose);
    json list = json::array();
    for (const auto& v : verdicts) {
        list.push_back(verdict_json(v));
        st.verdicts.push_back({"diagnose", v.name, v.pass, v.informational});
    }
    const auto& d = st.cfg.diagnose;
    json j;
    j["tolerances"] = {{"t_from", d.t_from},           {"noise_floor", d.noise_floor}, {"stability_factor", d.stability_factor},
                       {"eps_min", d.eps_min},         {"curvature_C", d.curvature_C}, {"phidot_bound", d.phidot_bound},
                       {"volume_C", d.volume_C},       {"u_bound", d.u_bound}};
    j["verdicts"] = list;
    st.write("verdicts.json", j.dump(2) + "\n");
}

void run_gh(RunState& st)
{
    const RunConfig& c = st.cfg;
    const Surface& s = *st.surface;
    const auto& g = c.gh;
    const double limit = limit_circle(s).length;
    const double alpha_len = circle_length(s, named_metric(s, inf_form(s)), g.circle_n);
    const GraphLayout quotient = quotient_layout(s, g.quotient_fiber, g.quotient_base);

    Csv csv({"t", "circle_length", "fiber_diameter", "section", "shrink", "stretch", "distortion", "gh_bound"});
    std::vector<double> diam, bound;
    for (std::size_t k = 0; k < g.times.size(); ++k) {
        const MetricField& m = st.gh_metrics[k];
        const double len = circle_length(s, m, g.circle_n);
        const double d = fiber_diameter(s, m, g.fiber_n, 1.0, g.samples, c.seed, c.workers);
        const GhTerms terms = gh_terms(s, weigh(quotient, m, c.workers), g.samples, c.seed, c.workers);
        const double distortion =
            std::max({terms.shrink, terms.stretch, terms.shrink_section, terms.stretch_section});
        csv.cell(g.times[k]).cell(len).cell(d).cell(terms.section).cell(std::max(terms.shrink, terms.shrink_section));
        csv.cell(std::max(terms.stretch, terms.stretch_section)).cell(distortion).cell(terms.bound);
        csv.end();
        diam.push_back(d);
        bound.push_back(terms.bound);
    }
    st.write("gh.csv", csv.str());

    // verdicts on the table
    json verdicts = json::array();
    auto add = [&](const std::string& name, bool pass, bool info, json values, const std::string& note) {
        verdicts.push_back({{"name", name}, {"pass", pass}, {"informational", info}, {"values", values}, {"note", note}});
        st.verdicts.push_back({"gh", name, pass, info});
    };
    const double rel = std::abs(alpha_len - limit) / limit;
    add("circle_length", rel < 0.02, false,
        {{"measured", alpha_len}, {"expected", limit}, {"relative_error", rel}, {"tolerance", 0.02}},
        std::string("length of u in [0, L) under ") + inf_form(s));
    const bool span = g.times.front() <= 1e-12 && g.times.back() >= 6 - 1e-12;
    const double ratio = diam.back() / diam.front();
    add("fiber_collapse", ratio < 0.25, !span, {{"ratio", number(ratio)}, {"tolerance", 0.25}},
        span ? "fiber diameter at the last time over the first" : "needs times from 0 to at least 6; informational");
    double worst = 0;
    for (std::size_t k = 1; k < bound.size(); ++k) worst = std::max(worst, bound[k] / bound[k - 1] - 1);
    add("gh_monotone", worst <= 0.05, false, {{"max_relative_increase", worst}, {"tolerance", 0.05}},
        "gh bound nonincreasing up to 5%");

    json j;
    j["times"] = g.times;
    j["graphs"] = {{"fiber_n", g.fiber_n},
                   {"quotient_fiber", g.quotient_fiber},
                   {"quotient_base", g.quotient_base},
                   {"quotient_wrap_edges", quotient.wrap_edges},
                   {"samples", g.samples},
                   {"circle_n", g.circle_n}};
    j["limit_circle_length"] = limit;
    j["alpha_circle_length"] = alpha_len;
    j["verdicts"] = verdicts;
    st.write("gh.json", j.dump(2) + "\n");
}

std::vector<std::pair<double, double>> read_two_columns(const fs::path& p)
{
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) fail(ErrorCode::io_error, "malformed row in " + p.string());
        rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    return rows;
}

}  // namespace

const char* tool_version() { return kVersion; }

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string RunManifest::json() const
{
    nlohmann::ordered_json j;
    j["tool"] = "inoue";
    j["version"] = version;
    j["config_hash"] = config_hash;
    j["passed"] = passed;
    auto stages_j = nlohmann::ordered_json::array();
    for (const auto& s : stages) {
        nlohmann::ordered_json e{{"stage", stage_name(s.stage)}, {"status", s.status}, {"seconds", s.seconds}};
        if (s.code != ErrorCode::ok) {
            e["error"] = error_name(s.code);
            e["message"] = s.message;
        } else if (!s.message.empty()) {
            e["message"] = s.message;
        }
        stages_j.push_back(e);
    }
    j["stages"] = stages_j;
    auto v = nlohmann::ordered_json::array();
    for (const auto& r : verdicts)
        v.push_back({{"stage", r.stage}, {"name", r.name}, {"pass", r.pass}, {"informational", r.informational}});
    j["verdicts"] = v;
    auto f = nlohmann::ordered_json::array();
    for (const auto& r : files) f.push_back({{"path", r.path}, {"sha256", r.sha256}, {"bytes", r.bytes}});
    j["files"] = f;
    return j.dump(2) + "\n";
}

RunManifest execute(const RunConfig& config, const std::string& out_dir)
{
    RunState st{config, fs::path(out_dir), std::nullopt, std::nullopt, {}, {}, {}, {}};
    fs::create_directories(st.dir);
    RunManifest man;
    man.config_hash = config.hash();
    man.version = kVersion;
    man.out_dir = out_dir;
    st.write("config.resolved.ini", config.canonical());

    bool failed[kStageCount] = {};
    for (Stage stage : config.stages) {
        StageRecord rec;
        rec.stage = stage;
        const bool needs_flow = stage == Stage::diagnose || stage == Stage::gh;
        const bool blocked = (stage != Stage::construct && failed[int(Stage::construct)]) ||
                             (needs_flow && failed[int(Stage::flow)]);
        if (blocked) {
            rec.status = "skipped";
            rec.message = "a required stage failed";
            failed[int(stage)] = true;
            man.stages.push_back(rec);
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        try {
            switch (stage) {
            case Stage::construct:
                st.surface = config.surface.build();
                run_construct(st);
                break;
            case Stage::verify_tensors: run_verify(st); break;
            case Stage::flow: run_flow(st); break;
            case Stage::diagnose: run_diagnose(st); break;
            case Stage::gh: run_gh(st); break;
            }
            rec.status = "ok";
        } catch (const Error& e) {
            rec.status = "error";
            rec.code = e.code();
            rec.message = e.what();
        } catch (const std::exception& e) {
            rec.status = "error";
            rec.code = ErrorCode::internal;
            rec.message = e.what();
        }
        failed[int(stage)] = rec.status != "ok";
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        man.stages.push_back(rec);
    }
    bool plot_ok = true;
    if (config.has(Stage::diagnose) || config.has(Stage::gh)) {
        try {
            const std::string rel = "plot_data.csv";
            if (fs::exists(st.dir / "series") || fs::exists(st.dir / "gh.csv")) {
                emit_plot_data(out_dir, config.diagnose);
                st.written.push_back(rel);
            }
        } catch (const Error&) {
            plot_ok = false;
        }
    }

    man.verdicts = st.verdicts;
    man.passed = plot_ok;
    for (const auto& s : man.stages) man.passed = man.passed && s.status == "ok";
    for (const auto& v : man.verdicts) man.passed = man.passed && (v.pass || v.informational);

    std::sort(st.written.begin(), st.written.end());
    for (const auto& rel : st.written) {
        const std::string bytes = read_file(st.dir / rel);
        man.files.push_back({rel, sha256_hex(bytes), bytes.size()});
    }
    std::ofstream(st.dir / "manifest.json", std::ios::binary) << man.json();
    return man;
}

std::string emit_plot_data(const std::string& run_dir, const DiagnoseOptions& opt)
{
    const fs::path dir(run_dir);
    std::vector<fs::path> files;
    if (fs::is_directory(dir / "series"))
        for (const auto& e : fs::directory_iterator(dir / "series"))
            if (e.path().extension() == ".csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    const bool gh = fs::is_regular_file(dir / "gh.csv");
    if (files.empty() && !gh) fail(ErrorCode::missing_series, "no series/*.csv or gh.csv under " + run_dir);

    Csv csv({"quantity", "t", "value", "fit_value"});
    for (const auto& p : files) {
        Series s;
        s.label = p.stem().string();
        for (auto [t, v] : read_two_columns(p)) {
            s.t.push_back(t);
            s.v.push_back(v);
        }
        std::function<double(double)> fit;
        if (s.label == "sup_phi") {
            const RateFit f = fit_envelope(s, opt.t_from);
            if (f.points > 0) fit = [C = f.C](double t) { return C * (1 + t) * std::exp(-t); };
        } else if (s.label == "gap_tilde" || s.label == "gap_omega") {
            const RateFit f = fit_exponential(s, opt.t_from, opt.noise_floor);
            if (f.points > 1 && !f.converged) fit = [C = f.C, e = f.eps](double t) { return C * std::exp(-e * t); };
        }
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            csv.cell(s.label).cell(s.t[i]).cell(s.v[i]);
            if (fit && s.t[i] >= opt.t_from) csv.cell(fit(s.t[i]));
            else csv.cell(std::string());
            csv.end();
        }
    }
    if (gh) {
        std::ifstream in(dir / "gh.csv");
        std::string line;
        std::getline(in, line);
        std::vector<std::string> head;
        std::stringstream hs(line);
        for (std::string h; std::getline(hs, h, ',');) head.push_back(h);
        std::vector<std::vector<std::string>> rows;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> r;
            std::stringstream ls(line);
            for (std::string x; std::getline(ls, x, ',');) r.push_back(x);
            if (r.size() != head.size()) fail(ErrorCode::io_error, "malformed gh.csv");
            rows.push_back(r);
        }
        for (std::size_t col = 1; col < head.size(); ++col) {
            if (head[col] != "fiber_diameter" && head[col] != "gh_bound" && head[col] != "distortion") continue;
            for (const auto& r : rows) {
                csv.cell(head[col]).cell(r[0]).cell(r[col]).cell(std::string());
                csv.end();
            }
        }
    }
    const fs::path out = dir / "plot_data.csv";
    std::ofstream(out, std::ios::binary) << csv.str();
    return out.string();
}

}  // namespace inoue

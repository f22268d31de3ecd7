#include "inoue/config.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "inoue/expr.hpp"

namespace inoue {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

namespace {

const char* const kStageNames[kStageCount] = {"construct", "verify-tensors", "flow", "diagnose", "gh"};

std::string trim(std::string s)
{
    auto ws = [](unsigned char c) { return std::isspace(c); };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& s, const std::string& seps)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (seps.find(c) != std::string::npos) {
            if (!trim(cur).empty()) out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

bool parse_double(const std::string& s, double& v)
{
    std::istringstream in(s);
    in >> v;
    return in && (in >> std::ws).eof() && std::isfinite(v);
}

bool parse_ll(const std::string& s, long long& v)
{
    std::istringstream in(s);
    in >> v;
    return in && (in >> std::ws).eof();
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
}

// Reads typed keys, collecting every problem instead of stopping.
class Reader {
public:
    Reader(std::map<std::string, std::map<std::string, std::string>> kv, std::vector<Violation>& out)
        : kv_(std::move(kv)), out_(out)
    {
    }

    std::optional<std::string> raw(const std::string& sec, const std::string& key)
    {
        used_.insert(sec + "." + key);
        auto s = kv_.find(sec);
        if (s == kv_.end()) return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end()) return std::nullopt;
        return k->second;
    }

    void bad(const std::string& path, const std::string& msg, ErrorCode code = ErrorCode::schema_violation)
    {
        out_.push_back({path, code, msg});
    }

    void get(const std::string& sec, const std::string& key, std::string& dst)
    {
        if (auto v = raw(sec, key)) dst = *v;
    }

    void get(const std::string& sec, const std::string& key, int& dst, long long lo, long long hi)
    {
        auto v = raw(sec, key);
        if (!v) return;
        long long x = 0;
        if (!parse_ll(*v, x)) return bad(sec + "." + key, "expected an integer, got '" + *v + "'");
        if (x < lo || x > hi)
            return bad(sec + "." + key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        dst = static_cast<int>(x);
    }

    void get(const std::string& sec, const std::string& key, long long& dst)
    {
        auto v = raw(sec, key);
        if (!v) return;
        if (!parse_ll(*v, dst)) bad(sec + "." + key, "expected an integer, got '" + *v + "'");
    }

    void get(const std::string& sec, const std::string& key, std::uint64_t& dst)
    {
        auto v = raw(sec, key);
        if (!v) return;
        long long x = 0;
        if (!parse_ll(*v, x) || x < 0) return bad(sec + "." + key, "expected a nonnegative integer");
        dst = static_cast<std::uint64_t>(x);
    }

    void get(const std::string& sec, const std::string& key, double& dst, double lo, double hi)
    {
        auto v = raw(sec, key);
        if (!v) return;
        double x = 0;
        if (!parse_double(*v, x)) return bad(sec + "." + key, "expected a finite number, got '" + *v + "'");
        if (x < lo || x > hi) return bad(sec + "." + key, "must lie in [" + fmt(lo) + ", " + fmt(hi) + "]");
        dst = x;
    }

    void get(const std::string& sec, const std::string& key, bool& dst)
    {
        auto v = raw(sec, key);
        if (!v) return;
        std::string s = *v;
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        if (s == "true" || s == "yes" || s == "1") dst = true;
        else if (s == "false" || s == "no" || s == "0") dst = false;
        else bad(sec + "." + key, "expected true or false");
    }

    void get(const std::string& sec, const std::string& key, std::vector<double>& dst, double lo, double hi)
    {
        auto v = raw(sec, key);
        if (!v) return;
        std::vector<double> r;
        for (const auto& tok : split(*v, ", \t")) {
            double x = 0;
            if (!parse_double(tok, x)) return bad(sec + "." + key, "bad number '" + tok + "'");
            if (x < lo || x > hi) return bad(sec + "." + key, "entries must lie in [" + fmt(lo) + ", " + fmt(hi) + "]");
            r.push_back(x);
        }
        if (r.empty()) return bad(sec + "." + key, "list is empty");
        for (std::size_t i = 1; i < r.size(); ++i)
            if (!(r[i] > r[i - 1])) return bad(sec + "." + key, "entries must be strictly increasing");
        dst = r;
    }

    // rows separated by ',' or ';', entries by spaces
    template <std::size_t N>
    void get_matrix(const std::string& sec, const std::string& key, std::array<std::array<long long, N>, N>& dst)
    {
        auto v = raw(sec, key);
        if (!v) return;
        auto rows = split(*v, ",;");
        std::array<std::array<long long, N>, N> m{};
        bool okay = rows.size() == N;
        for (std::size_t i = 0; okay && i < N; ++i) {
            auto e = split(rows[i], " \t");
            okay = e.size() == N;
            for (std::size_t j = 0; okay && j < N; ++j) okay = parse_ll(e[j], m[i][j]);
        }
        if (!okay)
            return bad(sec + "." + key, "expected " + std::to_string(N) + " rows of " + std::to_string(N) +
                                            " integers separated by ','");
        dst = m;
    }

    void unknown_keys()
    {
        for (const auto& [sec, keys] : kv_)
            for (const auto& [k, v] : keys)
                if (!used_.count(sec + "." + k)) bad(sec + "." + k, "unknown key");
    }

private:
    std::map<std::string, std::map<std::string, std::string>> kv_;
    std::vector<Violation>& out_;
    std::set<std::string> used_;
};

std::map<std::string, std::map<std::string, std::string>> flatten(const pt::ptree& tree, std::vector<Violation>& out)
{
    std::map<std::string, std::map<std::string, std::string>> kv;
    for (const auto& [sec, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            out.push_back({sec, ErrorCode::schema_violation, "key outside of a section"});
            continue;
        }
        for (const auto& [k, v] : body) kv[sec][k] = trim(v.data());
    }
    return kv;
}

bool read_ini_text(const std::string& text, pt::ptree& tree, const std::string& where, std::vector<Violation>& out)
{
    std::istringstream in(text);
    try {
        pt::ini_parser::read_ini(in, tree);
        return true;
    } catch (const pt::ini_parser_error& e) {
        out.push_back({where, ErrorCode::schema_violation, std::string("INI syntax: ") + e.message() + " (line " +
                                                               std::to_string(e.line()) + ")"});
        return false;
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

std::string stage_name(Stage s) { return kStageNames[static_cast<int>(s)]; }

std::optional<Stage> parse_stage(const std::string& name)
{
    for (int i = 0; i < kStageCount; ++i)
        if (name == kStageNames[i]) return static_cast<Stage>(i);
    return std::nullopt;
}

Surface SurfaceSpec::build() const
{
    if (kind == SurfaceKind::sm) return Surface(construct_sm(matrix));
    return Surface(construct_splus(n, p, q, r, tau));
}

bool RunConfig::has(Stage s) const { return std::find(stages.begin(), stages.end(), s) != stages.end(); }

std::string RunConfig::canonical() const
{
    std::map<std::string, std::string> kv;
    std::string st;
    for (Stage s : stages) st += (st.empty() ? "" : ",") + stage_name(s);
    kv["run.stages"] = st;
    kv["run.seed"] = std::to_string(seed);
    kv["surface.kind"] = surface.kind == SurfaceKind::sm ? "sm" : "splus";
    if (surface.kind == SurfaceKind::sm) {
        std::string m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m += std::to_string(surface.matrix[i][j]) + (j < 2 ? " " : i < 2 ? "," : "");
        kv["surface.matrix"] = m;
    } else {
        kv["surface.n"] = std::to_string(surface.n[0][0]) + " " + std::to_string(surface.n[0][1]) + "," +
                          std::to_string(surface.n[1][0]) + " " + std::to_string(surface.n[1][1]);
        kv["surface.p"] = std::to_string(surface.p);
        kv["surface.q"] = std::to_string(surface.q);
        kv["surface.r"] = std::to_string(surface.r);
        kv["surface.tau"] = surface.tau ? fmt(surface.tau->real()) + " " + fmt(surface.tau->imag()) : "default";
    }
    kv["verify.points"] = std::to_string(verify.points);
    kv["verify.times"] = fmt_list(verify.times);
    kv["verify.residual_points"] = std::to_string(verify.residual_points);
    kv["verify.residual_times"] = fmt_list(verify.residual_times);
    kv["verify.flat_metrics"] = std::to_string(verify.flat_metrics);
    kv["verify.backend"] = verify.backend == DiffBackend::jet                 ? "jet"
                           : verify.backend == DiffBackend::finite_difference ? "fd"
                                                                              : "auto";
    kv["flow.solver"] = flow.solver == SolverKind::reduced ? "reduced" : "full";
    kv["flow.n"] = std::to_string(flow.n);
    kv["flow.n_fiber"] = std::to_string(flow.n_fiber);
    kv["flow.n_base"] = std::to_string(flow.n_base);
    kv["flow.t_end"] = fmt(flow.t_end);
    kv["flow.snapshot_every"] = fmt(flow.snapshot_every);
    kv["flow.initial"] = flow.initial;
    kv["flow.integrator"] = integrator_name(flow.step.integrator);
    kv["flow.dt"] = fmt(flow.step.dt);
    kv["flow.dt_max"] = fmt(flow.step.dt_max);
    kv["flow.adaptive"] = flow.step.adaptive ? "true" : "false";
    kv["flow.rtol"] = fmt(flow.step.rtol);
    kv["flow.atol"] = fmt(flow.step.atol);
    kv["flow.max_halvings"] = std::to_string(flow.step.max_halvings);
    kv["diagnose.t_from"] = fmt(diagnose.t_from);
    kv["diagnose.noise_floor"] = fmt(diagnose.noise_floor);
    kv["diagnose.stability_factor"] = fmt(diagnose.stability_factor);
    kv["diagnose.eps_min"] = fmt(diagnose.eps_min);
    kv["diagnose.curvature_C"] = fmt(diagnose.curvature_C);
    kv["diagnose.phidot_bound"] = fmt(diagnose.phidot_bound);
    kv["diagnose.volume_C"] = fmt(diagnose.volume_C);
    kv["diagnose.u_bound"] = fmt(diagnose.u_bound);
    kv["diagnose.node_stride"] = std::to_string(diagnose.node_stride);
    kv["gh.times"] = fmt_list(gh.times);
    kv["gh.fiber_n"] = std::to_string(gh.fiber_n);
    kv["gh.quotient_fiber"] = std::to_string(gh.quotient_fiber);
    kv["gh.quotient_base"] = std::to_string(gh.quotient_base);
    kv["gh.samples"] = std::to_string(gh.samples);
    kv["gh.circle_n"] = std::to_string(gh.circle_n);
    std::string s;
    for (const auto& [k, v] : kv) s += k + " = " + v + "\n";
    return s;
}

std::string RunConfig::hash() const { return sha256_hex(canonical()); }

ErrorCode Validation::code() const
{
    for (const auto& v : violations)
        if (v.code != ErrorCode::schema_violation) return v.code;
    return ErrorCode::schema_violation;
}

std::string Validation::report() const
{
    std::string s;
    for (const auto& v : violations) s += v.path + ": " + error_name(v.code) + ": " + v.message + "\n";
    return s;
}

Validation validate_config(const std::string& text, const std::string& base_dir, const std::vector<std::string>& overrides)
{
    Validation res;
    auto& out = res.violations;
    pt::ptree tree;
    read_ini_text(text, tree, "config", out);
    for (const auto& o : overrides) {
        auto eq = o.find('=');
        auto dot = o.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
            out.push_back({o, ErrorCode::schema_violation, "override must be section.key=value"});
            continue;
        }
        tree.put(pt::ptree::path_type(trim(o.substr(0, eq)), '.'), trim(o.substr(eq + 1)));
    }

    auto kv = flatten(tree, out);
    // surface file: its [surface] keys are defaults for the inline ones
    if (auto it = kv.find("surface"); it != kv.end() && it->second.count("file")) {
        fs::path p = it->second["file"];
        if (p.is_relative()) p = fs::path(base_dir) / p;
        it->second.erase("file");
        if (!fs::is_regular_file(p)) {
            out.push_back({"surface.file", ErrorCode::schema_violation, "file not found: " + p.string()});
        } else {
            pt::ptree ft;
            std::vector<Violation> fv;
            if (read_ini_text(read_file(p.string()), ft, "surface.file", fv)) {
                auto fkv = flatten(ft, fv);
                for (const auto& [sec, keys] : fkv) {
                    if (sec != "surface") {
                        fv.push_back({"surface.file", ErrorCode::schema_violation, "unexpected section [" + sec + "]"});
                        continue;
                    }
                    for (const auto& [k, v] : keys)
                        if (k != "file") it->second.emplace(k, v);
                }
            }
            out.insert(out.end(), fv.begin(), fv.end());
        }
    }

    RunConfig c;
    Reader r(std::move(kv), out);

    // [run]
    if (auto v = r.raw("run", "stages")) {
        std::vector<Stage> st;
        for (const auto& name : split(*v, ", \t")) {
            if (auto s = parse_stage(name)) st.push_back(*s);
            else r.bad("run.stages", "unknown stage '" + name + "'");
        }
        std::sort(st.begin(), st.end());
        st.erase(std::unique(st.begin(), st.end()), st.end());
        c.stages = st;
    } else {
        c.stages = {Stage::construct, Stage::verify_tensors, Stage::flow, Stage::diagnose, Stage::gh};
    }
    if (!c.has(Stage::construct)) c.stages.insert(c.stages.begin(), Stage::construct);
    if ((c.has(Stage::diagnose) || c.has(Stage::gh)) && !c.has(Stage::flow))
        r.bad("run.stages", "diagnose and gh need the flow stage");
    r.get("run", "out", c.out);
    r.get("run", "seed", c.seed);
    r.get("run", "workers", c.workers, 1, 256);

    // [surface]
    std::string kind = "sm";
    r.get("surface", "kind", kind);
    if (kind == "sm") c.surface.kind = SurfaceKind::sm;
    else if (kind == "splus") c.surface.kind = SurfaceKind::splus;
    else r.bad("surface.kind", "expected sm or splus");
    r.get_matrix("surface", "matrix", c.surface.matrix);
    r.get_matrix("surface", "n", c.surface.n);
    r.get("surface", "p", c.surface.p);
    r.get("surface", "q", c.surface.q);
    r.get("surface", "r", c.surface.r);
    if (auto v = r.raw("surface", "tau")) {
        auto parts = split(*v, ", \t");
        double re = 0, im = 0;
        if (parts.size() != 2 || !parse_double(parts[0], re) || !parse_double(parts[1], im))
            r.bad("surface.tau", "expected 'real imag'");
        else
            c.surface.tau = cplx(re, im);
    }
    if (c.surface.kind == SurfaceKind::sm) {
        for (const char* k : {"n", "p", "q", "r", "tau"})
            if (r.raw("surface", k)) r.bad(std::string("surface.") + k, "only for kind = splus");
    } else if (r.raw("surface", "matrix")) {
        r.bad("surface.matrix", "only for kind = sm");
    }

    // [verify]
    r.get("verify", "points", c.verify.points, 1, 100000);
    r.get("verify", "times", c.verify.times, 0, 1e3);
    r.get("verify", "residual_points", c.verify.residual_points, 1, 100000);
    r.get("verify", "residual_times", c.verify.residual_times, 0, 1e3);
    r.get("verify", "flat_metrics", c.verify.flat_metrics, 1, 1000);
    if (auto v = r.raw("verify", "backend")) {
        if (*v == "auto") c.verify.backend = DiffBackend::automatic;
        else if (*v == "jet") c.verify.backend = DiffBackend::jet;
        else if (*v == "fd") c.verify.backend = DiffBackend::finite_difference;
        else r.bad("verify.backend", "expected auto, jet or fd");
    }

    // [flow]
    if (auto v = r.raw("flow", "solver")) {
        if (*v == "reduced") c.flow.solver = SolverKind::reduced;
        else if (*v == "full") c.flow.solver = SolverKind::full;
        else r.bad("flow.solver", "expected reduced or full");
    }
    r.get("flow", "n", c.flow.n, 8, 1 << 20);
    r.get("flow", "n_fiber", c.flow.n_fiber, 3, 64);
    r.get("flow", "n_base", c.flow.n_base, 3, 256);
    r.get("flow", "t_end", c.flow.t_end, 0, 1e4);
    r.get("flow", "snapshot_every", c.flow.snapshot_every, 1e-6, 1e4);
    r.get("flow", "initial", c.flow.initial);
    if (auto v = r.raw("flow", "integrator")) {
        if (*v == "rkc" || *v == "rk2") c.flow.step.integrator = parse_integrator(*v);
        else r.bad("flow.integrator", "expected rkc or rk2");
    }
    r.get("flow", "dt", c.flow.step.dt, 1e-12, 10);
    r.get("flow", "dt_max", c.flow.step.dt_max, 1e-12, 10);
    r.get("flow", "adaptive", c.flow.step.adaptive);
    r.get("flow", "rtol", c.flow.step.rtol, 1e-15, 1);
    r.get("flow", "atol", c.flow.step.atol, 1e-18, 1);
    r.get("flow", "max_halvings", c.flow.step.max_halvings, 0, 60);
    if (c.flow.step.dt > c.flow.step.dt_max) r.bad("flow.dt", "must not exceed flow.dt_max");

    // [diagnose]
    auto& d = c.diagnose;
    r.get("diagnose", "t_from", d.t_from, 0, 1e4);
    r.get("diagnose", "noise_floor", d.noise_floor, 0, 1);
    r.get("diagnose", "stability_factor", d.stability_factor, 1, 1e6);
    r.get("diagnose", "eps_min", d.eps_min, 0, 100);
    r.get("diagnose", "curvature_C", d.curvature_C, 0, 1e12);
    r.get("diagnose", "phidot_bound", d.phidot_bound, 0, 1e12);
    r.get("diagnose", "volume_C", d.volume_C, 1, 1e12);
    r.get("diagnose", "u_bound", d.u_bound, 0, 1e12);
    r.get("diagnose", "node_stride", d.node_stride, 1, 1 << 20);

    // [gh]
    r.get("gh", "times", c.gh.times, 0, 1e4);
    r.get("gh", "fiber_n", c.gh.fiber_n, 2, 128);
    r.get("gh", "quotient_fiber", c.gh.quotient_fiber, 2, 64);
    r.get("gh", "quotient_base", c.gh.quotient_base, 3, 256);
    r.get("gh", "samples", c.gh.samples, 1, 1 << 20);
    r.get("gh", "circle_n", c.gh.circle_n, 1, 1 << 20);

    r.unknown_keys();

    // cross-field checks
    std::optional<Surface> surface;
    try {
        surface = c.surface.build();
    } catch (const Error& e) {
        out.push_back({"surface", e.code(), e.what()});
    }
    if (c.has(Stage::flow)) {
        if (c.flow.solver == SolverKind::full && c.surface.kind == SurfaceKind::splus)
            r.bad("flow.solver", "the full solver supports kind = sm only");
        if (c.has(Stage::gh) && c.gh.times.back() > c.flow.t_end + 1e-12)
            r.bad("gh.times", "times beyond flow.t_end");
        try {
            Expression e = Expression::parse(c.flow.initial);
            if (c.flow.solver == SolverKind::reduced && e.uses_fiber())
                r.bad("flow.initial", "the reduced solver takes functions of u (or y2) only", ErrorCode::invalid_initial_data);
            else if (surface) {
                double defect = invariance_defect(*surface, e.bind(*surface), 64, c.seed);
                if (!(defect < 1e-8))
                    r.bad("flow.initial", "not Gamma-invariant (defect " + fmt(defect) + ")",
                          ErrorCode::invalid_initial_data);
            }
        } catch (const Error& e) {
            r.bad("flow.initial", e.what(), e.code());
        }
    }
    if (out.empty()) res.config = c;
    return res;
}

Validation validate_config_file(const std::string& path, const std::vector<std::string>& overrides)
{
    if (!fs::is_regular_file(path)) {
        Validation v;
        v.violations.push_back({"config", ErrorCode::io_error, "cannot read " + path});
        return v;
    }
    fs::path base = fs::path(path).parent_path();
    return validate_config(read_file(path), base.empty() ? "." : base.string(), overrides);
}

std::string sha256_hex(const std::string& bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

}  // namespace inoue

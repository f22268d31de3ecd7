#include "inoue/inoue.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <optional>
#include <string>

#include "inoue/calculus.hpp"
#include "inoue/pipeline.hpp"
#include "inoue/reference.hpp"

struct inoue_surface {
    inoue::Surface s;
};

struct inoue_config {
    std::string text, base_dir;
    std::vector<std::string> overrides;
    std::optional<inoue::Stage> only;
    inoue::Validation v;
};

struct inoue_run {
    inoue::RunManifest m;
};

namespace {

thread_local std::string last_error;

inoue_status to_status(inoue::ErrorCode c) { return static_cast<inoue_status>(c); }

template <class F>
inoue_status guard(F&& f)
{
    try {
        last_error.clear();
        return f();
    } catch (const inoue::Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        last_error = e.what();
        return INOUE_INTERNAL;
    } catch (...) {
        last_error = "unknown exception";
        return INOUE_INTERNAL;
    }
}

size_t copy_out(const std::string& s, char* buf, size_t cap)
{
    if (buf && cap > 0) {
        const size_t n = std::min(cap - 1, s.size());
        std::memcpy(buf, s.data(), n);
        buf[n] = '\0';
    }
    return s.size();
}

inoue::Point point(const double x[4]) { return {x[0], x[1], x[2], x[3]}; }

void apply_stage(inoue_config* c)
{
    if (!c->only || !c->v.config) return;
    auto& st = c->v.config->stages;
    const inoue::Stage s = *c->only;
    st = {inoue::Stage::construct};
    if (s == inoue::Stage::diagnose || s == inoue::Stage::gh) st.push_back(inoue::Stage::flow);
    if (s != inoue::Stage::construct) st.push_back(s);
}

inoue_status revalidate(inoue_config* c)
{
    c->v = inoue::validate_config(c->text, c->base_dir, c->overrides);
    apply_stage(c);
    if (c->v.ok()) return INOUE_OK;
    last_error = c->v.report();
    return to_status(c->v.code());
}

}  // namespace

extern "C" {

const char* inoue_version(void) { return inoue::tool_version(); }

const char* inoue_status_name(inoue_status s) { return inoue::error_name(static_cast<inoue::ErrorCode>(s)); }

const char* inoue_last_error(void) { return last_error.c_str(); }

inoue_status inoue_surface_sm(const long long m[9], inoue_surface** out)
{
    return guard([&] {
        if (!m || !out) inoue::fail(inoue::ErrorCode::invalid_argument, "null argument");
        inoue::IntMat3 M{};
        for (int i = 0; i < 9; ++i) M[i / 3][i % 3] = m[i];
        *out = new inoue_surface{inoue::Surface(inoue::construct_sm(M))};
        return INOUE_OK;
    });
}

inoue_status inoue_surface_splus(const long long n[4], long long p, long long q, long long r, int has_tau, double tau_re,
                                 double tau_im, inoue_surface** out)
{
    return guard([&] {
        if (!n || !out) inoue::fail(inoue::ErrorCode::invalid_argument, "null argument");
        inoue::IntMat2 N{{{n[0], n[1]}, {n[2], n[3]}}};
        std::optional<inoue::cplx> tau;
        if (has_tau) tau = inoue::cplx(tau_re, tau_im);
        *out = new inoue_surface{inoue::Surface(inoue::construct_splus(N, p, q, r, tau))};
        return INOUE_OK;
    });
}

void inoue_surface_free(inoue_surface* s) { delete s; }

int inoue_surface_kind(const inoue_surface* s) { return s && s->s.kind() == inoue::SurfaceKind::splus ? 1 : 0; }

double inoue_surface_scale(const inoue_surface* s) { return s ? s->s.scale() : 0; }

double inoue_surface_period(const inoue_surface* s) { return s ? s->s.period() : 0; }

inoue_status inoue_surface_metric(const inoue_surface* s, const char* name, double t, const double x[4], double g[4])
{
    return guard([&] {
        if (!s || !name || !x || !g) inoue::fail(inoue::ErrorCode::invalid_argument, "null argument");
        const inoue::Metric2 m = inoue::named_metric(s->s, name, t)(point(x));
        g[0] = m.g11.real();
        g[1] = m.g12.real();
        g[2] = m.g12.imag();
        g[3] = m.g22.real();
        return INOUE_OK;
    });
}

inoue_status inoue_surface_scalar_curvature(const inoue_surface* s, const char* name, double t, const double x[4],
                                            double* out)
{
    return guard([&] {
        if (!s || !name || !x || !out) inoue::fail(inoue::ErrorCode::invalid_argument, "null argument");
        *out = inoue::chern_package(inoue::named_metric(s->s, name, t), point(x), inoue::ChernLevel::curvature).scalar;
        return INOUE_OK;
    });
}

inoue_status inoue_surface_reduce(const inoue_surface* s, const double x[4], double out[4])
{
    return guard([&] {
        if (!s || !x || !out) inoue::fail(inoue::ErrorCode::invalid_argument, "null argument");
        const inoue::Point p = s->s.reduce(point(x)).first;
        for (int i = 0; i < 4; ++i) out[i] = p[i];
        return INOUE_OK;
    });
}

inoue_status inoue_config_parse(const char* text, const char* base_dir, inoue_config** out)
{
    return guard([&] {
        if (!text || !out) inoue::fail(inoue::ErrorCode::invalid_argument, "null argument");
        *out = new inoue_config{text, base_dir ? base_dir : ".", {}, std::nullopt, {}};
        return revalidate(*out);
    });
}

inoue_status inoue_config_load(const char* path, inoue_config** out)
{
    return guard([&] {
        if (!path || !out) inoue::fail(inoue::ErrorCode::invalid_argument, "null argument");
        namespace fs = std::filesystem;
        if (!fs::is_regular_file(path)) inoue::fail(inoue::ErrorCode::io_error, std::string("cannot read ") + path);
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        const fs::path base = fs::path(path).parent_path();
        *out = new inoue_config{ss.str(), base.empty() ? "." : base.string(), {}, std::nullopt, {}};
        return revalidate(*out);
    });
}

inoue_status inoue_config_override(inoue_config* c, const char* assignment)
{
    return guard([&] {
        if (!c || !assignment) inoue::fail(inoue::ErrorCode::invalid_argument, "null argument");
        c->overrides.push_back(assignment);
        return revalidate(c);
    });
}

void inoue_config_free(inoue_config* c) { delete c; }

int inoue_config_valid(const inoue_config* c) { return c && c->v.ok() ? 1 : 0; }

size_t inoue_config_violation_count(const inoue_config* c) { return c ? c->v.violations.size() : 0; }

size_t inoue_config_violation(const inoue_config* c, size_t i, char* buf, size_t cap)
{
    if (!c || i >= c->v.violations.size()) return copy_out("", buf, cap);
    const auto& v = c->v.violations[i];
    return copy_out(v.path + ": " + inoue::error_name(v.code) + ": " + v.message, buf, cap);
}

size_t inoue_config_hash(const inoue_config* c, char* buf, size_t cap)
{
    return copy_out(c && c->v.ok() ? c->v.config->hash() : "", buf, cap);
}

size_t inoue_config_canonical(const inoue_config* c, char* buf, size_t cap)
{
    return copy_out(c && c->v.ok() ? c->v.config->canonical() : "", buf, cap);
}

size_t inoue_config_out(const inoue_config* c, char* buf, size_t cap)
{
    return copy_out(c && c->v.ok() ? c->v.config->out : "", buf, cap);
}

inoue_status inoue_config_select_stage(inoue_config* c, const char* stage)
{
    return guard([&] {
        if (!c || !stage) inoue::fail(inoue::ErrorCode::invalid_argument, "null argument");
        auto s = inoue::parse_stage(stage);
        if (!s) inoue::fail(inoue::ErrorCode::invalid_argument, std::string("unknown stage '") + stage + "'");
        c->only = s;
        apply_stage(c);
        return c->v.ok() ? INOUE_OK : to_status(c->v.code());
    });
}

inoue_status inoue_execute(const inoue_config* c, const char* out_dir, inoue_run** out)
{
    return guard([&] {
        if (!c || !out) inoue::fail(inoue::ErrorCode::invalid_argument, "null argument");
        if (!c->v.ok()) inoue::fail(c->v.code(), "config is not valid:\n" + c->v.report());
        const std::string dir = out_dir && *out_dir ? out_dir : c->v.config->out;
        *out = new inoue_run{inoue::execute(*c->v.config, dir)};
        return INOUE_OK;
    });
}

void inoue_run_free(inoue_run* r) { delete r; }

int inoue_run_passed(const inoue_run* r) { return r && r->m.passed ? 1 : 0; }

size_t inoue_run_manifest(const inoue_run* r, char* buf, size_t cap) { return copy_out(r ? r->m.json() : "", buf, cap); }

inoue_status inoue_emit_plot_data(const char* run_dir)
{
    return guard([&] {
        if (!run_dir) inoue::fail(inoue::ErrorCode::invalid_argument, "null argument");
        inoue::emit_plot_data(run_dir);
        return INOUE_OK;
    });
}

}  // extern "C"

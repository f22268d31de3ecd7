// inoue: command-line front end over the C API
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "inoue/inoue.h"

namespace {

struct Options {
    std::string config, out, stage;
    int workers = 0;
    long long seed = -1;
    std::vector<std::string> set;
};

std::string fetch(size_t (*f)(const inoue_config*, char*, size_t), const inoue_config* c)
{
    std::string s(f(c, nullptr, 0), '\0');
    f(c, s.data(), s.size() + 1);
    return s;
}

void print_violations(const inoue_config* c)
{
    for (size_t i = 0; i < inoue_config_violation_count(c); ++i) {
        std::string s(inoue_config_violation(c, i, nullptr, 0), '\0');
        inoue_config_violation(c, i, s.data(), s.size() + 1);
        std::fprintf(stderr, "  %s\n", s.c_str());
    }
}

// config from file (or defaults), flag overrides applied
inoue_config* load(const Options& o, int& code)
{
    inoue_config* c = nullptr;
    inoue_status st = o.config.empty() ? inoue_config_parse("", ".", &c) : inoue_config_load(o.config.c_str(), &c);
    std::vector<std::string> sets = o.set;
    if (o.workers > 0) sets.push_back("run.workers=" + std::to_string(o.workers));
    if (o.seed >= 0) sets.push_back("run.seed=" + std::to_string(o.seed));
    for (const auto& s : sets)
        if (c) st = inoue_config_override(c, s.c_str());
    if (!c || st != INOUE_OK) {
        std::fprintf(stderr, "invalid config (%s)\n", inoue_status_name(st));
        if (c) print_violations(c);
        else std::fprintf(stderr, "  %s\n", inoue_last_error());
        inoue_config_free(c);
        code = 2;
        return nullptr;
    }
    return c;
}

std::string out_dir(const Options& o, const inoue_config* c)
{
    if (!o.out.empty()) return o.out;
    std::filesystem::path p = fetch(inoue_config_out, c);
    const char* root = std::getenv("INOUE_OUT");
    if (root && *root && p.is_relative()) p = std::filesystem::path(root) / p;
    return p.string();
}

int execute(const Options& o, const std::string& stage)
{
    int code = 0;
    inoue_config* c = load(o, code);
    if (!c) return code;
    if (!stage.empty()) {
        inoue_status st = inoue_config_select_stage(c, stage.c_str());
        if (st != INOUE_OK) {
            std::fprintf(stderr, "%s: %s\n", inoue_status_name(st), inoue_last_error());
            inoue_config_free(c);
            return 2;
        }
    }
    const std::string dir = out_dir(o, c);
    inoue_run* r = nullptr;
    inoue_status st = inoue_execute(c, dir.c_str(), &r);
    inoue_config_free(c);
    if (st != INOUE_OK) {
        std::fprintf(stderr, "%s: %s\n", inoue_status_name(st), inoue_last_error());
        return 3;
    }
    std::string m(inoue_run_manifest(r, nullptr, 0), '\0');
    inoue_run_manifest(r, m.data(), m.size() + 1);
    std::fputs(m.c_str(), stdout);
    const int rc = inoue_run_passed(r) ? 0 : 1;
    inoue_run_free(r);
    return rc;
}

void common(CLI::App* app, Options& o)
{
    app->add_option("--config", o.config, "INI config file")->check(CLI::ExistingFile);
    app->add_option("--out", o.out, "output directory (default: [run] out under $INOUE_OUT)");
    app->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1, 256));
    app->add_option("--seed", o.seed, "sampling seed")->check(CLI::NonNegativeNumber);
    app->add_option("--set", o.set, "override, section.key=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Chern-Ricci flow lab for Inoue surfaces"};
    app.set_version_flag("--version", std::string(inoue_version()));
    app.require_subcommand(1);
    Options o;
    std::string plot_dir;
    int rc = 0;

    for (const char* name : {"construct", "verify-tensors", "flow", "diagnose", "gh"}) {
        CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " stage (and what it needs)");
        common(sub, o);
        sub->callback([&, name] { rc = execute(o, name); });
    }
    CLI::App* run = app.add_subcommand("run", "run the configured pipeline");
    common(run, o);
    run->add_option("--stage", o.stage, "restrict to one stage and its dependencies");
    run->callback([&] { rc = execute(o, o.stage); });

    CLI::App* val = app.add_subcommand("validate", "validate a config and print its resolved form");
    common(val, o);
    val->callback([&] {
        inoue_config* c = load(o, rc);
        if (!c) return;
        std::printf("config_hash %s\n%s", fetch(inoue_config_hash, c).c_str(), fetch(inoue_config_canonical, c).c_str());
        inoue_config_free(c);
    });

    CLI::App* plot = app.add_subcommand("plot-data", "write plot_data.csv for a run directory");
    plot->add_option("dir", plot_dir, "run directory")->required();
    plot->callback([&] {
        inoue_status st = inoue_emit_plot_data(plot_dir.c_str());
        if (st != INOUE_OK) {
            std::fprintf(stderr, "%s: %s\n", inoue_status_name(st), inoue_last_error());
            rc = 2;
        }
    });

    CLI11_PARSE(app, argc, argv);
    return rc;
}

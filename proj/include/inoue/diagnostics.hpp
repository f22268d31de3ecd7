#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "inoue/flow.hpp"

namespace inoue {

struct Series {
    std::string label;
    std::vector<double> t, v;
    // times strictly increasing, values finite; InvalidArgument otherwise
    void validate() const;
};

enum class RateModel { exponential, potential_envelope, half_exponential, constant };
std::string rate_model_name(RateModel m);

struct RateFit {
    RateModel model = RateModel::constant;
    double C = 0;
    double eps = 0;
    // RMS of the log residuals
    double residual = 0;
    int points = 0;
    // exponential fits only: every point of the window was below the noise floor
    bool converged = false;
};

// log v = log C - eps t over t >= t_from, skipping values <= floor
RateFit fit_exponential(const Series& s, double t_from = 1, double floor = 0);
// least-squares log C for v ~ C (1 + t) e^{-t} over t >= t_from
RateFit fit_envelope(const Series& s, double t_from = 1);
// smallest C with v <= C (1 + t) e^{-t} (resp. C e^{t/2}, C) at every point up to t_max
double envelope_constant(const Series& s, RateModel m, double t_max = 1e300);

struct DiagnoseOptions {
    double t_from = 1;
    // values below this are at the solver noise level and excluded from rate fits
    double noise_floor = 1e-10;
    double stability_factor = 2;
    double eps_min = 0.1;
    double curvature_C = 10;
    double phidot_bound = 10;
    double volume_C = 10;
    double u_bound = 10;
    // every k-th reduced node is a sample point
    int node_stride = 1;
    std::uint64_t seed = 1;
};

struct Verdict {
    std::string name;
    bool pass = false;
    // informational verdicts are reported but never fail a run
    bool informational = false;
    std::vector<std::pair<std::string, double>> values;
    std::string note;
};

enum class SolverKind { reduced, full };

struct Trajectory {
    SurfaceKind kind() const { return surface.kind(); }
    Surface surface;
    SolverKind solver = SolverKind::reduced;
    int n_fiber = 0, n_base = 0;
    std::vector<Snapshot> snapshots;
};

// Quantities per snapshot: sup_phi, sup_phidot, gap_tilde (sup|tr_{w~} w - 2|),
// gap_omega (sup|tr_w w~ - 2|), volume_ratio_min/max (w^2 / w~^2), sup_u (u = phi + phidot),
// and on reduced runs R_min, R_max, calabi_S, sup_grad_u.
std::map<std::string, Series> compute_series(const Trajectory& traj, const DiagnoseOptions& opt = {});

// Verdicts are functions of the series only.
Verdict potential_decay(const Series& sup_phi, const DiagnoseOptions& opt = {});
Verdict trace_gaps(const Series& gap_tilde, const Series& gap_omega, const DiagnoseOptions& opt = {});
Verdict scalar_curvature_bounds(const Series& r_min, const Series& r_max, const DiagnoseOptions& opt = {});
Verdict calabi_trend(const Series& s, const DiagnoseOptions& opt = {});
Verdict u_quantity(const Series& sup_u, const std::optional<Series>& sup_grad_u, const DiagnoseOptions& opt = {});
Verdict phidot_bound(const Series& sup_phidot, const DiagnoseOptions& opt = {});
Verdict volume_ratio(const Series& vmin, const Series& vmax, const DiagnoseOptions& opt = {});

// All verdicts applicable to the available series (MissingSeries if sup_phi is absent).
std::vector<Verdict> all_verdicts(const std::map<std::string, Series>& series, const DiagnoseOptions& opt = {});

}  // namespace inoue

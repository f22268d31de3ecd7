#pragma once

#include <functional>
#include <string>
#include <vector>

namespace inoue {

enum class IntegratorKind { rkc, rk2 };

IntegratorKind parse_integrator(const std::string& name);
std::string integrator_name(IntegratorKind k);

struct StepOptions {
    IntegratorKind integrator = IntegratorKind::rkc;
    // initial step, and the upper bound on any step
    double dt = 1e-3;
    double dt_max = 0.05;
    // RKC local error control; adaptive = false keeps dt fixed (up to the stability guard for rk2)
    bool adaptive = true;
    double rtol = 1e-9, atol = 1e-10;
    // consecutive positivity-driven halvings allowed before StepFailure
    int max_halvings = 8;
    int workers = 1;
};

struct StepLog {
    long steps = 0;
    long rhs_evals = 0;
    long rejected = 0;
    // halvings caused by PositivityLoss inside a step
    long halvings = 0;
    int max_stages = 0;
    double last_dt = 0;
};

// Explicit integrator for y' = F(t, y). F may throw Error(positivity_loss),
// which halves the step. spectral(t, y) bounds the spectral radius of dF/dy.
class TimeStepper {
public:
    using Rhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& out)>;
    using Spectral = std::function<double(double t, const std::vector<double>& y)>;

    TimeStepper(Rhs f, Spectral rho, StepOptions opt);

    // Advance (t, y) to exactly t_end.
    void advance(double& t, std::vector<double>& y, double t_end);
    // One step of size at most dt (smaller after positivity halvings); returns the step taken.
    double step(double& t, std::vector<double>& y, double dt);

    // forget the cached F(t, y) after the state was modified externally
    void reset() { f0_.clear(); }

    const StepLog& log() const { return log_; }
    const StepOptions& options() const { return opt_; }

private:
    void rkc_stages(double t, const std::vector<double>& y, double h, int s, std::vector<double>& out);
    void rk2_stage(double t, const std::vector<double>& y, double h, std::vector<double>& out);
    double rkc_error(const std::vector<double>& y0, const std::vector<double>& y1, double h);
    int rkc_stage_count(double h, double rho) const;

    Rhs f_;
    Spectral rho_;
    StepOptions opt_;
    StepLog log_;
    double h_next_ = 0;
    std::vector<double> f0_, f1_, yjm1_, yjm2_, yj_, tmp_;
};

}  // namespace inoue

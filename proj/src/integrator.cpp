#include "inoue/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "inoue/errors.hpp"

namespace inoue {

namespace {

constexpr int kMaxStages = 500;
constexpr double kDamping = 2.0 / 13.0;

struct RkcCoefficients {
    double w0 = 0, w1 = 0;
    std::vector<double> a, b, c;
};

RkcCoefficients rkc_coefficients(int s)
{
    RkcCoefficients k;
    k.w0 = 1 + kDamping / (double(s) * s);
    std::vector<double> T(s + 1), dT(s + 1), ddT(s + 1);
    T[0] = 1, dT[0] = 0, ddT[0] = 0;
    T[1] = k.w0, dT[1] = 1, ddT[1] = 0;
    for (int j = 2; j <= s; ++j) {
        T[j] = 2 * k.w0 * T[j - 1] - T[j - 2];
        dT[j] = 2 * T[j - 1] + 2 * k.w0 * dT[j - 1] - dT[j - 2];
        ddT[j] = 4 * dT[j - 1] + 2 * k.w0 * ddT[j - 1] - ddT[j - 2];
    }
    k.w1 = dT[s] / ddT[s];
    k.a.assign(s + 1, 0);
    k.b.assign(s + 1, 0);
    k.c.assign(s + 1, 0);
    for (int j = 2; j <= s; ++j) {
        k.b[j] = ddT[j] / (dT[j] * dT[j]);
        k.c[j] = k.w1 * ddT[j] / dT[j];
    }
    k.b[0] = k.b[1] = k.b[2];
    for (int j = 0; j <= s; ++j) k.a[j] = 1 - k.b[j] * T[j];
    k.c[1] = k.c[2] / dT[2];
    return k;
}

bool is_positivity_loss(const Error& e) { return e.code() == ErrorCode::positivity_loss; }

}  // namespace

IntegratorKind parse_integrator(const std::string& name)
{
    if (name == "rkc") return IntegratorKind::rkc;
    if (name == "rk2") return IntegratorKind::rk2;
    fail(ErrorCode::invalid_argument, "unknown integrator '" + name + "' (expected rkc or rk2)");
}

std::string integrator_name(IntegratorKind k) { return k == IntegratorKind::rkc ? "rkc" : "rk2"; }

TimeStepper::TimeStepper(Rhs f, Spectral rho, StepOptions opt) : f_(std::move(f)), rho_(std::move(rho)), opt_(opt)
{
    if (!(opt_.dt > 0) || !(opt_.dt_max > 0)) fail(ErrorCode::invalid_argument, "time step must be positive");
    h_next_ = std::min(opt_.dt, opt_.dt_max);
}

int TimeStepper::rkc_stage_count(double h, double rho) const
{
    return std::max(2, 1 + static_cast<int>(std::sqrt(1 + 1.54 * h * rho)));
}

void TimeStepper::rkc_stages(double t, const std::vector<double>& y, double h, int s, std::vector<double>& out)
{
    const RkcCoefficients k = rkc_coefficients(s);
    const std::size_t n = y.size();
    yjm2_ = y;
    yjm1_.resize(n);
    for (std::size_t i = 0; i < n; ++i) yjm1_[i] = y[i] + k.b[1] * k.w1 * h * f0_[i];
    yj_.resize(n);
    for (int j = 2; j <= s; ++j) {
        const double mu = 2 * k.w0 * k.b[j] / k.b[j - 1];
        const double nu = -k.b[j] / k.b[j - 2];
        const double mut = 2 * k.w1 * k.b[j] / k.b[j - 1];
        const double gamt = -k.a[j - 1] * mut;
        f_(t + k.c[j - 1] * h, yjm1_, tmp_);
        ++log_.rhs_evals;
        for (std::size_t i = 0; i < n; ++i)
            yj_[i] = (1 - mu - nu) * y[i] + mu * yjm1_[i] + nu * yjm2_[i] + mut * h * tmp_[i] + gamt * h * f0_[i];
        std::swap(yjm2_, yjm1_);
        std::swap(yjm1_, yj_);
    }
    out = yjm1_;
}

void TimeStepper::rk2_stage(double t, const std::vector<double>& y, double h, std::vector<double>& out)
{
    const std::size_t n = y.size();
    tmp_.resize(n);
    std::vector<double> mid(n);
    for (std::size_t i = 0; i < n; ++i) mid[i] = y[i] + 0.5 * h * f0_[i];
    f_(t + 0.5 * h, mid, tmp_);
    ++log_.rhs_evals;
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + h * tmp_[i];
}

double TimeStepper::rkc_error(const std::vector<double>& y0, const std::vector<double>& y1, double h)
{
    double sum = 0;
    for (std::size_t i = 0; i < y0.size(); ++i) {
        const double est = 0.8 * (y0[i] - y1[i]) + 0.4 * h * (f0_[i] + f1_[i]);
        const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        sum += (est / sc) * (est / sc);
    }
    return std::sqrt(sum / double(std::max<std::size_t>(1, y0.size())));
}

double TimeStepper::step(double& t, std::vector<double>& y, double dt)
{
    double h = std::min(dt, opt_.dt_max);
    if (f0_.size() != y.size()) {
        f_(t, y, f0_);
        ++log_.rhs_evals;
    }
    int halvings = 0;
    std::vector<double> ynew;
    for (;;) {
        const double rho = rho_(t, y);
        int stages = 2;
        if (opt_.integrator == IntegratorKind::rk2) {
            h = std::min(h, 1.6 / std::max(rho, 1e-300));
        } else {
            stages = rkc_stage_count(h, rho);
            if (stages > kMaxStages) {
                h = 0.9 * 0.653 * (double(kMaxStages) * kMaxStages - 1) / rho;
                stages = kMaxStages;
            }
        }
        try {
            if (opt_.integrator == IntegratorKind::rk2)
                rk2_stage(t, y, h, ynew);
            else
                rkc_stages(t, y, h, stages, ynew);
            f_(t + h, ynew, f1_);
            ++log_.rhs_evals;
        } catch (const Error& e) {
            if (!is_positivity_loss(e)) throw;
            if (++halvings > opt_.max_halvings)
                fail(ErrorCode::step_failure, "positivity lost after " + std::to_string(opt_.max_halvings) +
                                                  " step halvings at t = " + std::to_string(t) + ": " + e.what());
            ++log_.halvings;
            h *= 0.5;
            continue;
        }
        if (opt_.integrator == IntegratorKind::rkc && opt_.adaptive) {
            const double err = rkc_error(y, ynew, h);
            const double fac = err > 0 ? 0.8 / std::cbrt(err) : 10.0;
            if (err > 1) {
                ++log_.rejected;
                h *= std::clamp(fac, 0.1, 0.9);
                continue;
            }
            h_next_ = std::min(opt_.dt_max, h * std::clamp(fac, 0.1, 10.0));
        }
        log_.max_stages = std::max(log_.max_stages, stages);
        break;
    }
    t += h;
    y.swap(ynew);
    f0_.swap(f1_);
    ++log_.steps;
    log_.last_dt = h;
    return h;
}

void TimeStepper::advance(double& t, std::vector<double>& y, double t_end)
{
    const bool adaptive = opt_.integrator == IntegratorKind::rkc && opt_.adaptive;
    while (t_end - t > 1e-13 * std::max(1.0, std::abs(t_end))) {
        double h = adaptive ? h_next_ : std::min(opt_.dt, opt_.dt_max);
        const double rest = t_end - t;
        bool last = false;
        if (h >= rest * (1 - 1e-12)) {
            h = rest;
            last = true;
        } else if (h > 0.5 * rest) {
            h = 0.5 * rest;
        }
        const double keep = h_next_;
        const double taken = step(t, y, h);
        if (last && taken == h) t = t_end;
        // a short final step should not shrink the next proposal
        if (adaptive && last) h_next_ = std::max(h_next_, keep);
    }
    t = t_end;
}

}  // namespace inoue

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "inoue/metric_field.hpp"
#include "inoue/surface.hpp"

namespace inoue {

enum class FormKind { alpha, beta, alpha_prime, gamma, tricerri, vaisman, omega_tilde, omega_infinity };

FormKind parse_form_kind(const std::string& name);
std::string form_kind_name(FormKind kind);

// Closed-form reference fields. omega_tilde uses the Tricerri (S_M) or
// Vaisman (S+) metric as the leafwise-flat reference. Kinds that belong to
// the other surface family raise BadKind.
MetricField form_field(const Surface& s, FormKind kind, double t = 0);
Metric2 eval_form(const Surface& s, FormKind kind, const Point& p, double t = 0);

// e^{-t} omega_lf + (1 - e^{-t}) omega_inf, omega_inf = alpha (S_M) or alpha' (S+)
MetricField omega_tilde(const Surface& s, const MetricField& omega_lf, double t);
// d/dt of omega_tilde
MetricField omega_tilde_dt(const Surface& s, const MetricField& omega_lf, double t);

// e^{-t} beta + (1 + 3e^{-t}) alpha on S_M, e^{-t} gamma + (1 + e^{-t}) alpha' on S+
MetricField explicit_solution(const Surface& s, double t);
MetricField explicit_solution_dt(const Surface& s, double t);

// The constant c of g_{1 1bar} = c y2 (S_M) or g_{1 1bar} = c (S+) on the samples,
// or NotStronglyFlat if the ratio varies by more than rel_tol.
double is_strongly_flat(const Surface& s, const MetricField& omega, const std::vector<Point>& samples,
                        double rel_tol = 1e-8);

struct Flattening {
    // e^sigma = y2 / g_{1 1bar} (S_M) or 1 / g_{1 1bar} (S+)
    ScalarField sigma;
    MetricField omega_lf;
};
Flattening conformal_flatten(const Surface& s, const MetricField& omega);

// Omega = 2 omega_inf ^ omega_lf. A (2,2)-form a (i dz1 ^ dz1bar) ^ (i dz2 ^ dz2bar)
// has density 4a against dx1 dy1 dx2 dy2; coefficient() returns a.
class VolumeDensity {
public:
    VolumeDensity() = default;
    VolumeDensity(SurfaceKind kind, double c) : kind_(kind), c_(c) {}

    double c() const { return c_; }
    double coefficient(const Point& p) const;
    double density(const Point& p) const { return 4 * coefficient(p); }
    ScalarField log_coefficient() const;

private:
    SurfaceKind kind_ = SurfaceKind::sm;
    double c_ = 1;
};

VolumeDensity volume_density(const Surface& s, const MetricField& omega_lf, const std::vector<Point>& samples);

// Registry: alpha, beta, alpha-prime, gamma, tricerri, vaisman, omega-tilde,
// omega-infinity, explicit-sm, explicit-splus.
MetricField named_metric(const Surface& s, const std::string& key, double t = 0);
std::vector<std::string> metric_names();

// Gamma-invariant scalar on the cover: sum over n of a Gaussian bump in
// u - nL times cos(2 pi (A^{-n} k) . w + phase), where w are the fiber
// unit coordinates and A the integer fiber action of f0.
ScalarField invariant_wave(const Surface& s, const std::array<int, 3>& k, double phase = 0, double width = 0.2);

// Random Gamma-invariant Hermitian metric (positive definite, not strongly flat).
MetricField invariant_test_metric(const Surface& s, std::uint64_t seed, double amplitude = 0.3);

// random points in the fundamental domain
std::vector<Point> sample_domain(const Surface& s, int count, std::uint64_t seed);

}  // namespace inoue

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inoue/calculus.hpp"
#include "inoue/surface.hpp"

namespace inoue {

struct CheckResult {
    std::string name;
    // max deviation (relative for closed-form components, absolute otherwise)
    double value = 0;
    double tolerance = 0;
    int points = 0;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    int points = 100;
    std::vector<double> times{0, 1, 5};
    int residual_points = 50;
    std::vector<double> residual_times{0, 1, 3, 6};
    int flat_metrics = 5;
    std::uint64_t seed = 1;
    int workers = 1;
    DiffOptions diff;
};

CheckResult make_check(std::string name, double value, double tolerance, int points, std::string detail = {});

// Components of the omega-tilde family against their closed forms.
// S_M: Gamma^1_21, Gamma^2_22, T^1_12, R_{22bar22bar}, R_{22bar11bar}; S+: Gamma^2_11, T^2_12.
std::vector<CheckResult> check_closed_forms(const Surface& s, const VerifyOptions& opt);
// |nabla Rm|, |dbar dbar T|, |nabla dbar T| on the S_M family
std::vector<CheckResult> check_parallel_tensors(const Surface& s, const VerifyOptions& opt);
// T antisymmetry, Hermitian symmetry of Rm, Ric against the contracted curvature
std::vector<CheckResult> check_symmetries(const Surface& s, const VerifyOptions& opt);
// Ric(omega_T) = -alpha or Ric(omega_V) = -alpha'
CheckResult check_ricci_identity(const Surface& s, const VerifyOptions& opt);
// i ddbar log Omega = omega_inf
CheckResult check_volume_form(const Surface& s, const VerifyOptions& opt);
// d/dt omega + Ric(omega) + omega on the explicit solution
CheckResult check_explicit_residual(const Surface& s, const VerifyOptions& opt);
// flattened test metrics: |c - 1| and idempotence
std::vector<CheckResult> check_flattening(const Surface& s, const VerifyOptions& opt);
// reference forms pulled back by the generators
CheckResult check_form_invariance(const Surface& s, const VerifyOptions& opt);
// S+ only: linear system for (c1, c2) and f0 f_i f0^-1 = f1^{n_i1} f2^{n_i2} f3^{p_i}
std::vector<CheckResult> check_splus_constants(const Surface& s);

std::vector<CheckResult> verify_tensors(const Surface& s, const VerifyOptions& opt);

}  // namespace inoue

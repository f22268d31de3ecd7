#pragma once

#include <array>
#include <initializer_list>
#include <limits>
#include <vector>

#include "inoue/metric_field.hpp"

namespace inoue {

enum class DiffBackend { automatic, jet, finite_difference };

struct DiffOptions {
    DiffBackend backend = DiffBackend::automatic;
    // base step for first derivatives; second and third derivatives use 4h and 15h
    double h = 1e-3;
    // Richardson levels: 0 (plain central, O(h^2)), 1 (O(h^4)), 2 (O(h^6))
    int richardson = 2;
};

// Taylor expansion of g at p to the given order. Every evaluation point
// (stencil node, or p itself for jets) must be positive definite.
Herm2<Jet> metric_jet(const MetricField& g, const Point& p, int order, const DiffOptions& opt = {});
Jet scalar_jet(const ScalarField& f, const Point& p, int order, const DiffOptions& opt = {});

enum class IndexKind { up, down, up_bar, down_bar };

// Complex tensor with two-valued indices; component index bits are ordered
// first index most significant.
struct Tensor {
    std::vector<IndexKind> kinds;
    std::vector<cplx> c;

    int rank() const { return static_cast<int>(kinds.size()); }
    cplx operator()(std::initializer_list<int> idx) const;
    double max_abs() const;
};

// Pointwise norm with the metric value g: contraction of X with conj X.
double tensor_norm(const Tensor& X, const Metric2& g);

enum class ChernLevel { connection = 1, curvature = 2, full = 3 };

struct ChernPackage {
    Point point;
    double time = std::numeric_limits<double>::quiet_NaN();
    Metric2 g;
    // Gamma^p_{ik}: up, down, down
    Tensor gamma;
    // T^k_{ij} and T_{ij lbar} = g_{k lbar} T^k_{ij}
    Tensor torsion, torsion_lowered;
    // R_{i jbar k lbar}
    Tensor curvature;
    // -d dbar log det g, and g^{k lbar} R_{i jbar k lbar} as a cross-check
    Metric2 ricci, ricci_from_curvature;
    double scalar = 0;
    // present at ChernLevel::full
    bool has_derivatives = false;
    Tensor nabla_torsion, dbar_torsion, nabla_dbar_torsion, dbar_dbar_torsion, nabla_rm, nablabar_rm;

    cplx Gamma(int p, int i, int k) const { return gamma({p, i, k}); }
    cplx T(int k, int i, int j) const { return torsion({k, i, j}); }
    cplx R(int i, int j, int k, int l) const { return curvature({i, j, k, l}); }
};

ChernPackage chern_package(const MetricField& g, const Point& p, ChernLevel level = ChernLevel::full,
                           const DiffOptions& opt = {});

struct TorsionArrays {
    Tensor raised, lowered;
};
struct RicciResult {
    Metric2 form;
    double scalar = 0;
};
struct CovariantDerivatives {
    Tensor nabla_torsion, dbar_torsion, nabla_dbar_torsion, dbar_dbar_torsion, nabla_rm, nablabar_rm;
};
struct TensorNorms {
    double torsion = 0, dbar_torsion = 0, nabla_torsion = 0, rm = 0, nabla_rm = 0;
    double nabla_dbar_torsion = 0, dbar_dbar_torsion = 0;
};

Tensor christoffel(const MetricField& g, const Point& p, const DiffOptions& opt = {});
TorsionArrays torsion(const MetricField& g, const Point& p, const DiffOptions& opt = {});
RicciResult chern_ricci(const MetricField& g, const Point& p, const DiffOptions& opt = {});
Tensor curvature(const MetricField& g, const Point& p, const DiffOptions& opt = {});
CovariantDerivatives covariant_derivatives(const MetricField& g, const Point& p, const DiffOptions& opt = {});
TensorNorms tensor_norms(const ChernPackage& pkg);

// tr_{w2} w1 = g2^{i jbar} (g1)_{i jbar}
double trace(const MetricField& w1, const MetricField& w2, const Point& p);

// components d_i d_jbar f
Metric2 ddbar(const ScalarField& f, const Point& p, const DiffOptions& opt = {});

// max |d_k g_{i jbar} - d_i g_{k jbar}|: zero iff the form is d-closed
double closedness_defect(const MetricField& g, const Point& p, const DiffOptions& opt = {});

// Chern covariant derivative of a (1,1)-form a_{j kbar} along i and along ibar
struct FormDerivative {
    Tensor holo, antiholo;
};
FormDerivative form_covariant_derivative(const MetricField& g, const MetricField& form, const Point& p,
                                         const DiffOptions& opt = {});

// S = |Gamma - Gamma_ref|^2_g, the Calabi quantity, at p
double calabi_quantity(const ChernPackage& pkg, const ChernPackage& reference);

}  // namespace inoue

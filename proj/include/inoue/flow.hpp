#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "inoue/integrator.hpp"
#include "inoue/metric_field.hpp"
#include "inoue/reference.hpp"
#include "inoue/surface.hpp"

namespace inoue {

struct Snapshot {
    double t = 0;
    std::vector<double> phi, phidot;
};

// ---- reduced problem: phi = phi(u), u = log y2 periodic with period L ----
//
// With the Tricerri (S_M) or Vaisman (S+) reference metric the potential
// equation reduces to
//   phi_t = log(a(t) + w (phi_uu - phi_u)) - phi,
// a = 1 + 3e^{-t}, w = 1 on S_M and a = 1 + e^{-t}, w = 1/2 on S+.

double reduced_coefficient(SurfaceKind kind, double t);
double reduced_weight(SurfaceKind kind);

// Periodic central differences on n = phi.size() nodes of spacing period / n.
// Throws PositivityLoss naming the node if the log argument is not positive.
void reduced_rhs(SurfaceKind kind, double period, double t, const std::vector<double>& phi,
                 std::vector<double>& out);

// phi_uu - phi_u with the same stencils
std::vector<double> reduced_hessian(double period, const std::vector<double>& phi);

class ReducedFlow {
public:
    ReducedFlow(const Surface& s, std::vector<double> rho, StepOptions opt = {});
    static ReducedFlow from_function(const Surface& s, int n, const std::function<double(double u)>& rho,
                                     StepOptions opt = {});

    const Surface& surface() const { return surface_; }
    int size() const { return static_cast<int>(phi_.size()); }
    double spacing() const { return surface_.period() / size(); }
    double node_u(int i) const { return i * spacing(); }
    double t() const { return t_; }
    const std::vector<double>& phi() const { return phi_; }

    std::vector<double> rhs() const;
    void step(double dt);
    void advance_to(double t_end);
    Snapshot snapshot() const;
    std::vector<Snapshot> run(const std::vector<double>& times);
    const StepLog& log() const { return stepper_.log(); }

    // omega~(t) + i ddbar phi at the current state
    MetricField metric() const;

private:
    Surface surface_;
    std::vector<double> phi_;
    double t_ = 0;
    TimeStepper stepper_;
};

// omega~(t) + i ddbar phi for reduced grid data phi(u_i); off-grid values
// interpolate phi_uu - phi_u with a periodic cubic spline.
MetricField reduced_metric(const Surface& s, double t, const std::vector<double>& phi);

// phi(t) for phi' = log(a(t)) - phi, phi(0) = 0 (classical RK4, step <= 1e-3)
std::vector<double> constant_mode_ode(SurfaceKind kind, const std::vector<double>& times);
double constant_mode_value(SurfaceKind kind, double t);

// Periodic cubic spline on n equispaced nodes.
class PeriodicSpline {
public:
    PeriodicSpline() = default;
    PeriodicSpline(double period, std::vector<double> values);
    // value and first three derivatives
    std::array<double, 4> eval(double u) const;

private:
    double period_ = 1, h_ = 1;
    std::vector<double> y_, m_;
};

// ---- full Gamma-equivariant grid on S_M ----
//
// Nodes sit at unit coordinates (k1, k2, k3)/n_fiber, m/n_base. Stencils
// crossing u = L wrap through f0, which maps fiber indices by M^T exactly.
class FullGrid {
public:
    FullGrid(const Surface& s, int n_fiber, int n_base);

    std::size_t size() const { return std::size_t(nf_) * nf_ * nf_ * nb_; }
    int n_fiber() const { return nf_; }
    int n_base() const { return nb_; }
    std::size_t index(long long k1, long long k2, long long k3, long long m) const;
    std::array<int, 4> coords(std::size_t idx) const;
    UnitCoords unit(std::size_t idx) const;
    Point point(std::size_t idx) const;
    // 8 axis neighbours (+-e_a) then 24 diagonal ones (+-e_a +-e_b, a < b)
    const std::array<std::uint32_t, 32>& neighbours(std::size_t idx) const { return nbr_[idx]; }

private:
    Surface surface_;
    int nf_, nb_;
    std::array<std::array<long long, 3>, 3> fwd_{}, inv_{};
    std::vector<std::array<std::uint32_t, 32>> nbr_;
};

class FullFlow {
public:
    // omega_lf defaults to the Tricerri metric; it must be strongly flat.
    FullFlow(const Surface& s, int n_fiber, int n_base, const std::function<double(const Point&)>& rho,
             StepOptions opt = {}, MetricField omega_lf = {});
    // the stepper callbacks refer to this object
    FullFlow(const FullFlow&) = delete;
    FullFlow& operator=(const FullFlow&) = delete;

    const FullGrid& grid() const { return grid_; }
    double t() const { return t_; }
    const std::vector<double>& phi() const { return phi_; }

    // phi_t at every node
    void ma_rhs(double t, const std::vector<double>& phi, std::vector<double>& out) const;
    // complex Hessian d_i d_jbar phi at a node
    Metric2 hessian(const std::vector<double>& phi, std::size_t node) const;
    Metric2 reference_at(double t, std::size_t node) const;
    Metric2 metric_at(double t, const std::vector<double>& phi, std::size_t node) const;
    double spectral_bound(double t, const std::vector<double>& phi) const;

    void advance_to(double t_end);
    Snapshot snapshot() const;
    const StepLog& log() const { return stepper_.log(); }

    // omega(t) off the grid: Catmull-Rom interpolation of Gamma-invariant
    // rescalings of the nodal Hessian
    MetricField metric() const;

    // largest |rho(cover point) - rho(node)| over stencil points that leave the domain
    double wrap_defect(const std::function<double(const Point&)>& f) const;

private:
    struct NodeData {
        Point p;
        double inv_ly;  // 1 / (L y2)
        Metric2 lf, inf;
        double vol;  // coefficient of Omega
    };

    Surface surface_;
    FullGrid grid_;
    MetricField lf_field_;
    std::array<std::array<double, 3>, 3> binv_{};
    std::vector<NodeData> nodes_;
    std::vector<double> phi_;
    double t_ = 0;
    int workers_ = 1;
    TimeStepper stepper_;
};

}  // namespace inoue

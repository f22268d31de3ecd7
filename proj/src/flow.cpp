#include "inoue/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "inoue/parallel.hpp"

namespace inoue {

// ---------------------------------------------------------------- reduced

double reduced_coefficient(SurfaceKind kind, double t)
{
    return kind == SurfaceKind::sm ? 1 + 3 * std::exp(-t) : 1 + std::exp(-t);
}

double reduced_weight(SurfaceKind kind) { return kind == SurfaceKind::sm ? 1.0 : 0.5; }

std::vector<double> reduced_hessian(double period, const std::vector<double>& phi)
{
    const int n = static_cast<int>(phi.size());
    const double h = period / n;
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const double l = phi[(i + n - 1) % n], c = phi[i], r = phi[(i + 1) % n];
        out[i] = (r - 2 * c + l) / (h * h) - (r - l) / (2 * h);
    }
    return out;
}

void reduced_rhs(SurfaceKind kind, double period, double t, const std::vector<double>& phi, std::vector<double>& out)
{
    const int n = static_cast<int>(phi.size());
    if (n < 3) fail(ErrorCode::invalid_argument, "reduced grid needs at least 3 nodes");
    const double a = reduced_coefficient(kind, t), w = reduced_weight(kind);
    const double h = period / n;
    out.resize(n);
    for (int i = 0; i < n; ++i) {
        const double l = phi[(i + n - 1) % n], c = phi[i], r = phi[(i + 1) % n];
        const double arg = a + w * ((r - 2 * c + l) / (h * h) - (r - l) / (2 * h));
        if (!(arg > 0)) {
            std::ostringstream msg;
            msg << "Monge-Ampere argument " << arg << " <= 0 at node " << i << " (u = " << i * h << ", t = " << t << ")";
            fail(ErrorCode::positivity_loss, msg.str());
        }
        out[i] = std::log(arg) - c;
    }
}

namespace {

double reduced_spectral(SurfaceKind kind, double period, double t, const std::vector<double>& phi)
{
    const int n = static_cast<int>(phi.size());
    const double h = period / n, w = reduced_weight(kind);
    const auto hess = reduced_hessian(period, phi);
    const double a = reduced_coefficient(kind, t);
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        const double arg = a + w * hess[i];
        if (arg > 0) worst = std::max(worst, w / arg);
    }
    return worst * (4 / (h * h) + 1 / h) + 1;
}

}  // namespace

ReducedFlow::ReducedFlow(const Surface& s, std::vector<double> rho, StepOptions opt)
    : surface_(s),
      phi_(std::move(rho)),
      stepper_(
          [kind = s.kind(), L = s.period()](double t, const std::vector<double>& y, std::vector<double>& out) {
              reduced_rhs(kind, L, t, y, out);
          },
          [kind = s.kind(), L = s.period()](double t, const std::vector<double>& y) {
              return reduced_spectral(kind, L, t, y);
          },
          opt)
{
    if (phi_.size() < 8) fail(ErrorCode::invalid_argument, "reduced grid needs at least 8 nodes");
    for (double v : phi_)
        if (!std::isfinite(v)) fail(ErrorCode::invalid_initial_data, "initial data is not finite");
    std::vector<double> tmp;
    try {
        reduced_rhs(s.kind(), s.period(), 0, phi_, tmp);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::positivity_loss)
            fail(ErrorCode::invalid_initial_data, std::string("initial metric is not positive: ") + e.what());
        throw;
    }
}

ReducedFlow ReducedFlow::from_function(const Surface& s, int n, const std::function<double(double u)>& rho,
                                       StepOptions opt)
{
    if (n < 8) fail(ErrorCode::invalid_argument, "reduced grid needs at least 8 nodes");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = rho(i * s.period() / n);
    return ReducedFlow(s, std::move(v), opt);
}

std::vector<double> ReducedFlow::rhs() const
{
    std::vector<double> out;
    reduced_rhs(surface_.kind(), surface_.period(), t_, phi_, out);
    return out;
}

void ReducedFlow::step(double dt) { stepper_.step(t_, phi_, dt); }

void ReducedFlow::advance_to(double t_end)
{
    if (t_end < t_) fail(ErrorCode::invalid_argument, "cannot integrate backwards in time");
    stepper_.advance(t_, phi_, t_end);
}

Snapshot ReducedFlow::snapshot() const { return {t_, phi_, rhs()}; }

std::vector<Snapshot> ReducedFlow::run(const std::vector<double>& times)
{
    std::vector<Snapshot> out;
    for (double t : times) {
        advance_to(t);
        out.push_back(snapshot());
    }
    return out;
}

MetricField ReducedFlow::metric() const { return reduced_metric(surface_, t_, phi_); }

// ---------------------------------------------------------------- spline

PeriodicSpline::PeriodicSpline(double period, std::vector<double> values) : period_(period), y_(std::move(values))
{
    const int n = static_cast<int>(y_.size());
    if (n < 3) fail(ErrorCode::invalid_argument, "periodic spline needs at least 3 nodes");
    h_ = period_ / n;
    // (M_{i-1} + 4 M_i + M_{i+1}) = 6 (y_{i+1} - 2 y_i + y_{i-1}) / h^2, cyclic;
    // Sherman-Morrison on the Thomas algorithm
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = 6 * (y_[(i + 1) % n] - 2 * y_[i] + y_[(i + n - 1) % n]) / (h_ * h_);
    const double a = 1, b = 4, c = 1, alpha = c, beta = a, gamma = -b;
    std::vector<double> diag(n, b);
    diag[0] = b - gamma;
    diag[n - 1] = b - alpha * beta / gamma;
    auto thomas = [&](std::vector<double> d) {
        std::vector<double> cp(n), x(n);
        cp[0] = c / diag[0];
        d[0] /= diag[0];
        for (int i = 1; i < n; ++i) {
            const double m = diag[i] - a * cp[i - 1];
            cp[i] = c / m;
            d[i] = (d[i] - a * d[i - 1]) / m;
        }
        x[n - 1] = d[n - 1];
        for (int i = n - 2; i >= 0; --i) x[i] = d[i] - cp[i] * x[i + 1];
        return x;
    };
    std::vector<double> x = thomas(rhs);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    std::vector<double> z = thomas(u);
    const double fact = (x[0] + beta * x[n - 1] / gamma) / (1 + z[0] + beta * z[n - 1] / gamma);
    m_.resize(n);
    for (int i = 0; i < n; ++i) m_[i] = x[i] - fact * z[i];
}

std::array<double, 4> PeriodicSpline::eval(double u) const
{
    const int n = static_cast<int>(y_.size());
    double r = std::fmod(u, period_);
    if (r < 0) r += period_;
    int i = static_cast<int>(std::floor(r / h_));
    if (i >= n) i = n - 1;
    const double tau = r - i * h_, s = h_ - tau;
    const int j = (i + 1) % n;
    const double Mi = m_[i], Mj = m_[j];
    const double ci = y_[i] / h_ - Mi * h_ / 6, cj = y_[j] / h_ - Mj * h_ / 6;
    return {Mi * s * s * s / (6 * h_) + Mj * tau * tau * tau / (6 * h_) + ci * s + cj * tau,
            -Mi * s * s / (2 * h_) + Mj * tau * tau / (2 * h_) - ci + cj, Mi * s / h_ + Mj * tau / h_, (Mj - Mi) / h_};
}

namespace {

struct ReducedMetricModel final : MetricField::Model {
    MetricField base;
    PeriodicSpline hess;
    ReducedMetricModel(MetricField b, PeriodicSpline k) : base(std::move(b)), hess(std::move(k)) {}

    Metric2 value(const Point& p) const override
    {
        if (!(p.y2 > 0)) fail(ErrorCode::invalid_argument, "y2 must be positive");
        Metric2 g = base(p);
        g.g22 += hess.eval(std::log(p.y2))[0] / (4 * p.y2 * p.y2);
        if (!positive_definite(g)) fail(ErrorCode::positivity_loss, "reconstructed metric not positive definite");
        return g;
    }
    bool has_jet() const override { return true; }
    Herm2<Jet> jet(const Point& p, int order) const override
    {
        Herm2<Jet> g = base.jet(p, order);
        Jet y = Jet::variable(3, p.y2, order);
        const auto k = hess.eval(std::log(p.y2));
        Jet kj = log(y).compose(k[0], k[1], k[2], k[3]);
        g.g22 += kj / (4.0 * y * y);
        return g;
    }
};

}  // namespace

MetricField reduced_metric(const Surface& s, double t, const std::vector<double>& phi)
{
    PeriodicSpline k(s.period(), reduced_hessian(s.period(), phi));
    return MetricField(std::make_shared<ReducedMetricModel>(form_field(s, FormKind::omega_tilde, t), std::move(k)),
                       "reduced-flow");
}

// ---------------------------------------------------------------- constant mode

double constant_mode_value(SurfaceKind kind, double t)
{
    return constant_mode_ode(kind, {t}).front();
}

std::vector<double> constant_mode_ode(SurfaceKind kind, const std::vector<double>& times)
{
    auto f = [kind](double t, double y) { return std::log(reduced_coefficient(kind, t)) - y; };
    std::vector<double> out;
    double t = 0, y = 0;
    for (double target : times) {
        if (target < t) fail(ErrorCode::invalid_argument, "constant_mode_ode: times must be nondecreasing and >= 0");
        const int steps = std::max(1, static_cast<int>(std::ceil((target - t) / 1e-3)));
        const double h = (target - t) / steps;
        for (int k = 0; k < steps && h > 0; ++k) {
            const double k1 = f(t, y), k2 = f(t + h / 2, y + h / 2 * k1), k3 = f(t + h / 2, y + h / 2 * k2),
                         k4 = f(t + h, y + h * k3);
            y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
            t += h;
        }
        t = target;
        out.push_back(y);
    }
    return out;
}

// ---------------------------------------------------------------- full grid

namespace {

long long pmod(long long a, long long n) { return ((a % n) + n) % n; }

std::array<long long, 3> mulv(const std::array<std::array<long long, 3>, 3>& A, const std::array<long long, 3>& v)
{
    return {A[0][0] * v[0] + A[0][1] * v[1] + A[0][2] * v[2], A[1][0] * v[0] + A[1][1] * v[1] + A[1][2] * v[2],
            A[2][0] * v[0] + A[2][1] * v[1] + A[2][2] * v[2]};
}

std::array<std::array<long long, 3>, 3> int_inverse(const std::array<std::array<long long, 3>, 3>& P)
{
    std::array<std::array<long long, 3>, 3> R{};
    long long det = 0;
    for (int j = 0; j < 3; ++j) det += P[0][j] * (P[1][(j + 1) % 3] * P[2][(j + 2) % 3] - P[1][(j + 2) % 3] * P[2][(j + 1) % 3]);
    if (det != 1 && det != -1) fail(ErrorCode::not_unimodular, "fiber action is not unimodular");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
            R[i][j] = (P[i1][j1] * P[i2][j2] - P[i1][j2] * P[i2][j1]) * det;
        }
    return R;
}

constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
constexpr std::array<std::array<int, 2>, 4> kSigns{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

}  // namespace

FullGrid::FullGrid(const Surface& s, int n_fiber, int n_base) : surface_(s), nf_(n_fiber), nb_(n_base)
{
    if (s.kind() != SurfaceKind::sm) fail(ErrorCode::bad_kind, "the full grid solver supports S_M surfaces only");
    if (nf_ < 3 || nb_ < 3) fail(ErrorCode::invalid_argument, "full grid needs at least 3 nodes per axis");
    if (double(nf_) * nf_ * nf_ * nb_ > 4e9) fail(ErrorCode::invalid_argument, "full grid too large");
    fwd_ = s.fiber_action();
    inv_ = int_inverse(fwd_);
    nbr_.resize(size());
    for (std::size_t idx = 0; idx < size(); ++idx) {
        const auto c = coords(idx);
        auto& nb = nbr_[idx];
        for (int a = 0; a < 4; ++a)
            for (int sg = 0; sg < 2; ++sg) {
                std::array<long long, 4> q{c[0], c[1], c[2], c[3]};
                q[a] += sg == 0 ? 1 : -1;
                nb[2 * a + sg] = static_cast<std::uint32_t>(index(q[0], q[1], q[2], q[3]));
            }
        for (int p = 0; p < 6; ++p)
            for (int j = 0; j < 4; ++j) {
                std::array<long long, 4> q{c[0], c[1], c[2], c[3]};
                q[kPairs[p][0]] += kSigns[j][0];
                q[kPairs[p][1]] += kSigns[j][1];
                nb[8 + 4 * p + j] = static_cast<std::uint32_t>(index(q[0], q[1], q[2], q[3]));
            }
    }
}

std::size_t FullGrid::index(long long k1, long long k2, long long k3, long long m) const
{
    std::array<long long, 3> k{k1, k2, k3};
    // (s, sigma + 1) = f0(M^{-T} s, sigma)
    while (m >= nb_) {
        k = mulv(inv_, k);
        m -= nb_;
    }
    while (m < 0) {
        k = mulv(fwd_, k);
        m += nb_;
    }
    for (auto& v : k) v = pmod(v, nf_);
    return ((std::size_t(m) * nf_ + k[2]) * nf_ + k[1]) * nf_ + k[0];
}

std::array<int, 4> FullGrid::coords(std::size_t idx) const
{
    std::array<int, 4> c{};
    c[0] = static_cast<int>(idx % nf_);
    idx /= nf_;
    c[1] = static_cast<int>(idx % nf_);
    idx /= nf_;
    c[2] = static_cast<int>(idx % nf_);
    c[3] = static_cast<int>(idx / nf_);
    return c;
}

UnitCoords FullGrid::unit(std::size_t idx) const
{
    const auto c = coords(idx);
    return {double(c[0]) / nf_, double(c[1]) / nf_, double(c[2]) / nf_, double(c[3]) / nb_};
}

// ---------------------------------------------------------------- full flow

FullFlow::FullFlow(const Surface& s, int n_fiber, int n_base, const std::function<double(const Point&)>& rho,
                   StepOptions opt, MetricField omega_lf)
    : surface_(s),
      grid_(s, n_fiber, n_base),
      lf_field_(omega_lf ? std::move(omega_lf) : form_field(s, FormKind::tricerri)),
      workers_(std::max(1, opt.workers)),
      stepper_([this](double t, const std::vector<double>& y, std::vector<double>& out) { ma_rhs(t, y, out); },
               [this](double t, const std::vector<double>& y) { return spectral_bound(t, y); }, opt)
{
    const auto& B = s.domain().basis;
    double det = 0;
    for (int j = 0; j < 3; ++j) det += B[0][j] * (B[1][(j + 1) % 3] * B[2][(j + 2) % 3] - B[1][(j + 2) % 3] * B[2][(j + 1) % 3]);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
            binv_[i][j] = (B[i1][j1] * B[i2][j2] - B[i1][j2] * B[i2][j1]) / det;
        }

    const std::size_t n = grid_.size();
    nodes_.resize(n);
    const MetricField inf = form_field(s, FormKind::alpha);
    std::vector<Point> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = grid_.point(i);
    std::vector<Point> sample;
    for (std::size_t i = 0; i < n; i += std::max<std::size_t>(1, n / 64)) sample.push_back(pts[i]);
    const VolumeDensity vol = volume_density(s, lf_field_, sample);
    phi_.resize(n);
    parallel_for(n, workers_, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const Point& p = pts[i];
            nodes_[i] = {p, 1 / (s.period() * p.y2), lf_field_(p), inf(p), vol.coefficient(p)};
            phi_[i] = rho(p);
        }
    });
    for (double v : phi_)
        if (!std::isfinite(v)) fail(ErrorCode::invalid_initial_data, "initial data is not finite");
    const double defect = wrap_defect(rho);
    if (defect > 1e-9)
        fail(ErrorCode::invalid_initial_data,
             "initial data is not Gamma-invariant across the grid identifications (defect " + std::to_string(defect) + ")");
    std::vector<double> tmp;
    try {
        ma_rhs(0, phi_, tmp);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::positivity_loss)
            fail(ErrorCode::invalid_initial_data, std::string("initial metric is not positive: ") + e.what());
        throw;
    }
}

Point FullGrid::point(std::size_t idx) const { return surface_.from_unit(unit(idx)); }

double FullFlow::wrap_defect(const std::function<double(const Point&)>& f) const
{
    double worst = 0;
    const int nf = grid_.n_fiber(), nb = grid_.n_base();
    for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
        const auto c = grid_.coords(idx);
        const bool edge = c[3] == 0 || c[3] == nb - 1 || c[0] == 0 || c[0] == nf - 1 || c[1] == 0 || c[1] == nf - 1 ||
                          c[2] == 0 || c[2] == nf - 1;
        if (!edge) continue;
        for (int a = 0; a < 4; ++a)
            for (int sg : {1, -1}) {
                std::array<int, 4> q = c;
                q[a] += sg;
                const UnitCoords u{double(q[0]) / nf, double(q[1]) / nf, double(q[2]) / nf, double(q[3]) / nb};
                const bool outside = q[a] < 0 || q[a] >= (a == 3 ? nb : nf);
                if (!outside) continue;
                const double cover = f(surface_.from_unit(u));
                const double here = phi_[grid_.neighbours(idx)[2 * a + (sg == 1 ? 0 : 1)]];
                worst = std::max(worst, std::abs(cover - here));
            }
    }
    return worst;
}

Metric2 FullFlow::hessian(const std::vector<double>& phi, std::size_t node) const
{
    const auto& nb = grid_.neighbours(node);
    const double hf = 1.0 / grid_.n_fiber(), hb = 1.0 / grid_.n_base();
    const double h[4] = {hf, hf, hf, hb};
    const double c = phi[node];
    double HX[4][4];
    for (int a = 0; a < 4; ++a) HX[a][a] = (phi[nb[2 * a]] - 2 * c + phi[nb[2 * a + 1]]) / (h[a] * h[a]);
    for (int p = 0; p < 6; ++p) {
        const int a = kPairs[p][0], b = kPairs[p][1];
        const std::size_t o = 8 + 4 * p;
        const double v = (phi[nb[o]] - phi[nb[o + 1]] - phi[nb[o + 2]] + phi[nb[o + 3]]) / (4 * h[a] * h[b]);
        HX[a][b] = HX[b][a] = v;
    }
    const double dsig = (phi[nb[6]] - phi[nb[7]]) / (2 * hb);
    const NodeData& nd = nodes_[node];
    // J[a][b] = dX_a / dxi_b, X = (s1, s2, s3, sigma), xi = (x1, y1, x2, y2)
    double J[4][4] = {};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) J[a][b] = binv_[a][b];
    J[3][3] = nd.inv_ly;
    double T[4][4] = {}, Hx[4][4] = {};
    for (int a = 0; a < 4; ++a)
        for (int d = 0; d < 4; ++d)
            for (int b = 0; b < 4; ++b) T[a][d] += HX[a][b] * J[b][d];
    for (int c2 = 0; c2 < 4; ++c2)
        for (int d = 0; d < 4; ++d)
            for (int a = 0; a < 4; ++a) Hx[c2][d] += J[a][c2] * T[a][d];
    Hx[3][3] += -surface_.period() * nd.inv_ly * nd.inv_ly * dsig;
    return {cplx(0.25 * (Hx[0][0] + Hx[1][1]), 0), 0.25 * cplx(Hx[0][2] + Hx[1][3], Hx[0][3] - Hx[1][2]),
            cplx(0.25 * (Hx[2][2] + Hx[3][3]), 0)};
}

Metric2 FullFlow::reference_at(double t, std::size_t node) const
{
    const double e = std::exp(-t);
    return e * nodes_[node].lf + (1 - e) * nodes_[node].inf;
}

Metric2 FullFlow::metric_at(double t, const std::vector<double>& phi, std::size_t node) const
{
    return reference_at(t, node) + hessian(phi, node);
}

void FullFlow::ma_rhs(double t, const std::vector<double>& phi, std::vector<double>& out) const
{
    const std::size_t n = grid_.size();
    if (phi.size() != n) fail(ErrorCode::invalid_argument, "potential has the wrong size");
    out.resize(n);
    const double et = std::exp(t);
    parallel_for(n, workers_, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const Metric2 g = metric_at(t, phi, i);
            const double d = det(g).real();
            if (!(g.g11.real() > 0) || !(d > 0)) {
                const auto c = grid_.coords(i);
                std::ostringstream msg;
                msg << "metric not positive at node (" << c[0] << "," << c[1] << "," << c[2] << "," << c[3]
                    << "), t = " << t;
                fail(ErrorCode::positivity_loss, msg.str());
            }
            out[i] = std::log(et * 2 * d / nodes_[i].vol) - phi[i];
        }
    });
}

double FullFlow::spectral_bound(double t, const std::vector<double>& phi) const
{
    const std::size_t n = grid_.size();
    const double hf = 1.0 / grid_.n_fiber(), hb = 1.0 / grid_.n_base();
    const double h[4] = {hf, hf, hf, hb};
    std::vector<double> local(n, 0.0);
    parallel_for(n, workers_, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const Metric2 g = metric_at(t, phi, i);
            const double d = det(g).real();
            if (!(d > 0)) continue;
            const double g11 = g.g11.real(), g22 = g.g22.real(), re = g.g12.real(), im = g.g12.imag();
            // tr_g(i ddbar f) = sum R[c][d] f_{xi_c xi_d}
            double R[4][4] = {};
            R[0][0] = R[1][1] = g22 / (4 * d);
            R[2][2] = R[3][3] = g11 / (4 * d);
            R[0][2] = R[2][0] = R[1][3] = R[3][1] = -re / (4 * d);
            R[0][3] = R[3][0] = -im / (4 * d);
            R[1][2] = R[2][1] = im / (4 * d);
            double J[4][4] = {};
            for (int a = 0; a < 3; ++a)
                for (int c = 0; c < 3; ++c) J[a][c] = binv_[a][c];
            J[3][3] = nodes_[i].inv_ly;
            double C[4][4] = {};
            for (int a = 0; a < 4; ++a)
                for (int b2 = 0; b2 < 4; ++b2)
                    for (int c = 0; c < 4; ++c)
                        for (int dd = 0; dd < 4; ++dd) C[a][b2] += J[a][c] * R[c][dd] * J[b2][dd];
            double s = 1 + std::abs(R[3][3] * surface_.period() * nodes_[i].inv_ly * nodes_[i].inv_ly) / hb;
            for (int a = 0; a < 4; ++a) {
                s += 4 * std::abs(C[a][a]) / (h[a] * h[a]);
                for (int b2 = a + 1; b2 < 4; ++b2) s += 2 * std::abs(C[a][b2]) / (h[a] * h[b2]);
            }
            local[i] = s;
        }
    });
    return *std::max_element(local.begin(), local.end());
}

void FullFlow::advance_to(double t_end)
{
    if (t_end < t_) fail(ErrorCode::invalid_argument, "cannot integrate backwards in time");
    stepper_.advance(t_, phi_, t_end);
}

Snapshot FullFlow::snapshot() const
{
    Snapshot s{t_, phi_, {}};
    ma_rhs(t_, phi_, s.phidot);
    return s;
}

namespace {

std::array<double, 4> catmull_rom(double t)
{
    const double t2 = t * t, t3 = t2 * t;
    return {0.5 * (-t3 + 2 * t2 - t), 0.5 * (3 * t3 - 5 * t2 + 2), 0.5 * (-3 * t3 + 4 * t2 + t), 0.5 * (t3 - t2)};
}

struct FullMetricModel final : MetricField::Model {
    Surface surface;
    FullGrid grid;
    MetricField reference;
    double theta, L;
    // Gamma-invariant rescalings: H11 / y, H22 y^2, H12 e^{i theta u / L} y^{1/2}
    std::vector<double> a, b;
    std::vector<cplx> c;

    FullMetricModel(Surface s, FullGrid g, MetricField ref)
        : surface(std::move(s)), grid(std::move(g)), reference(std::move(ref)), theta(surface.mu_arg()),
          L(surface.period())
    {
    }

    Metric2 value(const Point& p) const override
    {
        const auto [q, elem] = surface.reduce(p);
        const UnitCoords u = surface.to_unit(q);
        const double nf = grid.n_fiber(), nb = grid.n_base();
        const double x[4] = {u[0] * nf, u[1] * nf, u[2] * nf, u[3] * nb};
        long long base[4];
        std::array<double, 4> w[4];
        for (int d = 0; d < 4; ++d) {
            base[d] = static_cast<long long>(std::floor(x[d]));
            w[d] = catmull_rom(x[d] - double(base[d]));
        }
        double A = 0, Bv = 0;
        cplx C = 0;
        for (int i0 = 0; i0 < 4; ++i0)
            for (int i1 = 0; i1 < 4; ++i1)
                for (int i2 = 0; i2 < 4; ++i2)
                    for (int i3 = 0; i3 < 4; ++i3) {
                        const double wt = w[0][i0] * w[1][i1] * w[2][i2] * w[3][i3];
                        const std::size_t idx =
                            grid.index(base[0] + i0 - 1, base[1] + i1 - 1, base[2] + i2 - 1, base[3] + i3 - 1);
                        A += wt * a[idx];
                        Bv += wt * b[idx];
                        C += wt * c[idx];
                    }
        const double y = q.y2, uu = std::log(y);
        Metric2 H{cplx(A * y, 0), C * std::exp(cplx(0, -theta * uu / L)) / std::sqrt(y), cplx(Bv / (y * y), 0)};
        Metric2 g = reference(q) + H;
        if (!positive_definite(g)) fail(ErrorCode::positivity_loss, "reconstructed metric not positive definite");
        return elem.map.pullback(g);
    }
};

}  // namespace

MetricField FullFlow::metric() const
{
    auto model = std::make_shared<FullMetricModel>(surface_, grid_, omega_tilde(surface_, lf_field_, t_));
    const std::size_t n = grid_.size();
    model->a.resize(n);
    model->b.resize(n);
    model->c.resize(n);
    const double theta = surface_.mu_arg(), L = surface_.period();
    for (std::size_t i = 0; i < n; ++i) {
        const Metric2 H = hessian(phi_, i);
        const double y = nodes_[i].p.y2;
        model->a[i] = H.g11.real() / y;
        model->b[i] = H.g22.real() * y * y;
        model->c[i] = H.g12 * std::exp(cplx(0, theta * std::log(y) / L)) * std::sqrt(y);
    }
    return MetricField(model, "full-flow");
}

}  // namespace inoue

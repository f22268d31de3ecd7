#include "inoue/calculus.hpp"

#include <cmath>
#include <sstream>

namespace inoue {

namespace {

void require_pd(const Metric2& g, const Point& p)
{
    if (!positive_definite(g)) {
        std::ostringstream os;
        os.precision(17);
        os << "metric not positive definite at (" << p.x1 << ", " << p.y1 << ", " << p.x2 << ", " << p.y2 << ")";
        fail(ErrorCode::singular_metric, os.str());
    }
}

struct Stencil1 {
    std::vector<std::pair<int, double>> taps;
};

// central difference stencils in units of h^-k, offsets in units of h
const Stencil1& stencil(int k)
{
    static const Stencil1 s[4] = {
        {{{0, 1.0}}},
        {{{-1, -0.5}, {1, 0.5}}},
        {{{-1, 1.0}, {0, -2.0}, {1, 1.0}}},
        {{{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}}},
    };
    return s[k];
}

// D^e f at p by a tensor-product central stencil of step h (per variable scaled).
template <class Eval, class Acc>
Acc mixed_difference(const Eval& f, const Point& p, const std::array<int, kJetVars>& e, double h, Acc zero)
{
    std::array<double, kJetVars> hv{};
    for (int v = 0; v < kJetVars; ++v) hv[v] = h * std::max(1.0, std::abs(p[v]));
    Acc acc = zero;
    const auto& s0 = stencil(e[0]).taps;
    const auto& s1 = stencil(e[1]).taps;
    const auto& s2 = stencil(e[2]).taps;
    const auto& s3 = stencil(e[3]).taps;
    for (auto [o0, w0] : s0)
        for (auto [o1, w1] : s1)
            for (auto [o2, w2] : s2)
                for (auto [o3, w3] : s3) {
                    Point q = p;
                    q.x1 += o0 * hv[0];
                    q.y1 += o1 * hv[1];
                    q.x2 += o2 * hv[2];
                    q.y2 += o3 * hv[3];
                    acc = acc + (w0 * w1 * w2 * w3) * f(q);
                }
    double scale = 1;
    for (int v = 0; v < kJetVars; ++v) scale *= std::pow(hv[v], e[v]);
    return (1.0 / scale) * acc;
}

template <class Eval, class Acc>
Acc richardson(const Eval& f, const Point& p, const std::array<int, kJetVars>& e, double h, int levels, Acc zero)
{
    std::vector<Acc> col;
    for (int l = 0; l <= levels; ++l) col.push_back(mixed_difference(f, p, e, h / double(1 << l), zero));
    double factor = 4;
    for (int l = 1; l <= levels; ++l) {
        for (int i = 0; i + l <= levels; ++i)
            col[i] = (1.0 / (factor - 1)) * ((factor * col[i + 1]) + (-1.0 * col[i]));
        factor *= 4;
    }
    return col[0];
}

double step_for(int degree, double h)
{
    static constexpr double mult[4] = {1, 1, 4, 15};
    return h * mult[degree];
}

bool use_jets(bool has_jet, const DiffOptions& opt, const char* what)
{
    if (opt.backend == DiffBackend::finite_difference) return false;
    if (opt.backend == DiffBackend::jet && !has_jet)
        fail(ErrorCode::invalid_argument, std::string(what) + " has no jet evaluator");
    return has_jet;
}

struct Vec3c {
    cplx a, b, c;
};
Vec3c operator+(const Vec3c& x, const Vec3c& y) { return {x.a + y.a, x.b + y.b, x.c + y.c}; }
Vec3c operator*(double s, const Vec3c& x) { return {s * x.a, s * x.b, s * x.c}; }

}  // namespace

Herm2<Jet> metric_jet(const MetricField& g, const Point& p, int order, const DiffOptions& opt)
{
    if (use_jets(g.has_jet(), opt, "metric field")) {
        Herm2<Jet> h = g.jet(p, order);
        require_pd({h.g11.value(), h.g12.value(), h.g22.value()}, p);
        // enforce Hermitian diagonal
        h.g11 = real(h.g11);
        h.g22 = real(h.g22);
        return h;
    }
    auto eval = [&](const Point& q) {
        Metric2 m = g(q);
        require_pd(m, q);
        return Vec3c{m.g11, m.g12, m.g22};
    };
    const auto& t = jet_tables::get();
    Herm2<Jet> h{Jet(0.0).truncated(order), Jet(0.0).truncated(order), Jet(0.0).truncated(order)};
    static constexpr double fact[] = {1, 1, 2, 6};
    for (int k = 0; k < t.upto[order]; ++k) {
        const auto& e = t.exps[k];
        const int deg = t.degree[k];
        Vec3c d = deg == 0 ? eval(p) : richardson(eval, p, e, step_for(deg, opt.h), opt.richardson, Vec3c{});
        double f = fact[e[0]] * fact[e[1]] * fact[e[2]] * fact[e[3]];
        h.g11.coeff(k) = d.a.real() / f;
        h.g12.coeff(k) = d.b / f;
        h.g22.coeff(k) = d.c.real() / f;
    }
    return h;
}

Jet scalar_jet(const ScalarField& fld, const Point& p, int order, const DiffOptions& opt)
{
    if (use_jets(fld.has_jet(), opt, "scalar field")) return fld.jet(p, order);
    auto eval = [&](const Point& q) { return fld(q); };
    const auto& t = jet_tables::get();
    Jet r = Jet(0.0).truncated(order);
    static constexpr double fact[] = {1, 1, 2, 6};
    for (int k = 0; k < t.upto[order]; ++k) {
        const auto& e = t.exps[k];
        const int deg = t.degree[k];
        double d = deg == 0 ? eval(p) : richardson(eval, p, e, step_for(deg, opt.h), opt.richardson, 0.0);
        r.coeff(k) = d / (fact[e[0]] * fact[e[1]] * fact[e[2]] * fact[e[3]]);
    }
    return r;
}

cplx Tensor::operator()(std::initializer_list<int> idx) const
{
    int k = 0;
    for (int i : idx) k = 2 * k + i;
    return c[k];
}

double Tensor::max_abs() const
{
    double m = 0;
    for (const auto& x : c) m = std::max(m, std::abs(x));
    return m;
}

double tensor_norm(const Tensor& X, const Metric2& g)
{
    const int r = X.rank();
    const cplx D = det(g);
    // ginv[i][j] = (G^{-1})_{ij}
    const cplx gi[2][2] = {{g.g22 / D, -g.g12 / D}, {-std::conj(g.g12) / D, g.g11 / D}};
    const cplx G[2][2] = {{g.g11, g.g12}, {std::conj(g.g12), g.g22}};
    const int n = 1 << r;
    cplx sum = 0;
    for (int a = 0; a < n; ++a) {
        if (X.c[a] == cplx{}) continue;
        for (int b = 0; b < n; ++b) {
            cplx w = X.c[a] * std::conj(X.c[b]);
            for (int pos = 0; pos < r && w != cplx{}; ++pos) {
                const int ia = (a >> (r - 1 - pos)) & 1, ib = (b >> (r - 1 - pos)) & 1;
                switch (X.kinds[pos]) {
                case IndexKind::down: w *= gi[ib][ia]; break;
                case IndexKind::down_bar: w *= gi[ia][ib]; break;
                case IndexKind::up: w *= G[ia][ib]; break;
                case IndexKind::up_bar: w *= G[ib][ia]; break;
                }
            }
            sum += w;
        }
    }
    return std::sqrt(std::max(0.0, sum.real()));
}

namespace {

struct JTensor {
    std::vector<IndexKind> kinds;
    std::vector<Jet> c;

    int rank() const { return static_cast<int>(kinds.size()); }
    Tensor value() const
    {
        Tensor t;
        t.kinds = kinds;
        for (const auto& j : c) t.c.push_back(j.value());
        return t;
    }
};

int set_digit(int idx, int rank, int pos, int v)
{
    const int bit = rank - 1 - pos;
    return (idx & ~(1 << bit)) | (v << bit);
}

// Chern connection data as jets.
struct Geometry {
    Jet G[2][2];
    Jet gu[2][2];  // g^{p qbar}
    Jet dG[2][2][2];     // dG[i][k][q] = d_i g_{k qbar}
    Jet gamma[2][2][2];  // gamma[p][i][k]
};

Geometry geometry(const Herm2<Jet>& h)
{
    Geometry g;
    g.G[0][0] = h.g11;
    g.G[0][1] = h.g12;
    g.G[1][0] = conj(h.g12);
    g.G[1][1] = h.g22;
    Jet D = g.G[0][0] * g.G[1][1] - g.G[0][1] * g.G[1][0];
    Jet Dinv = 1.0 / D;
    // g^{pq} = (G^{-1})_{qp}
    g.gu[0][0] = g.G[1][1] * Dinv;
    g.gu[1][1] = g.G[0][0] * Dinv;
    g.gu[0][1] = -g.G[1][0] * Dinv;
    g.gu[1][0] = -g.G[0][1] * Dinv;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int q = 0; q < 2; ++q) g.dG[i][k][q] = g.G[k][q].dz(i);
    for (int p = 0; p < 2; ++p)
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) g.gamma[p][i][k] = g.gu[p][0] * g.dG[i][k][0] + g.gu[p][1] * g.dG[i][k][1];
    return g;
}

JTensor covariant(const JTensor& X, const Geometry& geo, bool holo)
{
    const int r = X.rank();
    JTensor out;
    out.kinds.push_back(holo ? IndexKind::down : IndexKind::down_bar);
    out.kinds.insert(out.kinds.end(), X.kinds.begin(), X.kinds.end());
    const int n = 1 << r;
    out.c.resize(2 * n);
    for (int d = 0; d < 2; ++d)
        for (int idx = 0; idx < n; ++idx) {
            Jet v = holo ? X.c[idx].dz(d) : X.c[idx].dzbar(d);
            for (int pos = 0; pos < r; ++pos) {
                const int a = (idx >> (r - 1 - pos)) & 1;
                const IndexKind kind = X.kinds[pos];
                for (int q = 0; q < 2; ++q) {
                    const Jet& Xq = X.c[set_digit(idx, r, pos, q)];
                    if (holo && kind == IndexKind::up) v += geo.gamma[a][d][q] * Xq;
                    if (holo && kind == IndexKind::down) v -= geo.gamma[q][d][a] * Xq;
                    if (!holo && kind == IndexKind::up_bar) v += conj(geo.gamma[a][d][q]) * Xq;
                    if (!holo && kind == IndexKind::down_bar) v -= conj(geo.gamma[q][d][a]) * Xq;
                }
            }
            out.c[d * n + idx] = v;
        }
    return out;
}

Metric2 value_of(const Herm2<Jet>& h) { return {h.g11.value(), h.g12.value(), h.g22.value()}; }

}  // namespace

ChernPackage chern_package(const MetricField& g, const Point& p, ChernLevel level, const DiffOptions& opt)
{
    const int order = static_cast<int>(level);
    Herm2<Jet> h = metric_jet(g, p, order, opt);
    Geometry geo = geometry(h);

    ChernPackage pkg;
    pkg.point = p;
    pkg.g = value_of(h);

    JTensor gamma{{IndexKind::up, IndexKind::down, IndexKind::down}, std::vector<Jet>(8)};
    JTensor tors{{IndexKind::up, IndexKind::down, IndexKind::down}, std::vector<Jet>(8)};
    JTensor tlow{{IndexKind::down, IndexKind::down, IndexKind::down_bar}, std::vector<Jet>(8)};
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) {
                gamma.c[a * 4 + i * 2 + k] = geo.gamma[a][i][k];
                tors.c[a * 4 + i * 2 + k] = geo.gamma[a][i][k] - geo.gamma[a][k][i];
            }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l)
                tlow.c[i * 4 + j * 2 + l] = geo.G[0][l] * tors.c[0 * 4 + i * 2 + j] + geo.G[1][l] * tors.c[4 + i * 2 + j];
    pkg.gamma = gamma.value();
    pkg.torsion = tors.value();
    pkg.torsion_lowered = tlow.value();

    if (order < 2) return pkg;

    JTensor rm{{IndexKind::down, IndexKind::down_bar, IndexKind::down, IndexKind::down_bar}, std::vector<Jet>(16)};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    Jet v = -(geo.G[k][l].dz(i).dzbar(j));
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            v += geo.gu[a][b] * geo.dG[i][k][b] * conj(geo.dG[j][l][a]);
                    rm.c[i * 8 + j * 4 + k * 2 + l] = v;
                }
    pkg.curvature = rm.value();

    Jet logdet = log(real(geo.G[0][0] * geo.G[1][1] - geo.G[0][1] * geo.G[1][0]));
    cplx ric[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) ric[i][j] = -logdet.dz(i).dzbar(j).value();
    pkg.ricci = {ric[0][0].real(), ric[0][1], ric[1][1].real()};

    cplx rc[2][2] = {};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) rc[i][j] += geo.gu[k][l].value() * pkg.curvature({i, j, k, l});
    pkg.ricci_from_curvature = {rc[0][0], rc[0][1], rc[1][1]};

    cplx s = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s += geo.gu[i][j].value() * ric[i][j];
    pkg.scalar = s.real();

    if (order < 3) return pkg;

    JTensor dbar_t = covariant(tors, geo, false);
    JTensor nabla_t = covariant(tors, geo, true);
    pkg.dbar_torsion = dbar_t.value();
    pkg.nabla_torsion = nabla_t.value();
    pkg.dbar_dbar_torsion = covariant(dbar_t, geo, false).value();
    pkg.nabla_dbar_torsion = covariant(dbar_t, geo, true).value();
    pkg.nabla_rm = covariant(rm, geo, true).value();
    pkg.nablabar_rm = covariant(rm, geo, false).value();
    pkg.has_derivatives = true;
    return pkg;
}

Tensor christoffel(const MetricField& g, const Point& p, const DiffOptions& opt)
{
    return chern_package(g, p, ChernLevel::connection, opt).gamma;
}

TorsionArrays torsion(const MetricField& g, const Point& p, const DiffOptions& opt)
{
    ChernPackage pkg = chern_package(g, p, ChernLevel::connection, opt);
    return {pkg.torsion, pkg.torsion_lowered};
}

RicciResult chern_ricci(const MetricField& g, const Point& p, const DiffOptions& opt)
{
    ChernPackage pkg = chern_package(g, p, ChernLevel::curvature, opt);
    return {pkg.ricci, pkg.scalar};
}

Tensor curvature(const MetricField& g, const Point& p, const DiffOptions& opt)
{
    return chern_package(g, p, ChernLevel::curvature, opt).curvature;
}

CovariantDerivatives covariant_derivatives(const MetricField& g, const Point& p, const DiffOptions& opt)
{
    ChernPackage pkg = chern_package(g, p, ChernLevel::full, opt);
    return {pkg.nabla_torsion, pkg.dbar_torsion,  pkg.nabla_dbar_torsion, pkg.dbar_dbar_torsion,
            pkg.nabla_rm,      pkg.nablabar_rm};
}

TensorNorms tensor_norms(const ChernPackage& pkg)
{
    TensorNorms n;
    n.torsion = tensor_norm(pkg.torsion, pkg.g);
    if (!pkg.curvature.c.empty()) n.rm = tensor_norm(pkg.curvature, pkg.g);
    if (pkg.has_derivatives) {
        n.dbar_torsion = tensor_norm(pkg.dbar_torsion, pkg.g);
        n.nabla_torsion = tensor_norm(pkg.nabla_torsion, pkg.g);
        const double a = tensor_norm(pkg.nabla_rm, pkg.g), b = tensor_norm(pkg.nablabar_rm, pkg.g);
        n.nabla_rm = std::sqrt(a * a + b * b);
        n.nabla_dbar_torsion = tensor_norm(pkg.nabla_dbar_torsion, pkg.g);
        n.dbar_dbar_torsion = tensor_norm(pkg.dbar_dbar_torsion, pkg.g);
    }
    return n;
}

double trace(const MetricField& w1, const MetricField& w2, const Point& p)
{
    Metric2 a = w1(p), b = w2(p);
    require_pd(a, p);
    require_pd(b, p);
    return trace_against(a, b);
}

Metric2 ddbar(const ScalarField& f, const Point& p, const DiffOptions& opt)
{
    Jet j = scalar_jet(f, p, 2, opt);
    return {j.dz(0).dzbar(0).value(), j.dz(0).dzbar(1).value(), j.dz(1).dzbar(1).value()};
}

double closedness_defect(const MetricField& g, const Point& p, const DiffOptions& opt)
{
    Herm2<Jet> h = metric_jet(g, p, 1, opt);
    Jet G[2][2] = {{h.g11, h.g12}, {conj(h.g12), h.g22}};
    double worst = 0;
    for (int j = 0; j < 2; ++j) {
        cplx a = G[0][j].dz(1).value(), b = G[1][j].dz(0).value();
        worst = std::max(worst, std::abs(a - b));
    }
    return worst;
}

FormDerivative form_covariant_derivative(const MetricField& g, const MetricField& form, const Point& p,
                                         const DiffOptions& opt)
{
    Geometry geo = geometry(metric_jet(g, p, 2, opt));
    Herm2<Jet> a;
    if (use_jets(form.has_jet(), opt, "form")) {
        a = form.jet(p, 2);
    } else {
        auto eval = [&](const Point& q) {
            Metric2 m = form(q);
            return Vec3c{m.g11, m.g12, m.g22};
        };
        const auto& t = jet_tables::get();
        a = {Jet(0.0).truncated(1), Jet(0.0).truncated(1), Jet(0.0).truncated(1)};
        for (int k = 0; k < t.upto[1]; ++k) {
            Vec3c d = t.degree[k] == 0 ? eval(p) : richardson(eval, p, t.exps[k], opt.h, opt.richardson, Vec3c{});
            a.g11.coeff(k) = d.a;
            a.g12.coeff(k) = d.b;
            a.g22.coeff(k) = d.c;
        }
    }
    JTensor X{{IndexKind::down, IndexKind::down_bar}, {a.g11, a.g12, conj(a.g12), a.g22}};
    return {covariant(X, geo, true).value(), covariant(X, geo, false).value()};
}

double calabi_quantity(const ChernPackage& pkg, const ChernPackage& reference)
{
    Tensor psi = pkg.gamma;
    for (size_t k = 0; k < psi.c.size(); ++k) psi.c[k] -= reference.gamma.c[k];
    const double n = tensor_norm(psi, pkg.g);
    return n * n;
}

}  // namespace inoue

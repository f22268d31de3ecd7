#include "inoue/gh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "inoue/errors.hpp"
#include "inoue/parallel.hpp"

namespace inoue {

double segment_length(const MetricField& g, const Point& a, const Point& b)
{
    const Point mid{0.5 * (a.x1 + b.x1), 0.5 * (a.y1 + b.y1), 0.5 * (a.x2 + b.x2), 0.5 * (a.y2 + b.y2)};
    const cplx dz1(b.x1 - a.x1, b.y1 - a.y1), dz2(b.x2 - a.x2, b.y2 - a.y2);
    const Metric2 m = g(mid);
    const double q = m.g11.real() * std::norm(dz1) + 2 * (m.g12 * dz1 * std::conj(dz2)).real() + m.g22.real() * std::norm(dz2);
    return std::sqrt(std::max(0.0, 2 * q));
}

namespace {

std::size_t node_index(int nf, long long k1, long long k2, long long k3, long long m)
{
    return ((std::size_t(m) * nf + k3) * nf + k2) * nf + k1;
}

long long wrap(long long a, long long n) { return ((a % n) + n) % n; }

// Grid node closest to the reduction of a cover point; nb = 0 ignores the layer.
std::size_t locate(const Surface& s, const Point& p, int nf, int nb, double* snap)
{
    const auto [q, elem] = s.reduce(p);
    (void)elem;
    const UnitCoords u = s.to_unit(q);
    long long k[3];
    double err = 0;
    for (int a = 0; a < 3; ++a) {
        const double x = u[a] * nf;
        const double r = std::round(x);
        err = std::max(err, std::abs(x - r));
        k[a] = wrap(static_cast<long long>(r), nf);
    }
    long long m = 0;
    if (nb > 0) {
        const double x = u[3] * nb;
        const double r = std::round(x);
        err = std::max(err, std::abs(x - r));
        m = wrap(static_cast<long long>(r), nb);
    }
    if (snap) *snap = std::max(*snap, err);
    return node_index(nf, k[0], k[1], k[2], m);
}

bool leaves_cell(const UnitCoords& u)
{
    for (double x : u)
        if (x < -1e-12 || x > 1 - 1e-12) return true;
    return false;
}

}  // namespace

GraphLayout fiber_layout(const Surface& s, int n, double y2)
{
    if (n < 2) fail(ErrorCode::invalid_argument, "fiber graph needs n >= 2");
    if (!(y2 > 0)) fail(ErrorCode::invalid_argument, "y2 must be positive");
    GraphLayout g(s);
    const double sigma = s.to_unit(s.reduce(Point{0, 0, 0, y2}).first)[3];
    g.nodes = std::size_t(n) * n * n;
    for (int d1 = -1; d1 <= 1; ++d1)
        for (int d2 = -1; d2 <= 1; ++d2)
            for (int d3 = -1; d3 <= 1; ++d3)
                if (d1 || d2 || d3) g.steps.push_back({double(d1) / n, double(d2) / n, double(d3) / n, 0});
    g.unit.resize(g.nodes);
    for (std::size_t i = 0; i < g.nodes; ++i)
        g.unit[i] = {double(i % n) / n, double((i / n) % n) / n, double(i / (std::size_t(n) * n)) / n, sigma};
    g.offsets.push_back(0);
    for (std::size_t i = 0; i < g.nodes; ++i) {
        for (std::size_t e = 0; e < g.steps.size(); ++e) {
            UnitCoords u = g.unit[i];
            for (int a = 0; a < 4; ++a) u[a] += g.steps[e][a];
            const bool out = leaves_cell(u);
            std::size_t tgt;
            if (s.kind() == SurfaceKind::sm || !out) {
                // S_M fiber translations act on the unit chart by integer shifts
                tgt = node_index(n, wrap(std::llround(u[0] * n), n), wrap(std::llround(u[1] * n), n),
                                 wrap(std::llround(u[2] * n), n), 0);
            } else {
                tgt = locate(s, s.from_unit(u), n, 0, nullptr);
            }
            g.wrap_edges += out;
            g.targets.push_back(static_cast<std::uint32_t>(tgt));
            g.step.push_back(static_cast<std::uint8_t>(e));
        }
        g.offsets.push_back(static_cast<std::uint32_t>(g.targets.size()));
    }
    return g;
}

GraphLayout quotient_layout(const Surface& s, int n_fiber, int n_base)
{
    if (n_fiber < 2 || n_base < 3) fail(ErrorCode::invalid_argument, "quotient graph needs n_fiber >= 2, n_base >= 3");
    GraphLayout g(s);
    const int nf = n_fiber, nb = n_base;
    g.nodes = std::size_t(nf) * nf * nf * nb;
    if (g.nodes > std::numeric_limits<std::uint32_t>::max()) fail(ErrorCode::invalid_argument, "graph too large");
    for (int d1 = -1; d1 <= 1; ++d1)
        for (int d2 = -1; d2 <= 1; ++d2)
            for (int d3 = -1; d3 <= 1; ++d3)
                for (int d4 = -1; d4 <= 1; ++d4)
                    if (d1 || d2 || d3 || d4)
                        g.steps.push_back({double(d1) / nf, double(d2) / nf, double(d3) / nf, double(d4) / nb});
    g.unit.resize(g.nodes);
    g.circle.resize(g.nodes);
    g.section.resize(g.nodes);
    const double L = s.period();
    for (std::size_t i = 0; i < g.nodes; ++i) {
        const std::size_t k1 = i % nf, k2 = (i / nf) % nf, k3 = (i / (std::size_t(nf) * nf)) % nf;
        const std::size_t m = i / (std::size_t(nf) * nf * nf);
        g.unit[i] = {double(k1) / nf, double(k2) / nf, double(k3) / nf, double(m) / nb};
        g.circle[i] = double(m) * L / nb * circle_factor(s);
        g.section[i] = static_cast<std::uint32_t>(node_index(nf, 0, 0, 0, m));
    }
    g.offsets.push_back(0);
    for (std::size_t i = 0; i < g.nodes; ++i) {
        for (std::size_t e = 0; e < g.steps.size(); ++e) {
            UnitCoords u = g.unit[i];
            for (int a = 0; a < 4; ++a) u[a] += g.steps[e][a];
            const bool out = leaves_cell(u);
            std::size_t tgt;
            if (!out) {
                tgt = node_index(nf, std::llround(u[0] * nf), std::llround(u[1] * nf), std::llround(u[2] * nf),
                                 std::llround(u[3] * nb));
            } else {
                tgt = locate(s, s.from_unit(u), nf, nb, nullptr);
            }
            g.wrap_edges += out;
            g.targets.push_back(static_cast<std::uint32_t>(tgt));
            g.step.push_back(static_cast<std::uint8_t>(e));
        }
        g.offsets.push_back(static_cast<std::uint32_t>(g.targets.size()));
    }
    return g;
}

MetricGraph weigh(const GraphLayout& layout, const MetricField& g, int workers)
{
    MetricGraph out;
    out.nodes = layout.nodes;
    out.offsets = layout.offsets;
    out.targets = layout.targets;
    out.wrap_edges = layout.wrap_edges;
    out.circle = layout.circle;
    out.section = layout.section;
    out.weights.assign(layout.targets.size(), 0.0);
    const Surface& s = layout.surface;
    parallel_for(layout.nodes, workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const Point a = s.from_unit(layout.unit[i]);
            for (std::uint32_t k = layout.offsets[i]; k < layout.offsets[i + 1]; ++k) {
                UnitCoords u = layout.unit[i];
                const UnitCoords& d = layout.steps[layout.step[k]];
                for (int c = 0; c < 4; ++c) u[c] += d[c];
                const double w = segment_length(g, a, s.from_unit(u));
                if (!(w > 0) || !std::isfinite(w))
                    fail(ErrorCode::singular_metric, "edge length " + std::to_string(w) + " is not positive");
                out.weights[k] = w;
            }
        }
    });
    return out;
}

std::vector<double> dijkstra(const MetricGraph& g, std::uint32_t source)
{
    if (source >= g.nodes) fail(ErrorCode::invalid_argument, "source out of range");
    std::vector<double> d(g.nodes, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[source] = 0;
    pq.push({0, source});
    while (!pq.empty()) {
        const auto [du, u] = pq.top();
        pq.pop();
        if (du > d[u]) continue;
        for (std::uint32_t k = g.offsets[u]; k < g.offsets[u + 1]; ++k) {
            const std::uint32_t v = g.targets[k];
            const double nd = du + g.weights[k];
            if (nd < d[v]) {
                d[v] = nd;
                pq.push({nd, v});
            }
        }
    }
    for (double x : d)
        if (!std::isfinite(x)) fail(ErrorCode::disconnected, "metric graph is disconnected");
    return d;
}

std::vector<std::uint32_t> pick_sources(std::size_t nodes, int samples, std::uint64_t seed)
{
    std::vector<std::uint32_t> all(nodes);
    for (std::size_t i = 0; i < nodes; ++i) all[i] = static_cast<std::uint32_t>(i);
    if (nodes <= 12 * 12 * 12 || samples <= 0 || std::size_t(samples) >= nodes) return all;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < samples; ++i) {
        const std::size_t j = i + rng() % (nodes - i);
        std::swap(all[i], all[j]);
    }
    all.resize(samples);
    return all;
}

double CircleModel::distance(double a, double b) const
{
    double d = std::fmod(std::abs(a - b), length);
    return std::min(d, length - d);
}

// omega_inf = k dz2 dz2bar / y2^2 with k = 1/4 (S_M) or 1/2 (S+); |du| scales by sqrt(2k)
double circle_factor(const Surface& s) { return s.kind() == SurfaceKind::sm ? 1 / std::sqrt(2.0) : 1.0; }

CircleModel limit_circle(const Surface& s) { return {s.period() * circle_factor(s)}; }

double circle_length(const Surface& s, const MetricField& g, int n, const Point& base)
{
    if (n < 1) fail(ErrorCode::invalid_argument, "circle_length needs n >= 1");
    const double lam = s.scale();
    double total = 0;
    for (int k = 0; k < n; ++k) {
        Point a = base, b = base;
        a.y2 = 1 + (lam - 1) * k / n;
        b.y2 = 1 + (lam - 1) * (k + 1) / n;
        total += segment_length(g, a, b);
    }
    return total;
}

double fiber_diameter(const Surface& s, const MetricField& g, int n, double y2, int samples, std::uint64_t seed,
                      int workers)
{
    const MetricGraph graph = weigh(fiber_layout(s, n, y2), g, workers);
    const auto src = pick_sources(graph.nodes, samples, seed);
    std::vector<double> best(src.size(), 0);
    parallel_for(src.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const auto d = dijkstra(graph, src[i]);
            best[i] = *std::max_element(d.begin(), d.end());
        }
    });
    return *std::max_element(best.begin(), best.end());
}

GhTerms gh_terms(const Surface& s, const MetricGraph& q, int samples, std::uint64_t seed, int workers)
{
    if (q.circle.size() != q.nodes) fail(ErrorCode::invalid_argument, "gh_terms needs a quotient graph");
    const CircleModel circle = limit_circle(s);
    const auto src = pick_sources(q.nodes, samples, seed);
    struct Part {
        double section = 0, shrink = 0, stretch = 0;
    };
    std::vector<Part> parts(src.size());
    parallel_for(src.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const auto d = dijkstra(q, src[i]);
            Part p;
            p.section = d[q.section[src[i]]];
            const double c = q.circle[src[i]];
            for (std::size_t y = 0; y < q.nodes; ++y) {
                const double dc = circle.distance(c, q.circle[y]);
                p.shrink = std::max(p.shrink, dc - d[y]);
                p.stretch = std::max(p.stretch, d[y] - dc);
            }
            parts[i] = p;
        }
    });
    GhTerms t;
    for (const Part& p : parts) {
        t.section = std::max(t.section, p.section);
        t.shrink = std::max(t.shrink, p.shrink);
        t.stretch = std::max(t.stretch, p.stretch);
    }
    std::vector<std::uint32_t> sec(q.section.begin(), q.section.end());
    std::sort(sec.begin(), sec.end());
    sec.erase(std::unique(sec.begin(), sec.end()), sec.end());
    std::vector<Part> sp(sec.size());
    parallel_for(sec.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const auto d = dijkstra(q, sec[i]);
            Part p;
            for (std::uint32_t y : sec) {
                const double dc = circle.distance(q.circle[sec[i]], q.circle[y]);
                p.shrink = std::max(p.shrink, dc - d[y]);
                p.stretch = std::max(p.stretch, d[y] - dc);
            }
            sp[i] = p;
        }
    });
    for (const Part& p : sp) {
        t.shrink_section = std::max(t.shrink_section, p.shrink);
        t.stretch_section = std::max(t.stretch_section, p.stretch);
    }
    t.bound = std::max({t.section, t.shrink, t.shrink_section, 0.5 * t.stretch, 0.5 * t.stretch_section});
    return t;
}

}  // namespace inoue

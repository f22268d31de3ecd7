#pragma once

#include <cstdint>
#include <vector>

#include "inoue/metric_field.hpp"
#include "inoue/surface.hpp"

namespace inoue {

// Length of the straight segment a -> b under g_R = 2 Re(g_{i jbar} dz_i dzbar_j),
// metric evaluated at the midpoint. Semidefinite g is allowed.
double segment_length(const MetricField& g, const Point& a, const Point& b);

// Directed graph in CSR form; nodes are grid points of the unit chart.
struct MetricGraph {
    std::size_t nodes = 0;
    std::vector<std::uint32_t> offsets, targets;
    std::vector<double> weights;
    // edges whose stencil point left the unit cell and was identified back
    std::size_t wrap_edges = 0;
    // circle coordinate u * circle_factor of every node (quotient graphs)
    std::vector<double> circle;
    // node at fiber origin of the layer of every node (quotient graphs)
    std::vector<std::uint32_t> section;
};

// Topology of a graph before weights. Edge e of node i is the straight
// segment from unit[i] to unit[i] + steps[step[e]] in the cover chart.
struct GraphLayout {
    explicit GraphLayout(Surface s) : surface(std::move(s)) {}
    Surface surface;
    std::size_t nodes = 0;
    std::vector<std::uint32_t> offsets, targets;
    std::vector<UnitCoords> unit;
    std::vector<UnitCoords> steps;
    std::vector<std::uint8_t> step;
    std::size_t wrap_edges = 0;
    std::vector<double> circle;
    std::vector<std::uint32_t> section;
};

// Fiber torus (S_M) or nilmanifold (S+) at height y2: n^3 nodes, 26 neighbours.
GraphLayout fiber_layout(const Surface& s, int n, double y2);
// Whole quotient: n_fiber^3 * n_base nodes, 80 neighbours. On S+ the f0 seam
// lands between grid nodes and is snapped to the nearest node.
GraphLayout quotient_layout(const Surface& s, int n_fiber, int n_base);

// Weights from g; SingularMetric if some weight is not positive and finite.
MetricGraph weigh(const GraphLayout& layout, const MetricField& g, int workers = 1);

// Single-source shortest paths; Disconnected if a node is unreachable.
std::vector<double> dijkstra(const MetricGraph& g, std::uint32_t source);

// Sources: every node when nodes <= 12^3, else `samples` seeded random nodes.
std::vector<std::uint32_t> pick_sources(std::size_t nodes, int samples, std::uint64_t seed);

struct CircleModel {
    double length = 0;
    double distance(double a, double b) const;
};
// length factor of u on the limit circle: 1/sqrt2 (S_M), 1 (S+)
double circle_factor(const Surface& s);
CircleModel limit_circle(const Surface& s);

// Summed segment lengths along x = base, y2 from 1 to scale() in n steps.
double circle_length(const Surface& s, const MetricField& g, int n, const Point& base = {0, 0, 0, 1});

double fiber_diameter(const Surface& s, const MetricField& g, int n, double y2, int samples = 64,
                      std::uint64_t seed = 1, int workers = 1);

// Terms of the correspondence between (S, d_t) and the circle, with
// F(x) = u(x) * circle_factor and G the fiber-origin section.
struct GhTerms {
    double section = 0;        // max d_t(x, G(F x))
    double shrink = 0;         // max d(Fx, Fy) - d_t(x, y)
    double shrink_section = 0; // same on section pairs
    double stretch = 0;        // max d_t(x, y) - d(Fx, Fy)
    double stretch_section = 0;
    double bound = 0;          // max(section, shrink, shrink_section, stretch / 2, stretch_section / 2)
};

GhTerms gh_terms(const Surface& s, const MetricGraph& quotient, int samples = 64, std::uint64_t seed = 1,
                 int workers = 1);

}  // namespace inoue

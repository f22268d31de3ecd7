#include "inoue/metric_field.hpp"

namespace inoue {

namespace {

struct ConstantScalar final : ScalarField::Model {
    double c;
    explicit ConstantScalar(double v) : c(v) {}
    double value(const Point&) const override { return c; }
    bool has_jet() const override { return true; }
    Jet jet(const Point&, int order) const override { return Jet(c).truncated(order); }
};

struct SampledMetric final : MetricField::Model {
    std::function<Metric2(const Point&)> f;
    explicit SampledMetric(std::function<Metric2(const Point&)> fn) : f(std::move(fn)) {}
    Metric2 value(const Point& p) const override { return f(p); }
};

struct LinearMetric final : MetricField::Model {
    std::vector<std::pair<double, MetricField>> terms;
    bool jets = true;
    explicit LinearMetric(std::vector<std::pair<double, MetricField>> t) : terms(std::move(t))
    {
        for (const auto& [w, f] : terms) jets = jets && f.has_jet();
    }
    Metric2 value(const Point& p) const override
    {
        Metric2 r;
        for (const auto& [w, f] : terms) r = r + w * f(p);
        return r;
    }
    bool has_jet() const override { return jets; }
    Herm2<Jet> jet(const Point& p, int order) const override
    {
        Herm2<Jet> r{Jet(0.0).truncated(order), Jet(0.0).truncated(order), Jet(0.0).truncated(order)};
        for (const auto& [w, f] : terms) {
            Herm2<Jet> h = f.jet(p, order);
            r.g11 += h.g11 * w;
            r.g12 += h.g12 * w;
            r.g22 += h.g22 * w;
        }
        return r;
    }
};

struct ConformalMetric final : MetricField::Model {
    ScalarField factor;
    MetricField base;
    ConformalMetric(ScalarField s, MetricField m) : factor(std::move(s)), base(std::move(m)) {}
    Metric2 value(const Point& p) const override { return factor(p) * base(p); }
    bool has_jet() const override { return factor.has_jet() && base.has_jet(); }
    Herm2<Jet> jet(const Point& p, int order) const override
    {
        Jet s = factor.jet(p, order);
        Herm2<Jet> h = base.jet(p, order);
        return {s * h.g11, s * h.g12, s * h.g22};
    }
};

}  // namespace

ScalarField ScalarField::constant(double c) { return ScalarField(std::make_shared<ConstantScalar>(c)); }

MetricField MetricField::sampled(std::string name, std::function<Metric2(const Point&)> f)
{
    return MetricField(std::make_shared<SampledMetric>(std::move(f)), std::move(name));
}

MetricField linear_combination(std::string name, const std::vector<std::pair<double, MetricField>>& terms)
{
    return MetricField(std::make_shared<LinearMetric>(terms), std::move(name));
}

MetricField conformal(std::string name, const ScalarField& factor, const MetricField& field)
{
    return MetricField(std::make_shared<ConformalMetric>(factor, field), std::move(name));
}

}  // namespace inoue

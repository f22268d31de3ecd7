#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "inoue/errors.hpp"
#include "inoue/geometry.hpp"
#include "inoue/jet.hpp"

namespace inoue {

inline Jet seed(int var, double value, int order) { return Jet::variable(var, value, order); }

// Real-valued field on the chart; may also provide Taylor jets.
class ScalarField {
public:
    struct Model {
        virtual ~Model() = default;
        virtual double value(const Point& p) const = 0;
        virtual bool has_jet() const { return false; }
        virtual Jet jet(const Point&, int) const { fail(ErrorCode::invalid_argument, "scalar field has no jet evaluator"); }
    };

    ScalarField() = default;
    explicit ScalarField(std::shared_ptr<const Model> m) : m_(std::move(m)) {}

    // f(x1, y1, x2, y2) generic over cplx and Jet arguments
    template <class F>
    static ScalarField analytic(F f);
    static ScalarField constant(double c);

    double operator()(const Point& p) const { return m_->value(p); }
    bool has_jet() const { return m_ && m_->has_jet(); }
    Jet jet(const Point& p, int order) const { return m_->jet(p, order); }
    explicit operator bool() const { return static_cast<bool>(m_); }

private:
    std::shared_ptr<const Model> m_;
};

// Hermitian 2x2 field g_{i jbar} on the chart.
class MetricField {
public:
    struct Model {
        virtual ~Model() = default;
        virtual Metric2 value(const Point& p) const = 0;
        virtual bool has_jet() const { return false; }
        virtual Herm2<Jet> jet(const Point&, int) const
        {
            fail(ErrorCode::invalid_argument, "metric field has no jet evaluator");
        }
    };

    MetricField() = default;
    MetricField(std::shared_ptr<const Model> m, std::string name) : m_(std::move(m)), name_(std::move(name)) {}

    // f(x1, y1, x2, y2) -> Herm2<S>, generic over S = cplx and S = Jet
    template <class F>
    static MetricField analytic(std::string name, F f);
    // value-only field; derivatives fall back to finite differences
    static MetricField sampled(std::string name, std::function<Metric2(const Point&)> f);

    Metric2 operator()(const Point& p) const { return m_->value(p); }
    bool has_jet() const { return m_ && m_->has_jet(); }
    Herm2<Jet> jet(const Point& p, int order) const { return m_->jet(p, order); }
    const std::string& name() const { return name_; }
    explicit operator bool() const { return static_cast<bool>(m_); }

    MetricField renamed(std::string name) const { return MetricField(m_, std::move(name)); }

private:
    std::shared_ptr<const Model> m_;
    std::string name_;
};

// sum of w_k * field_k
MetricField linear_combination(std::string name, const std::vector<std::pair<double, MetricField>>& terms);
// factor(p) * field(p)
MetricField conformal(std::string name, const ScalarField& factor, const MetricField& field);

namespace detail {

template <class F>
struct AnalyticScalar final : ScalarField::Model {
    F f;
    explicit AnalyticScalar(F fn) : f(std::move(fn)) {}
    double value(const Point& p) const override { return re(f(cplx(p.x1), cplx(p.y1), cplx(p.x2), cplx(p.y2))); }
    bool has_jet() const override { return true; }
    Jet jet(const Point& p, int order) const override
    {
        return f(seed(0, p.x1, order), seed(1, p.y1, order), seed(2, p.x2, order), seed(3, p.y2, order));
    }
};

template <class F>
struct AnalyticMetric final : MetricField::Model {
    F f;
    explicit AnalyticMetric(F fn) : f(std::move(fn)) {}
    Metric2 value(const Point& p) const override
    {
        Herm2<cplx> h = f(cplx(p.x1), cplx(p.y1), cplx(p.x2), cplx(p.y2));
        return {cplx(h.g11.real(), 0.0), h.g12, cplx(h.g22.real(), 0.0)};
    }
    bool has_jet() const override { return true; }
    Herm2<Jet> jet(const Point& p, int order) const override
    {
        return f(seed(0, p.x1, order), seed(1, p.y1, order), seed(2, p.x2, order), seed(3, p.y2, order));
    }
};

}  // namespace detail

template <class F>
ScalarField ScalarField::analytic(F f)
{
    return ScalarField(std::make_shared<detail::AnalyticScalar<F>>(std::move(f)));
}

template <class F>
MetricField MetricField::analytic(std::string name, F f)
{
    return MetricField(std::make_shared<detail::AnalyticMetric<F>>(std::move(f)), std::move(name));
}

}  // namespace inoue

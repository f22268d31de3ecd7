#include "inoue/jet.hpp"

#include <algorithm>
#include <stdexcept>

namespace inoue {

namespace jet_tables {

namespace {

Tables build()
{
    Tables t;
    int k = 0;
    for (int d = 0; d <= kJetOrder; ++d) {
        for (int a = d; a >= 0; --a)
            for (int b = d - a; b >= 0; --b)
                for (int c = d - a - b; c >= 0; --c) {
                    t.exps[k] = {a, b, c, d - a - b - c};
                    t.degree[k] = d;
                    ++k;
                }
        t.upto[d] = k;
    }
    t.upto[kJetOrder + 1] = k;

    auto find = [&](const std::array<int, kJetVars>& e) {
        for (int i = 0; i < kJetSize; ++i)
            if (t.exps[i] == e) return i;
        return -1;
    };
    for (int v = 0; v < kJetVars; ++v)
        for (int i = 0; i < kJetSize; ++i) {
            auto e = t.exps[i];
            ++e[v];
            t.up[v][i] = find(e);
        }

    int n = 0;
    for (int d = 0; d <= kJetOrder; ++d) {
        for (int r = 0; r < kJetSize; ++r) {
            if (t.degree[r] != d) continue;
            for (int i = 0; i < kJetSize; ++i) {
                std::array<int, kJetVars> rest{};
                bool ok = true;
                for (int v = 0; v < kJetVars; ++v) {
                    rest[v] = t.exps[r][v] - t.exps[i][v];
                    if (rest[v] < 0) ok = false;
                }
                if (!ok) continue;
                int j = find(rest);
                t.triples[n++] = {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                                  static_cast<std::uint8_t>(r)};
            }
        }
        t.triples_upto[d] = n;
    }
    t.triples_upto[kJetOrder + 1] = n;
    if (n != 165) throw std::logic_error("jet tables: unexpected triple count");
    return t;
}

}  // namespace

const Tables& get()
{
    static const Tables t = build();
    return t;
}

int index_of(const std::array<int, kJetVars>& e)
{
    const Tables& t = get();
    for (int i = 0; i < kJetSize; ++i)
        if (t.exps[i] == e) return i;
    return -1;
}

}  // namespace jet_tables

Jet Jet::variable(int var, double value, int order)
{
    Jet j(value);
    j.order_ = order;
    if (order >= 1) j.c_[1 + var] = 1.0;
    return j;
}

cplx Jet::coeff(const std::array<int, kJetVars>& e) const
{
    int k = jet_tables::index_of(e);
    if (k < 0 || jet_tables::get().degree[k] > order_) throw std::out_of_range("jet coefficient beyond order");
    return c_[k];
}

cplx Jet::derivative(const std::array<int, kJetVars>& e) const
{
    static constexpr double fact[] = {1, 1, 2, 6};
    double f = 1;
    for (int v = 0; v < kJetVars; ++v) f *= fact[e[v]];
    return coeff(e) * f;
}

Jet Jet::truncated(int order) const
{
    Jet r = *this;
    if (order >= order_) return r;
    r.order_ = order;
    const int n = jet_tables::get().upto[order];
    std::fill(r.c_.begin() + n, r.c_.end(), cplx{});
    return r;
}

Jet Jet::partial(int var) const
{
    if (order_ == 0) throw std::logic_error("jet: derivative of an order-0 jet");
    const auto& t = jet_tables::get();
    Jet r;
    r.order_ = order_ - 1;
    for (int k = 0; k < t.upto[order_ - 1]; ++k) {
        int m = t.up[var][k];
        r.c_[k] = c_[m] * static_cast<double>(t.exps[m][var]);
    }
    return r;
}

Jet Jet::dz(int i) const
{
    Jet dx = partial(2 * i);
    Jet dy = partial(2 * i + 1);
    return (dx - dy * cplx(0, 1)) * 0.5;
}

Jet Jet::dzbar(int i) const
{
    Jet dx = partial(2 * i);
    Jet dy = partial(2 * i + 1);
    return (dx + dy * cplx(0, 1)) * 0.5;
}

Jet& Jet::operator+=(const Jet& o)
{
    order_ = std::min(order_, o.order_);
    const int n = jet_tables::get().upto[order_];
    for (int k = 0; k < n; ++k) c_[k] += o.c_[k];
    std::fill(c_.begin() + n, c_.end(), cplx{});
    return *this;
}

Jet& Jet::operator-=(const Jet& o)
{
    order_ = std::min(order_, o.order_);
    const int n = jet_tables::get().upto[order_];
    for (int k = 0; k < n; ++k) c_[k] -= o.c_[k];
    std::fill(c_.begin() + n, c_.end(), cplx{});
    return *this;
}

Jet& Jet::operator*=(cplx s)
{
    for (auto& x : c_) x *= s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b)
{
    const auto& t = jet_tables::get();
    Jet r;
    r.order_ = std::min(a.order_, b.order_);
    const int n = t.triples_upto[r.order_];
    for (int q = 0; q < n; ++q) {
        const auto& tr = t.triples[q];
        r.c_[tr[2]] += a.c_[tr[0]] * b.c_[tr[1]];
    }
    return r;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet Jet::operator-() const
{
    Jet r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Jet Jet::compose(cplx f0, cplx f1, cplx f2, cplx f3) const
{
    Jet d = *this;
    d.c_[0] = 0.0;
    Jet r(f3 / 6.0);
    r.order_ = order_;
    r = r * d + Jet(f2 / 2.0);
    r = r * d + Jet(f1);
    r = r * d + Jet(f0);
    r.order_ = order_;
    return r;
}

Jet& Jet::operator/=(const Jet& o)
{
    cplx x = o.value();
    if (x == cplx{}) throw std::domain_error("jet: division by zero");
    cplx i = 1.0 / x;
    Jet inv = o.compose(i, -i * i, 2.0 * i * i * i, -6.0 * i * i * i * i);
    return *this = *this * inv;
}

Jet exp(const Jet& a)
{
    cplx e = std::exp(a.value());
    return a.compose(e, e, e, e);
}

Jet log(const Jet& a)
{
    cplx x = a.value();
    cplx i = 1.0 / x;
    return a.compose(std::log(x), i, -i * i, 2.0 * i * i * i);
}

Jet sqrt(const Jet& a)
{
    cplx s = std::sqrt(a.value());
    cplx i = 1.0 / s;
    return a.compose(s, 0.5 * i, -0.25 * i * i * i, 0.375 * i * i * i * i * i);
}

Jet sin(const Jet& a)
{
    cplx s = std::sin(a.value()), c = std::cos(a.value());
    return a.compose(s, c, -s, -c);
}

Jet cos(const Jet& a)
{
    cplx s = std::sin(a.value()), c = std::cos(a.value());
    return a.compose(c, -s, -c, s);
}

Jet pow(const Jet& a, double p)
{
    cplx x = a.value();
    return a.compose(std::pow(x, p), p * std::pow(x, p - 1), p * (p - 1) * std::pow(x, p - 2),
                     p * (p - 1) * (p - 2) * std::pow(x, p - 3));
}

Jet conj(const Jet& a)
{
    Jet r = a;
    for (int k = 0; k < kJetSize; ++k) r.coeff(k) = std::conj(a.coeff(k));
    return r;
}

Jet real(const Jet& a)
{
    Jet r = a;
    for (int k = 0; k < kJetSize; ++k) r.coeff(k) = a.coeff(k).real();
    return r;
}

Jet imag(const Jet& a)
{
    Jet r = a;
    for (int k = 0; k < kJetSize; ++k) r.coeff(k) = a.coeff(k).imag();
    return r;
}

}  // namespace inoue

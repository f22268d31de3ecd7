#pragma once

// Truncated multivariate Taylor polynomials in the four real chart
// coordinates (x1, y1, x2, y2), complex coefficients, up to third order.
// Arithmetic on jets is forward-mode differentiation: evaluating a closed-form
// metric on variable jets yields all partials up to order 3 exactly.

#include <array>
#include <complex>
#include <cstdint>

namespace inoue {

using cplx = std::complex<double>;

inline constexpr int kJetVars = 4;
inline constexpr int kJetOrder = 3;
inline constexpr int kJetSize = 35;

namespace jet_tables {

struct Tables {
    std::array<std::array<int, kJetVars>, kJetSize> exps{};
    std::array<int, kJetSize> degree{};
    // number of monomials of degree <= d
    std::array<int, kJetOrder + 2> upto{};
    // up[v][k]: monomial k times the variable v, -1 past the order
    std::array<std::array<int, kJetSize>, kJetVars> up{};
    // multiplication triples (i, j, k) with i + j = k, sorted by degree of k
    std::array<std::array<std::uint8_t, 3>, 165> triples{};
    std::array<int, kJetOrder + 2> triples_upto{};
};

const Tables& get();
int index_of(const std::array<int, kJetVars>& e);

}  // namespace jet_tables

class Jet {
public:
    Jet() = default;
    Jet(double v) { c_[0] = v; }
    Jet(cplx v) { c_[0] = v; }

    static Jet variable(int var, double value, int order = kJetOrder);

    int order() const { return order_; }
    cplx value() const { return c_[0]; }
    cplx coeff(int k) const { return c_[k]; }
    cplx& coeff(int k) { return c_[k]; }
    // coefficient of the monomial with the given exponents
    cplx coeff(const std::array<int, kJetVars>& e) const;
    // partial derivative value d^e f / e! * e! at the expansion point
    cplx derivative(const std::array<int, kJetVars>& e) const;

    Jet truncated(int order) const;
    Jet partial(int var) const;
    // holomorphic and antiholomorphic partials in z_i, i = 0, 1
    Jet dz(int i) const;
    Jet dzbar(int i) const;

    // f(x) for f given by its value and first three derivatives at value()
    Jet compose(cplx f0, cplx f1, cplx f2, cplx f3) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);
    Jet& operator*=(cplx s);
    Jet operator-() const;

    friend Jet operator*(const Jet& a, const Jet& b);

private:
    std::array<cplx, kJetSize> c_{};
    int order_ = kJetOrder;
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator/(Jet a, const Jet& b) { return a /= b; }
inline Jet operator+(Jet a, cplx s) { return a += Jet(s); }
inline Jet operator+(cplx s, Jet a) { return a += Jet(s); }
inline Jet operator-(Jet a, cplx s) { return a -= Jet(s); }
inline Jet operator-(cplx s, const Jet& a) { return Jet(s) - a; }
inline Jet operator*(Jet a, cplx s) { return a *= s; }
inline Jet operator*(cplx s, Jet a) { return a *= s; }
inline Jet operator/(Jet a, cplx s) { return a *= 1.0 / s; }
inline Jet operator/(cplx s, const Jet& a) { return Jet(s) / a; }
inline Jet operator+(Jet a, double s) { return a += Jet(s); }
inline Jet operator+(double s, Jet a) { return a += Jet(s); }
inline Jet operator-(Jet a, double s) { return a -= Jet(s); }
inline Jet operator-(double s, const Jet& a) { return Jet(s) - a; }
inline Jet operator*(Jet a, double s) { return a *= cplx(s); }
inline Jet operator*(double s, Jet a) { return a *= cplx(s); }
inline Jet operator/(Jet a, double s) { return a *= cplx(1.0 / s); }
inline Jet operator/(double s, const Jet& a) { return Jet(s) / a; }

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet pow(const Jet& a, double p);
Jet conj(const Jet& a);
Jet real(const Jet& a);
Jet imag(const Jet& a);

// Real part of the value, for branching in generic evaluators.
inline double re(const Jet& a) { return a.value().real(); }
inline double re(cplx a) { return a.real(); }
inline double re(double a) { return a; }

}  // namespace inoue

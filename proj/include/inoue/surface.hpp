#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "inoue/errors.hpp"
#include "inoue/geometry.hpp"

namespace inoue {

using IntMat3 = std::array<std::array<long long, 3>, 3>;
using IntMat2 = std::array<std::array<long long, 2>, 2>;

struct SMData {
    IntMat3 M{};
    double lambda = 0;
    cplx mu;
    std::array<double, 3> ell{};
    std::array<cplx, 3> m_vec{};
};

struct SPlusData {
    IntMat2 N{};
    double alpha_ev = 0;
    std::array<double, 2> a{}, b{};
    long long p = 0, q = 0, r = 1;
    cplx tau;
    std::array<double, 2> c{}, e{};
    double m_slope = 0;
    // translation of f3, (b1 a2 - b2 a1) / r
    double kappa = 0;
};

// Companion matrix of x^3 - x - 1.
IntMat3 default_sm_matrix();

SMData construct_sm(const IntMat3& M);
// tau defaults to i log(alpha)
SPlusData construct_splus(const IntMat2& N, long long p, long long q, long long r, std::optional<cplx> tau = {});

enum class SurfaceKind { sm, splus };

// Word entries are applied first to last; map is their composition.
struct GroupElement {
    std::vector<std::pair<int, long long>> word;
    AffineMap map;

    bool is_identity() const { return word.empty(); }
};

using UnitCoords = std::array<double, 4>;

struct FundamentalDomain {
    SurfaceKind kind = SurfaceKind::sm;
    double y_lo = 1, y_hi = 1;
    // S_M: columns are (Re m_j, Im m_j, ell_j). S+: rows (a1 a2), (b1 b2) in the first 2x2 block.
    std::array<std::array<double, 3>, 3> basis{};
    // box containing the domain in (x1, y1, x2)
    std::array<double, 3> lo{}, hi{};
};

class Surface {
public:
    explicit Surface(SMData d);
    explicit Surface(SPlusData d);

    SurfaceKind kind() const { return kind_; }
    const SMData& sm() const;
    const SPlusData& splus() const;
    std::string kind_name() const { return kind_ == SurfaceKind::sm ? "sm" : "splus"; }

    // lambda (or alpha) and its logarithm, the period of u = log y2
    double scale() const { return scale_; }
    double period() const { return period_; }

    AffineMap generator(int i) const;
    GroupElement element(const std::vector<std::pair<int, long long>>& word) const;
    Point apply(const GroupElement& g, const Point& p) const { return g.map.apply(p); }

    // Reduce into the fundamental domain; the returned element maps p to the result.
    std::pair<Point, GroupElement> reduce(const Point& p) const;
    bool in_domain(const Point& p, double tol = 1e-12) const;

    // Global chart of the cover in which the domain is [0,1)^4:
    // S_M (s1, s2, s3, u/L) with (x1, y1, x2) = sum s_j (Re m_j, Im m_j, ell_j);
    // S+ (xi, w1, w2, u/L) with (x2, v) = sum w_j (a_j, b_j), v = (y1 - m log y2)/y2,
    // and x1 = kappa xi + Q(w) where Q makes f1, f2 act on xi by integer shifts of w1.
    UnitCoords to_unit(const Point& p) const;
    Point from_unit(const UnitCoords& s) const;

    const FundamentalDomain& domain() const { return domain_; }

    // angle of mu for S_M (used by invariant (1,0)-forms), 0 for S+
    double mu_arg() const { return mu_arg_; }

    // action of f0 on the fiber unit coordinates is linear for S_M: s -> M^T s
    std::array<std::array<long long, 3>, 3> fiber_action() const;

private:
    double quad_q(double w1, double w2) const;
    void init_domain();

    SurfaceKind kind_;
    std::variant<SMData, SPlusData> data_;
    double scale_ = 1, period_ = 0, mu_arg_ = 0;
    std::array<std::array<double, 3>, 3> binv_{};
    std::array<std::array<double, 2>, 2> lam_{}, laminv_{};
    std::array<AffineMap, 4> gens_{};
    FundamentalDomain domain_;
};

Surface default_surface();

// Max component deviation |(g^* omega)(p) - omega(p)| over the samples.
template <class Field>
double check_invariance(const Field& omega, const GroupElement& g, const std::vector<Point>& samples)
{
    double worst = 0;
    for (const Point& p : samples) {
        Metric2 pulled = g.map.pullback(omega(g.map.apply(p)));
        Metric2 here = omega(p);
        worst = std::max({worst, std::abs(pulled.g11 - here.g11), std::abs(pulled.g12 - here.g12),
                          std::abs(pulled.g22 - here.g22)});
    }
    return worst;
}

}  // namespace inoue

#pragma once

#include <functional>
#include <memory>
#include <string>

#include "inoue/surface.hpp"

namespace inoue {

// Scalar expressions for initial data.
//   variables: u (= log y2), y2, x1, y1, x2, s1 s2 s3 (unit fiber coordinates), L (period), pi
//   functions: sin cos tan exp log sqrt abs pow(a, b)
//              wave(k1, k2, k3 [, phase [, width]])  Gamma-invariant wave, integer k
//   operators: + - * / ^ and parentheses
// Syntax errors raise InvalidInitialData with the offending position.
class Expression {
public:
    struct Node;

    static Expression parse(const std::string& text);

    const std::string& text() const { return text_; }
    // true if any fiber variable or wave() occurs
    bool uses_fiber() const { return fiber_; }

    std::function<double(const Point&)> bind(const Surface& s) const;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
    bool fiber_ = false;
};

// Largest |f(g p) - f(p)| over seeded domain samples and the generators
// f0..f3 and their inverses.
double invariance_defect(const Surface& s, const std::function<double(const Point&)>& f, int samples = 64,
                         std::uint64_t seed = 7);

}  // namespace inoue

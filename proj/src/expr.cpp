#include "inoue/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "inoue/reference.hpp"

namespace inoue {

struct Expression::Node {
    enum Kind { number, variable, unary_minus, binary, call } kind = number;
    double value = 0;
    std::string name;
    char op = 0;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

const char* const kVariables[] = {"u", "y2", "x1", "y1", "x2", "s1", "s2", "s3", "L", "pi"};
const char* const kFunctions[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "abs", "pow", "wave"};

class Parser {
public:
    explicit Parser(const std::string& t) : s_(t) {}

    NodePtr parse()
    {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }
    bool fiber = false;

private:
    [[noreturn]] void error(const std::string& what) const
    {
        fail(ErrorCode::invalid_initial_data, "expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
    }
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    static NodePtr bin(char op, NodePtr a, NodePtr b)
    {
        auto n = std::make_shared<Node>();
        n->kind = Node::binary;
        n->op = op;
        n->args = {std::move(a), std::move(b)};
        return n;
    }
    NodePtr expr()
    {
        NodePtr n = term();
        for (;;) {
            if (eat('+'))
                n = bin('+', n, term());
            else if (eat('-'))
                n = bin('-', n, term());
            else
                return n;
        }
    }
    NodePtr term()
    {
        NodePtr n = unary();
        for (;;) {
            if (eat('*'))
                n = bin('*', n, unary());
            else if (eat('/'))
                n = bin('/', n, unary());
            else
                return n;
        }
    }
    NodePtr unary()
    {
        if (eat('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Node::unary_minus;
            n->args = {unary()};
            return n;
        }
        if (eat('+')) return unary();
        return power();
    }
    NodePtr power()
    {
        NodePtr base = primary();
        if (eat('^')) return bin('^', base, unary());
        return base;
    }
    NodePtr primary()
    {
        skip();
        if (pos_ >= s_.size()) error("unexpected end");
        if (eat('(')) {
            NodePtr n = expr();
            if (!eat(')')) error("missing ')'");
            return n;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) error("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            auto n = std::make_shared<Node>();
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string id = s_.substr(b, pos_ - b);
            if (eat('(')) {
                bool known = false;
                for (const char* f : kFunctions) known = known || id == f;
                if (!known) error("unknown function '" + id + "'");
                auto n = std::make_shared<Node>();
                n->kind = Node::call;
                n->name = id;
                if (!eat(')')) {
                    do n->args.push_back(expr());
                    while (eat(','));
                    if (!eat(')')) error("missing ')' after arguments of " + id);
                }
                check_arity(*n);
                if (id == "wave") fiber = true;
                return n;
            }
            bool known = false;
            for (const char* v : kVariables) known = known || id == v;
            if (!known) error("unknown variable '" + id + "'");
            if (id == "x1" || id == "y1" || id == "x2" || id == "s1" || id == "s2" || id == "s3") fiber = true;
            auto n = std::make_shared<Node>();
            n->kind = Node::variable;
            n->name = id;
            return n;
        }
        error("unexpected '" + std::string(1, c) + "'");
    }
    void check_arity(const Node& n) const
    {
        const std::size_t k = n.args.size();
        if (n.name == "pow" && k != 2) error("pow takes 2 arguments");
        if (n.name == "wave") {
            if (k < 3 || k > 5) error("wave takes 3 to 5 arguments");
            for (int i = 0; i < 3; ++i) {
                const Node& a = *n.args[i];
                const bool neg = a.kind == Node::unary_minus && a.args[0]->kind == Node::number;
                const double v = neg ? -a.args[0]->value : a.value;
                if (!(a.kind == Node::number || neg) || v != std::floor(v))
                    error("wave wave-vector entries must be integer literals");
            }
            for (std::size_t i = 3; i < k; ++i)
                if (n.args[i]->kind != Node::number && n.args[i]->kind != Node::unary_minus)
                    error("wave phase and width must be numeric literals");
        }
        if (n.name != "pow" && n.name != "wave" && k != 1) error(n.name + " takes 1 argument");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

double literal(const Node& n) { return n.kind == Node::unary_minus ? -n.args[0]->value : n.value; }

struct Env {
    const Surface* s;
    const Point* p;
    UnitCoords unit{};
    bool have_unit = false;
};

using Compiled = std::function<double(Env&)>;

Compiled compile(const NodePtr& n, const Surface& s)
{
    switch (n->kind) {
    case Node::number: {
        const double v = n->value;
        return [v](Env&) { return v; };
    }
    case Node::unary_minus: {
        Compiled a = compile(n->args[0], s);
        return [a](Env& e) { return -a(e); };
    }
    case Node::binary: {
        Compiled a = compile(n->args[0], s), b = compile(n->args[1], s);
        switch (n->op) {
        case '+': return [a, b](Env& e) { return a(e) + b(e); };
        case '-': return [a, b](Env& e) { return a(e) - b(e); };
        case '*': return [a, b](Env& e) { return a(e) * b(e); };
        case '/': return [a, b](Env& e) { return a(e) / b(e); };
        default: return [a, b](Env& e) { return std::pow(a(e), b(e)); };
        }
    }
    case Node::variable: {
        const std::string& v = n->name;
        if (v == "u") return [](Env& e) { return std::log(e.p->y2); };
        if (v == "y2") return [](Env& e) { return e.p->y2; };
        if (v == "x1") return [](Env& e) { return e.p->x1; };
        if (v == "y1") return [](Env& e) { return e.p->y1; };
        if (v == "x2") return [](Env& e) { return e.p->x2; };
        if (v == "L") {
            const double L = s.period();
            return [L](Env&) { return L; };
        }
        if (v == "pi") return [](Env&) { return std::numbers::pi; };
        const int k = v[1] - '1';
        return [k](Env& e) {
            if (!e.have_unit) e.unit = e.s->to_unit(*e.p), e.have_unit = true;
            return e.unit[k];
        };
    }
    case Node::call: {
        const std::string& f = n->name;
        if (f == "wave") {
            std::array<int, 3> k{};
            for (int i = 0; i < 3; ++i) k[i] = static_cast<int>(literal(*n->args[i]));
            const double phase = n->args.size() > 3 ? literal(*n->args[3]) : 0.0;
            const double width = n->args.size() > 4 ? literal(*n->args[4]) : 0.2;
            if (!(width > 0)) fail(ErrorCode::invalid_initial_data, "wave width must be positive");
            ScalarField w = invariant_wave(s, k, phase, width);
            return [w](Env& e) { return w(*e.p); };
        }
        if (f == "pow") {
            Compiled a = compile(n->args[0], s), b = compile(n->args[1], s);
            return [a, b](Env& e) { return std::pow(a(e), b(e)); };
        }
        Compiled a = compile(n->args[0], s);
        double (*fn)(double) = nullptr;
        if (f == "sin") fn = [](double x) { return std::sin(x); };
        if (f == "cos") fn = [](double x) { return std::cos(x); };
        if (f == "tan") fn = [](double x) { return std::tan(x); };
        if (f == "exp") fn = [](double x) { return std::exp(x); };
        if (f == "log") fn = [](double x) { return std::log(x); };
        if (f == "sqrt") fn = [](double x) { return std::sqrt(x); };
        if (f == "abs") fn = [](double x) { return std::abs(x); };
        return [a, fn](Env& e) { return fn(a(e)); };
    }
    }
    fail(ErrorCode::internal, "bad expression node");
}

}  // namespace

Expression Expression::parse(const std::string& text)
{
    Parser p(text);
    Expression e;
    e.text_ = text;
    e.root_ = p.parse();
    e.fiber_ = p.fiber;
    return e;
}

std::function<double(const Point&)> Expression::bind(const Surface& s) const
{
    if (!root_) fail(ErrorCode::invalid_initial_data, "empty expression");
    Compiled c = compile(root_, s);
    auto surface = std::make_shared<Surface>(s);
    return [c, surface](const Point& p) {
        Env e{surface.get(), &p};
        return c(e);
    };
}

double invariance_defect(const Surface& s, const std::function<double(const Point&)>& f, int samples,
                         std::uint64_t seed)
{
    double worst = 0;
    for (const Point& p : sample_domain(s, samples, seed)) {
        const double here = f(p);
        for (int g = 0; g < 4; ++g)
            for (long long k : {1LL, -1LL}) {
                const double there = f(s.apply(s.element({{g, k}}), p));
                const double d = std::abs(there - here);
                if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();
                worst = std::max(worst, d / std::max(1.0, std::abs(here)));
            }
    }
    return worst;
}

}  // namespace inoue

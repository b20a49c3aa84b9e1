#include "qsc/expr.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace qsc {

namespace {

enum class Op { Num, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Sin, Cos, Sqrt, Log };

} // namespace

struct Expr::Node {
    Op op;
    double num = 0.0;
    std::string name;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

Jet2 eval_node(const Expr::Node& n, const Env& env) {
    switch (n.op) {
    case Op::Num: {
        if (env.empty()) throw ExprError("expr: cannot evaluate with empty environment (unknown jet dimension)");
        return Jet2::constant(env.begin()->second.dim(), n.num);
    }
    case Op::Var: {
        auto it = env.find(n.name);
        if (it == env.end()) throw ExprError("expr: unbound variable '" + n.name + "'");
        return it->second;
    }
    case Op::Add: return eval_node(*n.a, env) + eval_node(*n.b, env);
    case Op::Sub: return eval_node(*n.a, env) - eval_node(*n.b, env);
    case Op::Mul: return eval_node(*n.a, env) * eval_node(*n.b, env);
    case Op::Div: return eval_node(*n.a, env) / eval_node(*n.b, env);
    case Op::Neg: return -eval_node(*n.a, env);
    case Op::Pow: {
        Jet2 base = eval_node(*n.a, env);
        // Constant exponents take the smooth single-argument path.
        if (n.b->op == Op::Num) return pow(base, n.b->num);
        return pow(base, eval_node(*n.b, env));
    }
    case Op::Exp: return exp(eval_node(*n.a, env));
    case Op::Sin: return sin(eval_node(*n.a, env));
    case Op::Cos: return cos(eval_node(*n.a, env));
    case Op::Sqrt: return sqrt(eval_node(*n.a, env));
    case Op::Log: return log(eval_node(*n.a, env));
    }
    throw ExprError("expr: corrupt node");
}

void collect_vars(const Expr::Node& n, std::set<std::string>& out) {
    if (n.op == Op::Var) out.insert(n.name);
    if (n.a) collect_vars(*n.a, out);
    if (n.b) collect_vars(*n.b, out);
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int precedence(Op op) {
    switch (op) {
    case Op::Add: case Op::Sub: return 1;
    case Op::Mul: case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
    }
}

void render(const Expr::Node& n, std::string& out) {
    auto child = [&](const Expr::Node& c, int parent_prec, bool tight) {
        bool paren = precedence(c.op) < parent_prec || (tight && precedence(c.op) == parent_prec);
        if (c.op == Op::Num && c.num < 0) paren = true;
        if (paren) out += '(';
        render(c, out);
        if (paren) out += ')';
    };
    switch (n.op) {
    case Op::Num: out += fmt_num(n.num); return;
    case Op::Var: out += n.name; return;
    case Op::Add: child(*n.a, 1, false); out += " + "; child(*n.b, 1, false); return;
    case Op::Sub: child(*n.a, 1, false); out += " - "; child(*n.b, 1, true); return;
    case Op::Mul: child(*n.a, 2, false); out += "*"; child(*n.b, 2, false); return;
    case Op::Div: child(*n.a, 2, false); out += "/"; child(*n.b, 2, true); return;
    case Op::Neg: out += '-'; child(*n.a, 3, true); return;
    case Op::Pow: child(*n.a, 5, false); out += '^'; child(*n.b, 5, false); return;
    case Op::Exp: out += "exp("; render(*n.a, out); out += ')'; return;
    case Op::Sin: out += "sin("; render(*n.a, out); out += ')'; return;
    case Op::Cos: out += "cos("; render(*n.a, out); out += ')'; return;
    case Op::Sqrt: out += "sqrt("; render(*n.a, out); out += ')'; return;
    case Op::Log: out += "log("; render(*n.a, out); out += ')'; return;
    }
}

} // namespace

Expr Expr::num(double v) {
    auto n = std::make_shared<Node>();
    n->op = Op::Num;
    n->num = v;
    return Expr(n);
}

Expr Expr::var(const std::string& name) {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->name = name;
    return Expr(n);
}

Jet2 Expr::eval(const Env& env) const {
    if (!node_) throw ExprError("expr: evaluating empty expression");
    return eval_node(*node_, env);
}

Expr::D2 Expr::eval_d2(double t, const std::map<std::string, double>& params,
                       const std::string& tname) const {
    Env env;
    env[tname] = Jet2::variable(1, 0, t);
    for (const auto& [k, v] : params) env[k] = Jet2::constant(1, v);
    Jet2 j = eval(env);
    return D2{j.value(), j.d(0), j.dd(0, 0)};
}

std::set<std::string> Expr::variables() const {
    std::set<std::string> out;
    if (node_) collect_vars(*node_, out);
    return out;
}

std::string Expr::str() const {
    if (!node_) return "";
    std::string out;
    render(*node_, out);
    return out;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(make(Op::Add, a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(make(Op::Sub, a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(make(Op::Mul, a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(make(Op::Div, a.node_, b.node_)); }
Expr operator-(const Expr& a) { return Expr(make(Op::Neg, a.node_)); }
Expr pow(const Expr& a, const Expr& b) { return Expr(make(Op::Pow, a.node_, b.node_)); }
Expr exp(const Expr& a) { return Expr(make(Op::Exp, a.node_)); }
Expr sin(const Expr& a) { return Expr(make(Op::Sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(make(Op::Cos, a.node_)); }
Expr sqrt(const Expr& a) { return Expr(make(Op::Sqrt, a.node_)); }
Expr log(const Expr& a) { return Expr(make(Op::Log, a.node_)); }

// ---------------------------------------------------------------------------
// Recursive-descent parser
// ---------------------------------------------------------------------------

class Parser {
  public:
    explicit Parser(const std::string& s) : s_(s) {}

    Expr run() {
        NodePtr e = parse_sum();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return Expr(e);
    }

  private:
    NodePtr parse_sum() {
        NodePtr lhs = parse_term();
        for (;;) {
            skip_ws();
            if (accept('+')) lhs = make(Op::Add, lhs, parse_term());
            else if (accept('-')) lhs = make(Op::Sub, lhs, parse_term());
            else return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            skip_ws();
            if (accept('*')) lhs = make(Op::Mul, lhs, parse_factor());
            else if (accept('/')) lhs = make(Op::Div, lhs, parse_factor());
            else return lhs;
        }
    }

    NodePtr parse_factor() {
        skip_ws();
        // unary minus binds looser than '^': -t^2 is -(t^2)
        if (accept('-')) return make(Op::Neg, parse_factor());
        NodePtr base = parse_primary();
        skip_ws();
        if (accept('^')) return make(Op::Pow, base, parse_factor());
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
        return nullptr;
    }

    NodePtr parse_number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<size_t>(end - begin);
        auto n = std::make_shared<Expr::Node>();
        n->op = Op::Num;
        n->num = v;
        return n;
    }

    NodePtr parse_ident() {
        size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '(') {
            Op op;
            if (name == "exp") op = Op::Exp;
            else if (name == "sin") op = Op::Sin;
            else if (name == "cos") op = Op::Cos;
            else if (name == "sqrt") op = Op::Sqrt;
            else if (name == "log") op = Op::Log;
            else fail("unknown function '" + name + "'");
            ++pos_;
            NodePtr arg = parse_sum();
            expect(')');
            return make(op, arg);
        }
        if (name == "pi") {
            auto n = std::make_shared<Expr::Node>();
            n->op = Op::Num;
            n->num = 3.14159265358979323846;
            return n;
        }
        auto n = std::make_shared<Expr::Node>();
        n->op = Op::Var;
        n->name = name;
        return n;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        skip_ws();
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ExprError("expr: " + msg + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
    }

    const std::string& s_;
    size_t pos_ = 0;
};

Expr parse_expr(const std::string& text) { return Parser(text).run(); }

} // namespace qsc

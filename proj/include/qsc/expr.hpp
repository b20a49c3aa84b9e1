/// @file expr.hpp
/// @brief Scalar expression trees over named chart coordinates.
///
/// Grammar (also accepted by parse_expr):
///   expr    := term (('+'|'-') term)*
///   term    := factor (('*'|'/') factor)*
///   factor  := '-' factor | primary ('^' factor)?   -- '^' right associative,
///                                                       unary '-' binds looser
///   primary := number | ident | ident '(' expr ')' | '(' expr ')'
/// Functions: exp, sin, cos, sqrt, log. Any other identifier is a variable.
///
/// Expressions evaluate to Jet2 against an environment binding variable
/// names to jets, so a warping expression handed the chart variables yields
/// exact first and second derivatives of the metric for free.

#pragma once

#include "qsc/jet.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace qsc {

struct ExprError : std::runtime_error {
    explicit ExprError(const std::string& what) : std::runtime_error(what) {}
};

using Env = std::map<std::string, Jet2>;

class Expr {
  public:
    Expr() = default;

    static Expr num(double v);
    static Expr var(const std::string& name);

    bool empty() const { return node_ == nullptr; }

    Jet2 eval(const Env& env) const;
    double eval_value(const Env& env) const { return eval(env).value(); }

    /// Convenience for 1-d families f(t): returns (f, f', f'') at t with
    /// extra named constants bound as parameters.
    struct D2 {
        double f, df, ddf;
    };
    D2 eval_d2(double t, const std::map<std::string, double>& params = {},
               const std::string& tname = "t") const;

    /// Free variable names, sorted.
    std::set<std::string> variables() const;

    /// Re-parseable rendering.
    std::string str() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr operator+(const Expr& a, double s) { return a + Expr::num(s); }
    friend Expr operator+(double s, const Expr& a) { return Expr::num(s) + a; }
    friend Expr operator-(const Expr& a, double s) { return a - Expr::num(s); }
    friend Expr operator-(double s, const Expr& a) { return Expr::num(s) - a; }
    friend Expr operator*(const Expr& a, double s) { return a * Expr::num(s); }
    friend Expr operator*(double s, const Expr& a) { return Expr::num(s) * a; }
    friend Expr operator/(const Expr& a, double s) { return a / Expr::num(s); }
    friend Expr operator/(double s, const Expr& a) { return Expr::num(s) / a; }

    friend Expr pow(const Expr& a, const Expr& b);
    friend Expr pow(const Expr& a, double c) { return pow(a, Expr::num(c)); }
    friend Expr exp(const Expr& a);
    friend Expr sin(const Expr& a);
    friend Expr cos(const Expr& a);
    friend Expr sqrt(const Expr& a);
    friend Expr log(const Expr& a);

    struct Node;

  private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;

    friend Expr parse_expr(const std::string&);
    friend class Parser;
};

/// Parses the documented grammar; throws ExprError with position info.
Expr parse_expr(const std::string& text);

} // namespace qsc

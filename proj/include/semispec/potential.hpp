#pragma once

#include <memory>
#include <string>

#include "semispec/errors.hpp"
#include "semispec/jet.hpp"

namespace semispec {

// One-variable potential expression tree. Grammar (see README):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-')? power
//   power  := atom ('^' uint)?
//   atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
// Functions: exp, sin, cos, cosh, sinh. No sqrt/abs: the analysis needs
// v to stay C^3 through turning points.
struct ExpressionAst {
    enum class Kind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Func };
    enum class Fn { Exp, Sin, Cos, Cosh, Sinh };

    Kind kind;
    double constant = 0.0;  // Kind::Constant
    unsigned exponent = 0;  // Kind::Pow
    Fn fn = Fn::Exp;        // Kind::Func
    std::shared_ptr<const ExpressionAst> lhs, rhs;

    Jet2 evaluate(Jet2 x) const;
    void print(std::string& out) const;
};

// Immutable parsed potential; safe for concurrent reads.
class PotentialModel {
public:
    PotentialModel() = default;
    PotentialModel(std::shared_ptr<const ExpressionAst> ast, std::string source,
                   std::string builtin_tag = {})
        : ast_(std::move(ast)), source_(std::move(source)), builtin_(std::move(builtin_tag)) {}

    // v, v', v'' at x.
    Jet2 operator()(double x) const { return ast_->evaluate(Jet2::variable(x)); }
    double value(double x) const { return (*this)(x).v; }

    const std::string& source() const { return source_; }
    const std::string& builtin_tag() const { return builtin_; }
    std::string print() const;
    bool valid() const { return ast_ != nullptr; }

private:
    std::shared_ptr<const ExpressionAst> ast_;
    std::string source_;
    std::string builtin_;
};

PotentialModel parse_potential(const std::string& text);

// Built-in benchmark potentials: "harmonic" (x^2), "quartic" (x^4),
// "double_well" ((x^2-1)^2), and tilted_double_well(c) ((x^2-1)^2 + c*x).
PotentialModel builtin_potential(const std::string& name);
PotentialModel tilted_double_well(double c);

} // namespace semispec

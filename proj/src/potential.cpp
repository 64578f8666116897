#include "semispec/potential.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <utility>

namespace semispec {

namespace {

using AstPtr = std::shared_ptr<const ExpressionAst>;

AstPtr make_node(ExpressionAst node) {
    return std::make_shared<const ExpressionAst>(std::move(node));
}

AstPtr make_binary(ExpressionAst::Kind k, AstPtr a, AstPtr b) {
    ExpressionAst n;
    n.kind = k;
    n.lhs = std::move(a);
    n.rhs = std::move(b);
    return make_node(std::move(n));
}

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    AstPtr run() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("empty expression", 0);
        AstPtr e = parse_expr();
        skip_ws();
        if (pos_ < s_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(std::string("expected ") + what, pos_);
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    AstPtr parse_expr() {
        AstPtr e = parse_term();
        for (;;) {
            if (accept('+'))
                e = make_binary(ExpressionAst::Kind::Add, e, parse_term());
            else if (accept('-'))
                e = make_binary(ExpressionAst::Kind::Sub, e, parse_term());
            else
                return e;
        }
    }

    AstPtr parse_term() {
        AstPtr e = parse_factor();
        for (;;) {
            if (accept('*'))
                e = make_binary(ExpressionAst::Kind::Mul, e, parse_factor());
            else if (accept('/'))
                e = make_binary(ExpressionAst::Kind::Div, e, parse_factor());
            else
                return e;
        }
    }

    AstPtr parse_factor() {
        if (accept('-')) {
            ExpressionAst n;
            n.kind = ExpressionAst::Kind::Negate;
            n.lhs = parse_factor();
            return make_node(std::move(n));
        }
        return parse_power();
    }

    AstPtr parse_power() {
        AstPtr base = parse_atom();
        if (!accept('^')) return base;
        skip_ws();
        std::size_t start = pos_;
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            throw ParseError("exponent must be a nonnegative integer", pos_);
        unsigned long e = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            e = e * 10 + static_cast<unsigned long>(s_[pos_] - '0');
            if (e > 1000000) throw ParseError("exponent too large", start);
            ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
            throw ParseError("exponent must be a nonnegative integer", pos_);
        ExpressionAst n;
        n.kind = ExpressionAst::Kind::Pow;
        n.exponent = static_cast<unsigned>(e);
        n.lhs = std::move(base);
        return make_node(std::move(n));
    }

    AstPtr parse_atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            AstPtr e = parse_expr();
            expect(')', "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    AstPtr parse_number() {
        std::size_t start = pos_;
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        double value = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", start);
        pos_ += static_cast<std::size_t>(end - begin);
        if (!std::isfinite(value)) throw ParseError("number out of range", start);
        ExpressionAst n;
        n.kind = ExpressionAst::Kind::Constant;
        n.constant = value;
        return make_node(std::move(n));
    }

    AstPtr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        if (name == "x") {
            ExpressionAst n;
            n.kind = ExpressionAst::Kind::Variable;
            return make_node(std::move(n));
        }
        ExpressionAst::Fn fn;
        if (name == "exp")
            fn = ExpressionAst::Fn::Exp;
        else if (name == "sin")
            fn = ExpressionAst::Fn::Sin;
        else if (name == "cos")
            fn = ExpressionAst::Fn::Cos;
        else if (name == "cosh")
            fn = ExpressionAst::Fn::Cosh;
        else if (name == "sinh")
            fn = ExpressionAst::Fn::Sinh;
        else
            throw ParseError("unknown identifier '" + name + "'", start);
        expect('(', "'(' after function name");
        AstPtr arg = parse_expr();
        expect(')', "')'");
        ExpressionAst n;
        n.kind = ExpressionAst::Kind::Func;
        n.fn = fn;
        n.lhs = std::move(arg);
        return make_node(std::move(n));
    }
};

void check_finite(const Jet2& j) {
    if (!std::isfinite(j.v) || !std::isfinite(j.d1) || !std::isfinite(j.d2))
        throw EvalDomainError("potential evaluation overflowed");
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Jet2 ExpressionAst::evaluate(Jet2 x) const {
    switch (kind) {
        case Kind::Constant: return Jet2{constant};
        case Kind::Variable: return x;
        case Kind::Negate: return -lhs->evaluate(x);
        case Kind::Add: return lhs->evaluate(x) + rhs->evaluate(x);
        case Kind::Sub: return lhs->evaluate(x) - rhs->evaluate(x);
        case Kind::Mul: {
            Jet2 r = lhs->evaluate(x) * rhs->evaluate(x);
            check_finite(r);
            return r;
        }
        case Kind::Div: {
            Jet2 d = rhs->evaluate(x);
            if (d.v == 0.0) throw EvalDomainError("division by zero");
            Jet2 r = lhs->evaluate(x) / d;
            check_finite(r);
            return r;
        }
        case Kind::Pow: {
            Jet2 r = ipow(lhs->evaluate(x), exponent);
            check_finite(r);
            return r;
        }
        case Kind::Func: {
            Jet2 a = lhs->evaluate(x);
            Jet2 r;
            switch (fn) {
                case Fn::Exp: r = exp(a); break;
                case Fn::Sin: r = sin(a); break;
                case Fn::Cos: r = cos(a); break;
                case Fn::Cosh: r = cosh(a); break;
                case Fn::Sinh: r = sinh(a); break;
            }
            check_finite(r);
            return r;
        }
    }
    throw EvalDomainError("corrupt expression node");
}

void ExpressionAst::print(std::string& out) const {
    switch (kind) {
        case Kind::Constant: out += format_number(constant); return;
        case Kind::Variable: out += 'x'; return;
        case Kind::Negate:
            out += "(-";
            lhs->print(out);
            out += ')';
            return;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div: {
            out += '(';
            lhs->print(out);
            out += (kind == Kind::Add ? '+' : kind == Kind::Sub ? '-' : kind == Kind::Mul ? '*' : '/');
            rhs->print(out);
            out += ')';
            return;
        }
        case Kind::Pow:
            out += '(';
            lhs->print(out);
            out += '^';
            out += std::to_string(exponent);
            out += ')';
            return;
        case Kind::Func: {
            static const char* names[] = {"exp", "sin", "cos", "cosh", "sinh"};
            out += names[static_cast<int>(fn)];
            out += '(';
            lhs->print(out);
            out += ')';
            return;
        }
    }
}

std::string PotentialModel::print() const {
    std::string out;
    ast_->print(out);
    return out;
}

PotentialModel parse_potential(const std::string& text) {
    if (text.empty()) throw ParseError("empty expression", 0);
    Parser p(text);
    return PotentialModel(p.run(), text);
}

PotentialModel builtin_potential(const std::string& name) {
    std::string expr;
    if (name == "harmonic")
        expr = "x^2";
    else if (name == "quartic")
        expr = "x^4";
    else if (name == "double_well")
        expr = "(x^2-1)^2";
    else
        throw ConfigError("unknown builtin potential '" + name + "'");
    Parser p(expr);
    return PotentialModel(p.run(), expr, name);
}

PotentialModel tilted_double_well(double c) {
    if (!std::isfinite(c)) throw ConfigError("tilt coefficient must be finite");
    std::string expr = "(x^2-1)^2+" + format_number(c) + "*x";
    Parser p(expr);
    return PotentialModel(p.run(), expr, "tilted_double_well");
}

} // namespace semispec

#pragma once

// A small expression language for user-defined coefficient fields, evaluated
// into Jets. Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' int)?
//   atom   := number | 'i' | 'pi' | ident | fn '(' expr ')' | '(' expr ')' | '-' atom
// Identifiers must be declared chart coordinates; call arity is 1; exponents
// are literal integers. Whitespace is insignificant.

#include <cctype>
#include <cstdio>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "nullframe/chart.hpp"
#include "nullframe/errors.hpp"
#include "nullframe/jet.hpp"

namespace nullframe {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Number, ImagUnit, Pi, Coord, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class ExprFn { Exp, Log, Sin, Cos, Sqrt, Conj, Re, Im, Abs2 };

struct Expr {
    ExprKind kind;
    double number = 0.0;
    int coord = -1;
    ExprFn fn = ExprFn::Exp;
    int exponent = 0;
    ExprPtr a, b;
};

namespace detail {

inline std::shared_ptr<Expr> make(ExprKind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
}

inline const char* fn_name(ExprFn f) {
    switch (f) {
        case ExprFn::Exp: return "exp";
        case ExprFn::Log: return "log";
        case ExprFn::Sin: return "sin";
        case ExprFn::Cos: return "cos";
        case ExprFn::Sqrt: return "sqrt";
        case ExprFn::Conj: return "conj";
        case ExprFn::Re: return "re";
        case ExprFn::Im: return "im";
        case ExprFn::Abs2: return "abs2";
    }
    return "?";
}

class Parser {
  public:
    Parser(std::string_view src, const Chart& chart) : src_(src), chart_(chart) {}

    ExprPtr run() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) throw parse_error(pos_, "unexpected trailing input");
        return e;
    }

  private:
    std::string_view src_;
    const Chart& chart_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        for (;;) {
            if (accept('+')) {
                auto e = make(ExprKind::Add);
                e->a = lhs;
                e->b = term();
                lhs = e;
            } else if (accept('-')) {
                auto e = make(ExprKind::Sub);
                e->a = lhs;
                e->b = term();
                lhs = e;
            } else {
                return lhs;
            }
        }
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        for (;;) {
            if (accept('*')) {
                auto e = make(ExprKind::Mul);
                e->a = lhs;
                e->b = factor();
                lhs = e;
            } else if (accept('/')) {
                auto e = make(ExprKind::Div);
                e->a = lhs;
                e->b = factor();
                lhs = e;
            } else {
                return lhs;
            }
        }
    }

    ExprPtr factor() {
        ExprPtr base = atom();
        if (accept('^')) {
            skip_ws();
            std::size_t at = pos_;
            bool neg = false;
            if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
                neg = src_[pos_] == '-';
                ++pos_;
            }
            if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                throw parse_error(at, "exponent must be a literal integer");
            long v = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                v = v * 10 + (src_[pos_++] - '0');
            auto e = make(ExprKind::Pow);
            e->a = base;
            e->exponent = static_cast<int>(neg ? -v : v);
            return e;
        }
        return base;
    }

    ExprPtr atom() {
        skip_ws();
        std::size_t at = pos_;
        if (pos_ >= src_.size()) throw parse_error(at, "unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr inner = expr();
            if (!accept(')')) throw parse_error(pos_, "expected ')'");
            return inner;
        }
        if (c == '-') {
            ++pos_;
            auto e = make(ExprKind::Neg);
            e->a = atom();
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(at);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier(at);
        throw parse_error(at, std::string("unexpected character '") + c + "'");
    }

    ExprPtr number(std::size_t at) {
        std::size_t n = pos_;
        while (n < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[n])) || src_[n] == '.'))
            ++n;
        if (n < src_.size() && (src_[n] == 'e' || src_[n] == 'E')) {
            std::size_t m = n + 1;
            if (m < src_.size() && (src_[m] == '+' || src_[m] == '-')) ++m;
            if (m < src_.size() && std::isdigit(static_cast<unsigned char>(src_[m]))) {
                ++m;
                while (m < src_.size() && std::isdigit(static_cast<unsigned char>(src_[m]))) ++m;
                n = m;
            }
        }
        std::string tok(src_.substr(pos_, n - pos_));
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0') throw parse_error(at, "malformed number '" + tok + "'");
        pos_ = n;
        auto e = make(ExprKind::Number);
        e->number = v;
        return e;
    }

    ExprPtr identifier(std::size_t at) {
        std::size_t n = pos_;
        while (n < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[n])) || src_[n] == '_'))
            ++n;
        std::string name(src_.substr(pos_, n - pos_));
        pos_ = n;
        if (name == "i") return make(ExprKind::ImagUnit);
        if (name == "pi") return make(ExprKind::Pi);
        static const std::pair<const char*, ExprFn> fns[] = {
            {"exp", ExprFn::Exp},  {"log", ExprFn::Log}, {"sin", ExprFn::Sin},
            {"cos", ExprFn::Cos},  {"sqrt", ExprFn::Sqrt}, {"conj", ExprFn::Conj},
            {"re", ExprFn::Re},    {"im", ExprFn::Im},   {"abs2", ExprFn::Abs2},
        };
        for (auto& [fname, f] : fns) {
            if (name == fname) {
                if (!accept('(')) throw parse_error(pos_, std::string("expected '(' after ") + fname);
                auto e = make(ExprKind::Call);
                e->fn = f;
                e->a = expr();
                if (!accept(')')) throw parse_error(pos_, "expected ')'");
                return e;
            }
        }
        if (peek() == '(') throw parse_error(at, "unknown function '" + name + "'");
        int idx = chart_.index_of(name);
        if (idx < 0) throw parse_error(at, "unknown identifier '" + name + "'");
        auto e = make(ExprKind::Coord);
        e->coord = idx;
        return e;
    }
};

}  // namespace detail

inline ExprPtr parse(std::string_view source, const Chart& chart) {
    return detail::Parser(source, chart).run();
}

// Fully parenthesized form; parse(to_string(e)) is structurally identical to e.
inline std::string to_string(const ExprPtr& e, const Chart& chart) {
    switch (e->kind) {
        case ExprKind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", e->number);
            return buf;
        }
        case ExprKind::ImagUnit: return "i";
        case ExprKind::Pi: return "pi";
        case ExprKind::Coord: return chart.names[e->coord];
        case ExprKind::Neg: return "(-" + to_string(e->a, chart) + ")";
        case ExprKind::Add: return "(" + to_string(e->a, chart) + "+" + to_string(e->b, chart) + ")";
        case ExprKind::Sub: return "(" + to_string(e->a, chart) + "-" + to_string(e->b, chart) + ")";
        case ExprKind::Mul: return "(" + to_string(e->a, chart) + "*" + to_string(e->b, chart) + ")";
        case ExprKind::Div: return "(" + to_string(e->a, chart) + "/" + to_string(e->b, chart) + ")";
        case ExprKind::Pow:
            return "(" + to_string(e->a, chart) + "^" + std::to_string(e->exponent) + ")";
        case ExprKind::Call:
            return std::string(detail::fn_name(e->fn)) + "(" + to_string(e->a, chart) + ")";
    }
    return {};
}

inline bool structurally_equal(const ExprPtr& x, const ExprPtr& y) {
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case ExprKind::Number: return x->number == y->number;
        case ExprKind::ImagUnit:
        case ExprKind::Pi: return true;
        case ExprKind::Coord: return x->coord == y->coord;
        case ExprKind::Neg: return structurally_equal(x->a, y->a);
        case ExprKind::Pow: return x->exponent == y->exponent && structurally_equal(x->a, y->a);
        case ExprKind::Call: return x->fn == y->fn && structurally_equal(x->a, y->a);
        default: return structurally_equal(x->a, y->a) && structurally_equal(x->b, y->b);
    }
}

inline Jet eval_jet(const ExprPtr& e, std::span<const double> pt, int order, int nvars) {
    switch (e->kind) {
        case ExprKind::Number: return Jet::constant(e->number, nvars, order);
        case ExprKind::ImagUnit: return Jet::constant(cplx(0, 1), nvars, order);
        case ExprKind::Pi: return Jet::constant(std::numbers::pi, nvars, order);
        case ExprKind::Coord:
            return Jet::variable(e->coord, pt[e->coord], nvars, order);
        case ExprKind::Neg: return -eval_jet(e->a, pt, order, nvars);
        case ExprKind::Add: return eval_jet(e->a, pt, order, nvars) + eval_jet(e->b, pt, order, nvars);
        case ExprKind::Sub: return eval_jet(e->a, pt, order, nvars) - eval_jet(e->b, pt, order, nvars);
        case ExprKind::Mul: return eval_jet(e->a, pt, order, nvars) * eval_jet(e->b, pt, order, nvars);
        case ExprKind::Div: return eval_jet(e->a, pt, order, nvars) / eval_jet(e->b, pt, order, nvars);
        case ExprKind::Pow: return pow(eval_jet(e->a, pt, order, nvars), e->exponent);
        case ExprKind::Call: {
            Jet a = eval_jet(e->a, pt, order, nvars);
            switch (e->fn) {
                case ExprFn::Exp: return exp(a);
                case ExprFn::Log: return log(a);
                case ExprFn::Sin: return sin(a);
                case ExprFn::Cos: return cos(a);
                case ExprFn::Sqrt: return sqrt(a);
                case ExprFn::Conj: return conj(a);
                case ExprFn::Re: return real_part(a);
                case ExprFn::Im: return imag_part(a);
                case ExprFn::Abs2: return abs2(a);
            }
            break;
        }
    }
    throw domain_error("unreachable expression kind");
}

inline ScalarField expr_field(const ExprPtr& e, int nvars) {
    return ScalarField(
        [e, nvars](std::span<const double> pt, int order) { return eval_jet(e, pt, order, nvars); });
}

inline ScalarField expr_field(std::string_view source, const Chart& chart) {
    return expr_field(parse(source, chart), chart.dim());
}

}  // namespace nullframe

#include "reslab/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace reslab {

namespace {

class Parser {
public:
    Parser(std::string_view s, int nvars) : s_(s), nvars_(nvars) {}

    ExprPtr parse() {
        auto e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static ExprPtr node(Expr::Kind k, ExprPtr a, ExprPtr b = nullptr) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->a = std::move(a);
        e->b = std::move(b);
        return e;
    }

    ExprPtr expr() {
        auto lhs = term();
        for (;;) {
            if (eat('+'))
                lhs = node(Expr::Kind::Add, lhs, term());
            else if (eat('-'))
                lhs = node(Expr::Kind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    ExprPtr term() {
        auto lhs = unary();
        for (;;) {
            if (eat('*'))
                lhs = node(Expr::Kind::Mul, lhs, unary());
            else if (eat('/'))
                lhs = node(Expr::Kind::Div, lhs, unary());
            else
                return lhs;
        }
    }

    ExprPtr unary() {
        if (eat('-')) return node(Expr::Kind::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }

    ExprPtr power() {
        auto base = atom();
        if (eat('^')) return node(Expr::Kind::Pow, base, unary());
        return base;
    }

    ExprPtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::string rest(s_.substr(pos_));
            char* end = nullptr;
            const double v = std::strtod(rest.c_str(), &end);
            if (end == rest.c_str()) fail("malformed number");
            pos_ += static_cast<std::size_t>(end - rest.c_str());
            auto e = std::make_shared<Expr>();
            e->value = v;
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string id(s_.substr(start, pos_ - start));
            if (id == "pi") {
                auto e = std::make_shared<Expr>();
                e->value = M_PI;
                return e;
            }
            if (id.size() > 1 && id[0] == 'x' &&
                id.find_first_not_of("0123456789", 1) == std::string::npos) {
                const int k = std::atoi(id.c_str() + 1);
                if (k >= nvars_) {
                    pos_ = start;
                    fail("unknown variable " + id);
                }
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::Var;
                e->var = k;
                return e;
            }
            static const std::pair<const char*, Expr::Fn> fns[] = {
                {"exp", Expr::Fn::Exp},   {"log", Expr::Fn::Log},   {"sin", Expr::Fn::Sin},
                {"cos", Expr::Fn::Cos},   {"sinh", Expr::Fn::Sinh}, {"cosh", Expr::Fn::Cosh},
                {"sqrt", Expr::Fn::Sqrt}, {"bump", Expr::Fn::Bump}};
            for (const auto& [name, fn] : fns) {
                if (id != name) continue;
                if (!eat('(')) fail("expected '(' after " + id);
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::Call;
                e->fn = fn;
                e->a = expr();
                if (!eat(')')) fail("expected ')'");
                return e;
            }
            pos_ = start;
            fail("unknown identifier " + id);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    int nvars_;
    std::size_t pos_ = 0;
};

const char* fn_name(Expr::Fn f) {
    switch (f) {
        case Expr::Fn::Exp: return "exp";
        case Expr::Fn::Log: return "log";
        case Expr::Fn::Sin: return "sin";
        case Expr::Fn::Cos: return "cos";
        case Expr::Fn::Sinh: return "sinh";
        case Expr::Fn::Cosh: return "cosh";
        case Expr::Fn::Sqrt: return "sqrt";
        case Expr::Fn::Bump: return "bump";
    }
    return "?";
}

}  // namespace

ExprPtr parse_expression(std::string_view text, int nvars) { return Parser(text, nvars).parse(); }

std::string to_string(const Expr& e) {
    std::ostringstream os;
    os.precision(17);
    switch (e.kind) {
        case Expr::Kind::Const: os << e.value; break;
        case Expr::Kind::Var: os << 'x' << e.var; break;
        case Expr::Kind::Neg: os << "(-" << to_string(*e.a) << ')'; break;
        case Expr::Kind::Add: os << '(' << to_string(*e.a) << " + " << to_string(*e.b) << ')'; break;
        case Expr::Kind::Sub: os << '(' << to_string(*e.a) << " - " << to_string(*e.b) << ')'; break;
        case Expr::Kind::Mul: os << '(' << to_string(*e.a) << " * " << to_string(*e.b) << ')'; break;
        case Expr::Kind::Div: os << '(' << to_string(*e.a) << " / " << to_string(*e.b) << ')'; break;
        case Expr::Kind::Pow: os << '(' << to_string(*e.a) << " ^ " << to_string(*e.b) << ')'; break;
        case Expr::Kind::Call: os << fn_name(e.fn) << '(' << to_string(*e.a) << ')'; break;
    }
    return os.str();
}

}  // namespace reslab

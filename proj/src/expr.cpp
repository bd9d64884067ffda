#include "cartanlab/expr.hpp"

#include "cartanlab/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace cartanlab {

namespace {

NodePtr make(NodeKind k, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

NodePtr make_number(const std::string& text) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Number;
    n->text = text;
    n->value = std::strtod(text.c_str(), nullptr);
    return n;
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
    }
    return "?";
}

bool lookup_func(const std::string& name, Func& out) {
    static const std::pair<const char*, Func> table[] = {
        {"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp}, {"log", Func::Log}, {"sqrt", Func::Sqrt}};
    for (const auto& [n, f] : table)
        if (name == n) {
            out = f;
            return true;
        }
    return false;
}

constexpr long kMaxExponent = 64;

class Parser {
public:
    Parser(const std::string& src, const std::vector<std::string>& coords) : s_(src), coords_(coords) {}

    NodePtr parse_all() {
        NodePtr e = sum();
        skip();
        if (pos_ != s_.size()) throw SyntaxError(pos_, "unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr sum() {
        NodePtr l = product();
        for (;;) {
            if (accept('+'))
                l = make(NodeKind::Add, l, product());
            else if (accept('-'))
                l = make(NodeKind::Sub, l, product());
            else
                return l;
        }
    }

    NodePtr product() {
        NodePtr l = unary();
        for (;;) {
            if (accept('*'))
                l = make(NodeKind::Mul, l, unary());
            else if (accept('/'))
                l = make(NodeKind::Div, l, unary());
            else
                return l;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(NodeKind::Neg, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (!accept('^')) return base;
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Pow;
        n->lhs = base;
        n->exponent = exponent();
        return n;
    }

    // Integer literal exponent, optionally negative, right-associative chains folded.
    long exponent() {
        skip();
        const std::size_t start = pos_;
        bool neg = accept('-');
        skip();
        const std::size_t digits_at = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == digits_at) throw SyntaxError(digits_at, "exponent must be an integer literal");
        if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
            throw SyntaxError(pos_, "exponent must be an integer literal");
        if (pos_ - digits_at > 6) throw SyntaxError(digits_at, "exponent too large");
        long base = std::stol(s_.substr(digits_at, pos_ - digits_at));
        long value = base;
        if (accept('^')) {
            const std::size_t at = pos_;
            long e = exponent();
            if (e < 0) throw SyntaxError(at, "negative exponent inside an exponent");
            value = 1;
            for (long i = 0; i < e; ++i) {
                value *= base;
                if (value > kMaxExponent) throw SyntaxError(start, "exponent too large");
            }
        }
        if (value > kMaxExponent) throw SyntaxError(start, "exponent too large");
        return neg ? -value : value;
    }

    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) throw SyntaxError(pos_, "unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = sum();
            if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw SyntaxError(pos_, "unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t d0 = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return pos_ - d0;
        };
        std::size_t nd = digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            nd += digits();
        }
        if (nd == 0) throw SyntaxError(start, "malformed number");
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = save;
        }
        return make_number(s_.substr(start, pos_ - start));
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        Func f;
        std::size_t save = pos_;
        if (accept('(')) {
            if (!lookup_func(name, f)) throw UnknownIdentifier(name, start);
            NodePtr arg = sum();
            if (accept(',')) throw SyntaxError(pos_ - 1, "functions take exactly one argument");
            if (!accept(')')) throw SyntaxError(pos_, "expected ')'");
            auto n = std::make_shared<ExprNode>();
            n->kind = NodeKind::Call;
            n->func = f;
            n->lhs = arg;
            return n;
        }
        pos_ = save;
        for (std::size_t i = 0; i < coords_.size(); ++i)
            if (coords_[i] == name) {
                auto n = std::make_shared<ExprNode>();
                n->kind = NodeKind::Var;
                n->var = i;
                n->text = name;
                return n;
            }
        if (lookup_func(name, f)) throw SyntaxError(pos_, "expected '(' after " + name);
        throw UnknownIdentifier(name, start);
    }

    const std::string& s_;
    const std::vector<std::string>& coords_;
    std::size_t pos_ = 0;
};

double eval_node(const ExprNode& n, std::span<const double> p) {
    switch (n.kind) {
        case NodeKind::Number: return n.value;
        case NodeKind::Var: return p[n.var];
        case NodeKind::Neg: return -eval_node(*n.lhs, p);
        case NodeKind::Add: return eval_node(*n.lhs, p) + eval_node(*n.rhs, p);
        case NodeKind::Sub: return eval_node(*n.lhs, p) - eval_node(*n.rhs, p);
        case NodeKind::Mul: return eval_node(*n.lhs, p) * eval_node(*n.rhs, p);
        case NodeKind::Div: {
            double d = eval_node(*n.rhs, p);
            if (d == 0.0) throw DomainError("division by zero");
            return eval_node(*n.lhs, p) / d;
        }
        case NodeKind::Pow: {
            double b = eval_node(*n.lhs, p);
            if (b == 0.0 && n.exponent < 0) throw DomainError("zero raised to a negative power");
            double r = 1.0;
            long e = n.exponent < 0 ? -n.exponent : n.exponent;
            for (long i = 0; i < e; ++i) r *= b;
            return n.exponent < 0 ? 1.0 / r : r;
        }
        case NodeKind::Call: {
            double a = eval_node(*n.lhs, p);
            switch (n.func) {
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Exp: return std::exp(a);
                case Func::Log:
                    if (!(a > 0.0)) throw DomainError("log of a non-positive number");
                    return std::log(a);
                case Func::Sqrt:
                    if (a < 0.0) throw DomainError("sqrt of a negative number");
                    return std::sqrt(a);
            }
        }
    }
    return 0.0;
}

int precedence(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Neg: return 3;
        case NodeKind::Pow: return 4;
        default: return 5;
    }
}

void print(const ExprNode& n, std::string& out) {
    auto wrap = [&](const ExprNode& c, bool paren) {
        if (paren) out += '(';
        print(c, out);
        if (paren) out += ')';
    };
    const int p = precedence(n);
    switch (n.kind) {
        case NodeKind::Number:
        case NodeKind::Var: out += n.text; return;
        case NodeKind::Neg:
            out += '-';
            wrap(*n.lhs, precedence(*n.lhs) < p);
            return;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div: {
            wrap(*n.lhs, precedence(*n.lhs) < p);
            static const char* ops[] = {" + ", " - ", "*", "/"};
            out += ops[static_cast<int>(n.kind) - static_cast<int>(NodeKind::Add)];
            wrap(*n.rhs, precedence(*n.rhs) <= p);
            return;
        }
        case NodeKind::Pow:
            wrap(*n.lhs, precedence(*n.lhs) <= p);
            out += '^';
            out += std::to_string(n.exponent);
            return;
        case NodeKind::Call:
            out += func_name(n.func);
            out += '(';
            print(*n.lhs, out);
            out += ')';
            return;
    }
}

NodePtr rational_node(const Rational& q) {
    Rational a = q < 0 ? Rational(-q) : q;
    NodePtr num = make_number(boost::multiprecision::numerator(a).str());
    NodePtr node = num;
    if (boost::multiprecision::denominator(a) != 1)
        node = make(NodeKind::Div, num, make_number(boost::multiprecision::denominator(a).str()));
    return q < 0 ? make(NodeKind::Neg, node) : node;
}

}  // namespace

double Expr::eval(std::span<const double> point) const {
    if (!root_) throw DomainError("evaluating an empty expression");
    if (point.size() != coords_.size()) throw DimensionMismatch("point has wrong number of coordinates");
    return eval_node(*root_, point);
}

std::string Expr::to_string() const {
    std::string out;
    if (root_) print(*root_, out);
    return out;
}

Expr Expr::constant(const Rational& q, std::vector<std::string> coords) {
    return Expr(rational_node(q), std::move(coords));
}

Expr Expr::zero(std::vector<std::string> coords) { return Expr(make_number("0"), std::move(coords)); }

Expr parse(const std::string& src, const std::vector<std::string>& coords) {
    Parser p(src, coords);
    return Expr(p.parse_all(), coords);
}

Expr linear_combination(const std::vector<Rational>& coeffs, const std::vector<Expr>& exprs,
                        const std::vector<std::string>& coords) {
    if (coeffs.size() != exprs.size()) throw DimensionMismatch("linear_combination: length mismatch");
    NodePtr acc;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j] == 0) continue;
        if (exprs[j].coords() != coords) throw DimensionMismatch("linear_combination: coordinate lists differ");
        const Rational c = coeffs[j];
        const bool negate = acc && c < 0;
        const Rational mag = negate ? Rational(-c) : c;
        NodePtr term = exprs[j].root();
        if (mag != 1) term = make(NodeKind::Mul, rational_node(mag), term);
        if (!acc)
            acc = term;
        else
            acc = make(negate ? NodeKind::Sub : NodeKind::Add, acc, term);
    }
    if (!acc) return Expr::zero(coords);
    return Expr(acc, coords);
}

}  // namespace cartanlab

#include "dca/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dca/errors.hpp"

namespace dca {

struct ExprNode {
    enum class Kind { number, constant, variable, negate, binary, call };
    Kind kind{};
    double value = 0.0;  // Kind::number
    std::string symbol;  // constant/variable name, operator, or function name
    std::shared_ptr<const ExprNode> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

const char* const kFunctions[] = {"re", "im", "abs", "exp", "log", "sin", "cos"};
const char* const kConstants[] = {"pi", "e", "i"};

bool is_function(const std::string& s) {
    for (const char* f : kFunctions)
        if (s == f) return true;
    return false;
}

bool is_constant(const std::string& s) {
    for (const char* c : kConstants)
        if (s == c) return true;
    return false;
}

NodePtr make_number(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::number;
    n->value = v;
    return n;
}

NodePtr make_leaf(ExprNode::Kind kind, std::string symbol) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->symbol = std::move(symbol);
    return n;
}

NodePtr make_call(std::string func, NodePtr arg) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::call;
    n->symbol = std::move(func);
    n->lhs = std::move(arg);
    return n;
}

bool is_number(const NodePtr& n, double v) {
    return n->kind == ExprNode::Kind::number && n->value == v;
}

// Constructors with the peephole simplifications that keep symbolic
// derivatives readable (0 and 1 absorption only; nothing clever).
NodePtr make_neg(NodePtr a) {
    if (is_number(a, 0.0)) return a;
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::negate;
    n->lhs = std::move(a);
    return n;
}

NodePtr make_bin(char op, NodePtr a, NodePtr b);

NodePtr make_add(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    return make_bin('+', std::move(a), std::move(b));
}

NodePtr make_sub(NodePtr a, NodePtr b) {
    if (is_number(b, 0.0)) return a;
    if (is_number(a, 0.0)) return make_neg(std::move(b));
    return make_bin('-', std::move(a), std::move(b));
}

NodePtr make_mul(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0) || is_number(b, 1.0)) return a;
    if (is_number(b, 0.0) || is_number(a, 1.0)) return b;
    return make_bin('*', std::move(a), std::move(b));
}

NodePtr make_div(NodePtr a, NodePtr b) {
    if (is_number(a, 0.0) || is_number(b, 1.0)) return a;
    return make_bin('/', std::move(a), std::move(b));
}

NodePtr make_pow(NodePtr a, NodePtr b) {
    if (is_number(b, 1.0)) return a;
    return make_bin('^', std::move(a), std::move(b));
}

NodePtr make_bin(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::binary;
    n->symbol = std::string(1, op);
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

[[noreturn]] void fail(size_t pos, const std::string& expected) {
    throw SyntaxError("syntax error at position " + std::to_string(pos) + ": expected " +
                      expected);
}

// LL(1) recursive descent over the raw text; whitespace-insensitive.
class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr run() {
        NodePtr e = parse_sum();
        skip_spaces();
        if (pos_ != text_.size()) fail(pos_, "an operator or the end of the expression");
        return e;
    }

private:
    const std::string& text_;
    size_t pos_ = 0;

    void skip_spaces() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek() {
        skip_spaces();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool eat(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    NodePtr parse_sum() {
        NodePtr a = parse_product();
        for (;;) {
            if (eat('+'))
                a = make_bin('+', a, parse_product());
            else if (eat('-'))
                a = make_bin('-', a, parse_product());
            else
                return a;
        }
    }

    NodePtr parse_product() {
        NodePtr a = parse_unary();
        for (;;) {
            if (eat('*'))
                a = make_bin('*', a, parse_unary());
            else if (eat('/'))
                a = make_bin('/', a, parse_unary());
            else
                return a;
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) return make_neg(parse_unary()); // lower precedence than ^
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr a = parse_atom();
        if (eat('^')) return make_bin('^', a, parse_unary()); // right associative
        return a;
    }

    NodePtr parse_atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_sum();
            if (!eat(')')) fail(pos_, "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        fail(pos_, "a number, a name, '-' or '('");
    }

    NodePtr parse_number() {
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark; // the 'e' was the Euler constant, not an exponent
            }
        }
        if (pos_ == start || (pos_ == start + 1 && text_[start] == '.'))
            fail(start, "a number");
        try {
            return make_number(std::stod(text_.substr(start, pos_ - start)));
        } catch (const std::exception&) {
            fail(start, "a representable number");
        }
    }

    NodePtr parse_ident() {
        size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if (is_function(name)) {
            if (!eat('(')) fail(pos_, "'(' after the function name");
            NodePtr arg = parse_sum();
            if (!eat(')')) fail(pos_, "')'");
            return make_call(name, arg);
        }
        if (is_constant(name)) return make_leaf(ExprNode::Kind::constant, name);
        if (name == "x" || name == "y" || name == "z")
            return make_leaf(ExprNode::Kind::variable, name);
        fail(start, "a known function, constant or variable (got '" + name + "')");
    }
};

Complex ipow(Complex base, long n) {
    if (n < 0) return 1.0 / ipow(base, -n);
    Complex r = 1.0;
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

Complex eval_node(const ExprNode& n, Vec2 p) {
    using K = ExprNode::Kind;
    switch (n.kind) {
        case K::number: return n.value;
        case K::constant:
            if (n.symbol == "pi") return kPi;
            if (n.symbol == "e") return std::exp(1.0);
            return Complex(0, 1);
        case K::variable:
            if (n.symbol == "x") return p.x;
            if (n.symbol == "y") return p.y;
            return Complex(p.x, p.y);
        case K::negate: return -eval_node(*n.lhs, p);
        case K::binary: {
            Complex a = eval_node(*n.lhs, p);
            Complex b = eval_node(*n.rhs, p);
            switch (n.symbol[0]) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                default: break;
            }
            // integer powers multiplied out exactly; anything else via exp/log
            if (b.imag() == 0.0 && b.real() == std::nearbyint(b.real()) &&
                std::abs(b.real()) <= 1024.0)
                return ipow(a, static_cast<long>(b.real()));
            return std::pow(a, b);
        }
        case K::call: {
            Complex a = eval_node(*n.lhs, p);
            if (n.symbol == "re") return a.real();
            if (n.symbol == "im") return a.imag();
            if (n.symbol == "abs") return std::abs(a);
            if (n.symbol == "exp") return std::exp(a);
            if (n.symbol == "log") return std::log(a);
            if (n.symbol == "sin") return std::sin(a);
            return std::cos(a);
        }
    }
    throw std::logic_error("eval_node: unreachable");
}

NodePtr diff(const NodePtr& n, char var) {
    using K = ExprNode::Kind;
    switch (n->kind) {
        case K::number:
        case K::constant: return make_number(0.0);
        case K::variable:
            if (n->symbol == "z")
                return var == 'x' ? make_number(1.0)
                                  : make_leaf(K::constant, "i");
            return make_number(n->symbol[0] == var ? 1.0 : 0.0);
        case K::negate: return make_neg(diff(n->lhs, var));
        case K::binary: {
            const NodePtr &f = n->lhs, &g = n->rhs;
            NodePtr df = diff(f, var), dg = diff(g, var);
            switch (n->symbol[0]) {
                case '+': return make_add(df, dg);
                case '-': return make_sub(df, dg);
                case '*': return make_add(make_mul(df, g), make_mul(f, dg));
                case '/':
                    return make_div(make_sub(make_mul(df, g), make_mul(f, dg)),
                                    make_pow(g, make_number(2.0)));
                default: break;
            }
            if (g->kind == K::number) { // d f^n = n f^(n-1) f'
                double e = g->value;
                if (e == 0.0) return make_number(0.0);
                return make_mul(make_mul(make_number(e), make_pow(f, make_number(e - 1.0))), df);
            }
            // general power: f^g (g' log f + g f'/f)
            return make_mul(make_pow(f, g),
                            make_add(make_mul(dg, make_call("log", f)),
                                     make_mul(g, make_div(df, f))));
        }
        case K::call: {
            const NodePtr& f = n->lhs;
            NodePtr df = diff(f, var);
            if (n->symbol == "re") return make_call("re", df);
            if (n->symbol == "im") return make_call("im", df);
            if (n->symbol == "abs") // (re f re f' + im f im f') / abs f
                return make_div(make_add(make_mul(make_call("re", f), make_call("re", df)),
                                         make_mul(make_call("im", f), make_call("im", df))),
                                make_call("abs", f));
            if (n->symbol == "exp") return make_mul(make_call("exp", f), df);
            if (n->symbol == "log") return make_div(df, f);
            if (n->symbol == "sin") return make_mul(make_call("cos", f), df);
            return make_neg(make_mul(make_call("sin", f), df)); // cos
        }
    }
    throw std::logic_error("diff: unreachable");
}

std::string number_repr(double x) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == x) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int precedence(const ExprNode& n) {
    using K = ExprNode::Kind;
    switch (n.kind) {
        case K::binary:
            if (n.symbol == "+" || n.symbol == "-") return 1;
            if (n.symbol == "*" || n.symbol == "/") return 2;
            return 4; // ^
        case K::negate: return 3;
        default: return 5;
    }
}

void print(const ExprNode& n, std::string& out) {
    using K = ExprNode::Kind;
    auto wrapped = [&](const ExprNode& child, bool parens) {
        if (parens) out += '(';
        print(child, out);
        if (parens) out += ')';
    };
    switch (n.kind) {
        case K::number: out += number_repr(n.value); return;
        case K::constant:
        case K::variable: out += n.symbol; return;
        case K::negate:
            out += '-';
            wrapped(*n.lhs, precedence(*n.lhs) < 3);
            return;
        case K::binary: {
            int level = precedence(n);
            if (n.symbol == "^") {
                wrapped(*n.lhs, precedence(*n.lhs) < 5);  // base must be atomic
                out += '^';
                wrapped(*n.rhs, precedence(*n.rhs) < 3);  // exponent is unary-level
            } else {
                wrapped(*n.lhs, precedence(*n.lhs) < level);
                out += n.symbol;
                // - and / are left associative: an equal-precedence right
                // child keeps its parentheses
                wrapped(*n.rhs, precedence(*n.rhs) <= level);
            }
            return;
        }
        case K::call:
            out += n.symbol;
            out += '(';
            print(*n.lhs, out);
            out += ')';
            return;
    }
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind || a.value != b.value || a.symbol != b.symbol) return false;
    if (!!a.lhs != !!b.lhs || !!a.rhs != !!b.rhs) return false;
    if (a.lhs && !equal_nodes(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !equal_nodes(*a.rhs, *b.rhs)) return false;
    return true;
}

} // namespace

BoundaryExpr parse_expr(const std::string& text) {
    return {text, Parser(text).run()};
}

Complex eval_complex(const BoundaryExpr& expr, Vec2 p) {
    if (!expr.root) throw std::invalid_argument("eval: empty expression");
    return eval_node(*expr.root, p);
}

double eval_real(const BoundaryExpr& expr, Vec2 p) {
    Complex w = eval_complex(expr, p);
    if (std::abs(w.imag()) > 1e-12 * std::max(1.0, std::abs(w)))
        throw NonRealResult("expression evaluates to a non-real value at (" +
                            std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
    return w.real();
}

BoundaryExpr derivative(const BoundaryExpr& expr, char var) {
    if (!expr.root) throw std::invalid_argument("derivative: empty expression");
    if (var != 'x' && var != 'y')
        throw std::invalid_argument("derivative: variable must be 'x' or 'y'");
    BoundaryExpr out;
    out.root = diff(expr.root, var);
    out.source = to_string(out);
    return out;
}

std::string to_string(const BoundaryExpr& expr) {
    if (!expr.root) return "";
    std::string out;
    print(*expr.root, out);
    return out;
}

bool equal(const BoundaryExpr& a, const BoundaryExpr& b) {
    if (!a.root || !b.root) return !a.root && !b.root;
    return equal_nodes(*a.root, *b.root);
}

SmoothField field_from_expr(const BoundaryExpr& expr) {
    auto dx = derivative(expr, 'x');
    auto dy = derivative(expr, 'y');
    auto dxx = derivative(dx, 'x');
    auto dyy = derivative(dy, 'y');
    SmoothField field;
    field.value = [expr](Vec2 p) { return eval_real(expr, p); };
    field.grad = [dx, dy](Vec2 p) { return Vec2{eval_real(dx, p), eval_real(dy, p)}; };
    field.laplacian = [dxx, dyy](Vec2 p) { return eval_real(dxx, p) + eval_real(dyy, p); };
    return field;
}

} // namespace dca

#include "dirichlet/expression.hpp"

#include "dirichlet/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace dirichlet {

struct Expression::Node {
    enum class Kind { number, variable, unary, binary, call } kind;
    double value = 0.0;
    char op = 0;  // variable letter, operator, or unused
    std::string name;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("expression: " + what + " at column " + std::to_string(pos_ + 1));
    }

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

    static NodePtr make(Kind k, char op, std::vector<NodePtr> args, std::string name = {}, double v = 0.0) {
        auto n = std::make_shared<Expression::Node>();
        n->kind = k;
        n->op = op;
        n->args = std::move(args);
        n->name = std::move(name);
        n->value = v;
        return n;
    }

    NodePtr sum() {
        NodePtr l = product();
        for (;;) {
            if (accept('+'))
                l = make(Kind::binary, '+', {l, product()});
            else if (accept('-'))
                l = make(Kind::binary, '-', {l, product()});
            else
                return l;
        }
    }

    NodePtr product() {
        NodePtr l = unary();
        for (;;) {
            if (accept('*'))
                l = make(Kind::binary, '*', {l, unary()});
            else if (accept('/'))
                l = make(Kind::binary, '/', {l, unary()});
            else
                return l;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Kind::unary, '-', {unary()});
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Kind::binary, '^', {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (accept('(')) {
            NodePtr e = sum();
            if (!accept(')')) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::string rest(s_.substr(pos_));
            char* end = nullptr;
            const double v = std::strtod(rest.c_str(), &end);
            if (end == rest.c_str()) fail("bad number");
            pos_ += static_cast<std::size_t>(end - rest.c_str());
            return make(Kind::number, 0, {}, {}, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string id;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) id.push_back(s_[pos_++]);
            if (id == "pi") return make(Kind::number, 0, {}, {}, std::numbers::pi);
            if (id == "e") return make(Kind::number, 0, {}, {}, std::numbers::e);
            if (id == "x" || id == "i" || id == "N" || id == "n") return make(Kind::variable, id[0], {});
            if (!accept('(')) fail("unknown variable '" + id + "'");
            std::vector<NodePtr> args{sum()};
            while (accept(',')) args.push_back(sum());
            if (!accept(')')) fail("missing ')'");
            static const char* unary_fns[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "abs", "floor"};
            static const char* binary_fns[] = {"min", "max", "pow"};
            for (const char* f : unary_fns)
                if (id == f) {
                    if (args.size() != 1) fail(id + " takes one argument");
                    return make(Kind::call, 0, std::move(args), id);
                }
            for (const char* f : binary_fns)
                if (id == f) {
                    if (args.size() != 2) fail(id + " takes two arguments");
                    return make(Kind::call, 0, std::move(args), id);
                }
            fail("unknown function '" + id + "'");
        }
        fail("unexpected character");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, const Variables& v) {
    switch (n.kind) {
        case Kind::number:
            return n.value;
        case Kind::variable:
            switch (n.op) {
                case 'x': return v.x;
                case 'i': return v.i;
                case 'N': return v.N;
                default: return v.n;
            }
        case Kind::unary:
            return -eval(*n.args[0], v);
        case Kind::binary: {
            const double a = eval(*n.args[0], v), b = eval(*n.args[1], v);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                default: return std::pow(a, b);
            }
        }
        case Kind::call: {
            const double a = eval(*n.args[0], v);
            if (n.args.size() == 2) {
                const double b = eval(*n.args[1], v);
                if (n.name == "min") return std::min(a, b);
                if (n.name == "max") return std::max(a, b);
                return std::pow(a, b);
            }
            if (n.name == "sin") return std::sin(a);
            if (n.name == "cos") return std::cos(a);
            if (n.name == "tan") return std::tan(a);
            if (n.name == "exp") return std::exp(a);
            if (n.name == "log") return std::log(a);
            if (n.name == "sqrt") return std::sqrt(a);
            if (n.name == "abs") return std::abs(a);
            return std::floor(a);
        }
    }
    return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
    Expression e;
    e.root_ = Parser(text).parse();
    e.text_ = std::string(text);
    return e;
}

double Expression::operator()(const Variables& v) const { return eval(*root_, v); }

}  // namespace dirichlet

#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace dirichlet {

/// Values bound to the variables of a sequence expression.
struct Variables {
    double x = 0.0;  ///< point coordinate
    double i = 0.0;  ///< point index
    double N = 0.0;  ///< point count
    double n = 0.0;  ///< sequence index, 1-based
};

/**
 * Small arithmetic language for closed-form sequences:
 *   numbers, x i N n pi e, + - * / ^ (right associative), unary minus,
 *   sin cos tan exp log sqrt abs floor, min(a,b) max(a,b) pow(a,b).
 * Throws InputError with the offending column on a syntax error.
 */
class Expression {
public:
    static Expression parse(std::string_view text);
    double operator()(const Variables& v) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace dirichlet

#pragma once

#include <memory>
#include <string>

#include "dca/analysis.hpp"
#include "dca/geometry.hpp"

namespace dca {

struct ExprNode;

// A parsed arithmetic expression over the variables x, y and z = x + iy,
// with operators + - * / ^ (caret binds tighter than unary minus), the
// functions re, im, abs, exp, log, sin, cos and the constants pi, e, i.
// Evaluation runs in complex arithmetic; extracting boundary data demands a
// real top-level value.
struct BoundaryExpr {
    std::string source;
    std::shared_ptr<const ExprNode> root;
};

// Recursive-descent parse with standard precedence; throws SyntaxError whose
// message pins the offending position and the expected token set.
BoundaryExpr parse_expr(const std::string& text);

Complex eval_complex(const BoundaryExpr& expr, Vec2 p);

// Evaluates and requires |imaginary part| <= 1e-12 * max(1, |value|);
// throws NonRealResult otherwise.
double eval_real(const BoundaryExpr& expr, Vec2 p);

// Symbolic partial derivative with respect to 'x' or 'y'; z differentiates
// to 1 and i respectively.
BoundaryExpr derivative(const BoundaryExpr& expr, char var);

// Prints with minimal parentheses; parsing the result yields an equal AST.
std::string to_string(const BoundaryExpr& expr);
bool equal(const BoundaryExpr& a, const BoundaryExpr& b);

// Bundles the expression with its first and second symbolic derivatives as
// real-valued evaluators.
SmoothField field_from_expr(const BoundaryExpr& expr);

} // namespace dca

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "dca/errors.hpp"
#include "dca/expr.hpp"

using namespace dca;

namespace {

double at(const std::string& src, double x, double y) {
    return eval_real(parse_expr(src), Vec2{x, y});
}

} // namespace

TEST_CASE("basic evaluations") {
    REQUIRE(at("re(z^2)", 1.0, 1.0) == 0.0);
    REQUIRE(at("im(z^2)", 1.0, 1.0) == 2.0);
    REQUIRE(at("x*y", 2.0, 3.0) == 6.0);
    REQUIRE(at("abs(z)", 3.0, 4.0) == 5.0);
    REQUIRE(at("x^2-y^2", 3.0, 2.0) == 5.0);
    REQUIRE(at("re(exp(i*pi))", 0.0, 0.0) == doctest::Approx(-1.0).epsilon(1e-15));
    REQUIRE(at("log(e)", 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    REQUIRE(at("sin(pi/2)", 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    REQUIRE(at("cos(0)", 0.0, 0.0) == 1.0);
}

TEST_CASE("precedence and associativity") {
    REQUIRE(at("2^3^2", 0.0, 0.0) == 512.0);   // right associative
    REQUIRE(at("-2^2", 0.0, 0.0) == -4.0);     // caret binds tighter than unary minus
    REQUIRE(at("2+3*4", 0.0, 0.0) == 14.0);
    REQUIRE(at("(2+3)*4", 0.0, 0.0) == 20.0);
    REQUIRE(at("2-3-4", 0.0, 0.0) == -5.0);    // left associative
    REQUIRE(at("x*-y", 2.0, 3.0) == -6.0);
    REQUIRE(at("2e+1", 0.0, 0.0) == 20.0);     // scientific literal, not 2 + e + 1
}

TEST_CASE("complex evaluation") {
    BoundaryExpr e = parse_expr("i*z + 1");
    Complex w = eval_complex(e, Vec2{2.0, 3.0});
    REQUIRE(w.real() == doctest::Approx(-2.0).epsilon(1e-15));
    REQUIRE(w.imag() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("syntax errors pin the offending position") {
    auto message_of = [](const std::string& src) {
        try {
            parse_expr(src);
        } catch (const SyntaxError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    REQUIRE(message_of("re(").find("position 3") != std::string::npos);
    REQUIRE(message_of("2e").find("position 1") != std::string::npos);
    REQUIRE(message_of("x +").find("position 3") != std::string::npos);
    REQUIRE(message_of("foo(x)").find("foo") != std::string::npos);
    REQUIRE(message_of("(x").find("')'") != std::string::npos);
    REQUIRE_THROWS_AS(parse_expr(""), SyntaxError);
    REQUIRE_THROWS_AS(parse_expr("1 2"), SyntaxError);
}

TEST_CASE("real extraction rejects complex values") {
    REQUIRE_THROWS_AS(at("i*x", 1.0, 0.0), NonRealResult);
    REQUIRE_THROWS_AS(at("z", 0.5, 2.0), NonRealResult);
    REQUIRE(at("z", 0.5, 0.0) == 0.5); // real on the axis
    REQUIRE(at("re(z)+0*i", 0.5, 2.0) == 0.5);
}

TEST_CASE("printing round-trips through the parser") {
    std::vector<std::string> sources = {
        "re(z^2)",  "x*y",     "-2^2",          "2^3^2",        "x*-y",
        "abs(z)^2", "1/(x-x)", "exp(x)*cos(y)", "re(z)+im(z)*2", "(x+y)^3",
    };
    for (const std::string& src : sources) {
        BoundaryExpr a = parse_expr(src);
        BoundaryExpr b = parse_expr(to_string(a));
        REQUIRE(equal(a, b));
    }
    REQUIRE_FALSE(equal(parse_expr("x+y"), parse_expr("y+x")));
}

TEST_CASE("symbolic derivatives evaluate correctly") {
    BoundaryExpr sq = parse_expr("x^2");
    REQUIRE(eval_real(derivative(sq, 'x'), Vec2{3.0, 0.0}) == 6.0);
    REQUIRE(eval_real(derivative(sq, 'y'), Vec2{3.0, 0.0}) == 0.0);

    BoundaryExpr xy = parse_expr("x*y");
    REQUIRE(eval_real(derivative(xy, 'y'), Vec2{2.0, 5.0}) == 2.0);

    BoundaryExpr z = parse_expr("z");
    Complex dz = eval_complex(derivative(z, 'y'), Vec2{0.0, 0.0});
    REQUIRE(dz == Complex(0.0, 1.0));

    BoundaryExpr s = parse_expr("sin(x*y)");
    double got = eval_real(derivative(s, 'x'), Vec2{0.4, 1.3});
    REQUIRE(got == doctest::Approx(std::cos(0.4 * 1.3) * 1.3).epsilon(1e-14));

    REQUIRE_THROWS_AS(derivative(sq, 'q'), std::invalid_argument);
}

TEST_CASE("field_from_expr bundles value, gradient and Laplacian") {
    SmoothField f = field_from_expr(parse_expr("abs(z)^2"));
    Vec2 p{0.7, -0.3};
    REQUIRE(f.value(p) == doctest::Approx(0.58).epsilon(1e-15));
    REQUIRE(f.grad(p).x == doctest::Approx(1.4).epsilon(1e-12));
    REQUIRE(f.grad(p).y == doctest::Approx(-0.6).epsilon(1e-12));
    REQUIRE(f.laplacian(p) == doctest::Approx(4.0).epsilon(1e-12));

    SmoothField h = field_from_expr(parse_expr("exp(x)*cos(y)"));
    for (Vec2 q : {Vec2{0.3, 0.8}, Vec2{-1.0, 0.2}, Vec2{0.0, 0.0}})
        REQUIRE(std::abs(h.laplacian(q)) <= 1e-12 * std::exp(q.x));

    SmoothField saddle = field_from_expr(parse_expr("x^2-y^2"));
    REQUIRE(saddle.grad(Vec2{1.5, 2.0}).x == 3.0);
    REQUIRE(saddle.grad(Vec2{1.5, 2.0}).y == -4.0);
    REQUIRE(saddle.laplacian(Vec2{1.5, 2.0}) == 0.0);
}

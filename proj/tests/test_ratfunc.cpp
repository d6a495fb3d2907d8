#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pfaffkit/poly_gcd.hpp"
#include "pfaffkit/rational_function.hpp"
#include "pfaffkit/rng.hpp"
#include "test_support.hpp"

using namespace pfk;

namespace {
Polynomial<Rat> qvar(std::size_t n, std::size_t i) {
    return Polynomial<Rat>::variable(n, i, Rat(1));
}
Polynomial<Rat> qconst(std::size_t n, long c) { return Polynomial<Rat>::constant(n, Rat(c)); }
}  // namespace

TEST_CASE("poly_gcd pinned examples") {
    auto x = qvar(2, 0), y = qvar(2, 1);

    // (x-y)(x+y) and (x+y)^2 share x+y
    CHECK(poly_gcd(x * x - y * y, (x + y) * (x + y)) == x + y);

    // univariate: x^2-1 and x^3-1 share x-1
    auto t = qvar(1, 0);
    CHECK(poly_gcd(t * t - qconst(1, 1), t * t * t - qconst(1, 1)) == t - qconst(1, 1));

    // content in one variable: x(x+y) and x(x-y) share exactly x
    CHECK(poly_gcd(x * (x + y), x * (x - y)) == x);

    // coprime
    CHECK(poly_gcd(x + qconst(2, 1), y) == qconst(2, 1));

    // zero and constant edge cases; results are monic
    CHECK(poly_gcd(Polynomial<Rat>::zero(2), x.scaled(Rat(3))) == x);
    CHECK(poly_gcd(qconst(2, 5), x) == qconst(2, 1));

    // over F_5: (x+1)^2 (x+2) and (x+1)(x+3) share x+1
    auto xf = Polynomial<Fp>::variable(1, 0, Fp(1, 5));
    auto c = [&](std::uint64_t v) { return Polynomial<Fp>::constant(1, Fp(v, 5)); };
    auto a = (xf + c(1)) * (xf + c(1)) * (xf + c(2));
    auto b = (xf + c(1)) * (xf + c(3));
    CHECK(poly_gcd(a, b) == xf + c(1));
}

TEST_CASE("poly_gcd properties on random inputs") {
    Rng rng(101);
    for (int i = 0; i < 15; ++i) {
        auto a = testing::nonzero([&] { return testing::random_rat_poly(rng, 2, 2, 3); });
        auto b = testing::nonzero([&] { return testing::random_rat_poly(rng, 2, 2, 3); });
        auto h = testing::nonzero([&] { return testing::random_rat_poly(rng, 2, 2, 2); });
        auto g = poly_gcd(a * h, b * h);
        CHECK(exact_divide(a * h, g).has_value());
        CHECK(exact_divide(b * h, g).has_value());
        CHECK(exact_divide(g, monic(h)).has_value());  // h | gcd
        CHECK(g == monic(h * poly_gcd(a, b)));
        CHECK(poly_gcd(a, b) == poly_gcd(b, a));
    }
    for (int i = 0; i < 10; ++i) {
        auto a = testing::nonzero([&] { return testing::random_fp_poly(rng, 2, 3, 3, 7); });
        auto h = testing::nonzero([&] { return testing::random_fp_poly(rng, 2, 2, 2, 7); });
        auto g = poly_gcd(a * h, h);
        CHECK(exact_divide(g, monic(h)).has_value());
        CHECK(exact_divide(a * h, g).has_value());
    }
}

TEST_CASE("RationalFunction canonical form") {
    auto x = qvar(2, 0), y = qvar(2, 1);

    RationalFunction<Rat> r(x * x - qconst(2, 1), x - qconst(2, 1));  // (x^2-1)/(x-1)
    CHECK(r.num() == x + qconst(2, 1));
    CHECK(r.den() == qconst(2, 1));

    // denominator normalized monic
    RationalFunction<Rat> s(x, y.scaled(Rat(2)));
    CHECK(s.num() == x.scaled(Rat(1, 2)));
    CHECK(s.den() == y);

    RationalFunction<Rat> z(Polynomial<Rat>::zero(2), x);
    CHECK(z.is_zero());
    CHECK(z.den() == qconst(2, 1));

    CHECK_THROWS_AS(RationalFunction<Rat>(x, Polynomial<Rat>::zero(2)), std::domain_error);
}

TEST_CASE("RationalFunction arithmetic") {
    auto x = qvar(2, 0), y = qvar(2, 1);
    RationalFunction<Rat> ix(qconst(2, 1), x), iy(qconst(2, 1), y);
    CHECK((ix + iy) == RationalFunction<Rat>(x + y, x * y));
    CHECK((ix * iy) == RationalFunction<Rat>(qconst(2, 1), x * y));
    CHECK((ix - ix).is_zero());
    CHECK((ix / iy) == RationalFunction<Rat>(y, x));
    CHECK_THROWS_AS(ix / RationalFunction<Rat>::zero(2), std::domain_error);

    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        auto a = testing::random_rat_poly(rng, 2, 2, 3);
        auto b = testing::nonzero([&] { return testing::random_rat_poly(rng, 2, 2, 3); });
        auto c = testing::nonzero([&] { return testing::random_rat_poly(rng, 2, 2, 3); });
        // equal values in different clothes compare equal after canonicalization
        RationalFunction<Rat> u(a, b), v(a * c, b * c);
        CHECK(u == v);
        CHECK((u - v).is_zero());
        CHECK(u.num() * v.den() == v.num() * u.den());
    }
}

TEST_CASE("RationalFunction printing") {
    auto x = qvar(2, 0), y = qvar(2, 1);
    std::vector<std::string> names{"x", "y"};
    CHECK(RationalFunction<Rat>(-y, x).str(names) == "-y/x");
    CHECK(RationalFunction<Rat>(x + qconst(2, 1), x * y).str(names) == "(x + 1)/(x*y)");
    CHECK(RationalFunction<Rat>(x, y * y).str(names) == "x/y^2");
    CHECK(RationalFunction<Rat>(x).str(names) == "x");
    CHECK(RationalFunction<Rat>::zero(2).str(names) == "0");
    CHECK(RationalFunction<Rat>(qconst(2, 1), x * x + y).str(names) == "1/(x^2 + y)");
}

TEST_CASE("RationalFunction over a prime field") {
    auto xf = Polynomial<Fp>::variable(2, 0, Fp(1, 5));
    auto yf = Polynomial<Fp>::variable(2, 1, Fp(1, 5));
    RationalFunction<Fp> r(xf.scaled(Fp(2, 5)), yf.scaled(Fp(3, 5)));
    CHECK(r.den() == yf);                       // denominator monic
    CHECK(r.num() == xf.scaled(Fp(4, 5)));      // 2/3 = 2*2 = 4 mod 5
    CHECK((r - r).is_zero());
    RationalFunction<Fp> z = RationalFunction<Fp>::zero(2);
    CHECK((z + r) == r);
    CHECK((z * r).is_zero());
}

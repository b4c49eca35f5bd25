#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bsk/poly.hpp"

using namespace bsk::poly;

namespace {

SpherePoly var(int i) { return SpherePoly::variable(i); }

std::vector<Exponents> monomials_up_to(int max_degree) {
    std::vector<Exponents> out;
    for (int d = 0; d <= max_degree; ++d)
        for (int a = d; a >= 0; --a)
            for (int b = d - a; b >= 0; --b)
                for (int c = d - a - b; c >= 0; --c) out.push_back({a, b, c, d - a - b - c});
    return out;
}

SpherePoly random_poly(std::mt19937_64& rng, int max_degree) {
    std::uniform_int_distribution<int> coeff(-4, 4);
    SpherePoly p;
    for (const auto& e : monomials_up_to(max_degree)) p.add_term(e, coeff(rng));
    return p;
}

}  // namespace

TEST_CASE("arithmetic basics") {
    CHECK((var(0) - var(0)).is_zero());
    CHECK((var(0) + (Rational(-1) * var(0))).is_zero());

    const SpherePoly sq = var(0) * var(0);
    CHECK(sq.terms().size() == 1);
    CHECK(sq.terms().at({2, 0, 0, 0}) == 1);

    const SpherePoly diff = (var(0) + var(1)) * (var(0) - var(1));
    SpherePoly expect = var(0) * var(0) - var(1) * var(1);
    CHECK((diff - expect).is_zero());
}

TEST_CASE("no zero coefficients are stored") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10; ++t) {
        const SpherePoly p = random_poly(rng, 3);
        const SpherePoly q = p - p;
        CHECK(q.is_zero());
        const SpherePoly sq = p * p;
        for (const auto& [e, c] : sq.terms()) CHECK(c != 0);
    }
}

TEST_CASE("frame derivations from the standard frame") {
    CHECK((frame_derive(var(0), FrameField::Xi) + var(1)).is_zero());   // xi(x1) = -y1
    CHECK(frame_derive(SpherePoly::constant(5), FrameField::X1).is_zero());
    CHECK(frame_derive(SpherePoly::radius_squared(), FrameField::Xi).is_zero());
    CHECK(frame_derive(SpherePoly::radius_squared(), FrameField::X1).is_zero());
    CHECK(frame_derive(SpherePoly::radius_squared(), FrameField::X2).is_zero());

    // Full first-degree table for X2 = -y2 dx1 - x2 dy1 + y1 dx2 + x1 dy2.
    CHECK((frame_derive(var(0), FrameField::X2) + var(3)).is_zero());
    CHECK((frame_derive(var(1), FrameField::X2) + var(2)).is_zero());
    CHECK((frame_derive(var(2), FrameField::X2) - var(1)).is_zero());
    CHECK((frame_derive(var(3), FrameField::X2) - var(0)).is_zero());
}

TEST_CASE("degree never increases under frame derivation") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 10; ++t) {
        const SpherePoly p = random_poly(rng, 4);
        for (auto f : {FrameField::Xi, FrameField::X1, FrameField::X2})
            CHECK(frame_derive(p, f).degree() <= p.degree());
    }
}

TEST_CASE("sphere integrals: frozen values") {
    CHECK(sphere_integral(SpherePoly::constant(1)).pi2_multiple == 2);  // Vol = 2 pi^2
    CHECK(sphere_integral(var(0)).is_zero());
    CHECK(sphere_integral(var(0) * var(0)).pi2_multiple == Rational(1, 2));
    CHECK(sphere_integral(SpherePoly::constant(1)).value() == doctest::Approx(19.739208802178716));
}

TEST_CASE("monomial integral against the recurrence oracle") {
    // I(a+2,b,c,d) = I(a,b,c,d) * (a+1)/(a+b+c+d+4), built up from I(0) = 2 pi^2.
    // The recurrence follows from the Gamma representation of the integral and
    // is an independent route to the same numbers as the double factorials.
    const int max_half = 3;
    for (int i = 0; i <= max_half; ++i)
        for (int j = 0; j <= max_half; ++j)
            for (int k = 0; k <= max_half; ++k)
                for (int l = 0; l <= max_half; ++l) {
                    Rational oracle = 2;
                    int cur[4] = {0, 0, 0, 0};
                    const int target[4] = {2 * i, 2 * j, 2 * k, 2 * l};
                    for (int axis = 0; axis < 4; ++axis) {
                        while (cur[axis] < target[axis]) {
                            const int sum = cur[0] + cur[1] + cur[2] + cur[3];
                            oracle *= Rational(cur[axis] + 1, sum + 4);
                            cur[axis] += 2;
                        }
                    }
                    CHECK(monomial_integral_pi2({2 * i, 2 * j, 2 * k, 2 * l}) == oracle);
                }
}

TEST_CASE("odd exponents integrate to exactly zero") {
    for (const auto& e : monomials_up_to(7)) {
        if ((e[0] % 2) || (e[1] % 2) || (e[2] % 2) || (e[3] % 2))
            CHECK(monomial_integral_pi2(e) == 0);
    }
}

TEST_CASE("inner product: frozen values and the ideal kernel") {
    CHECK(inner_product(SpherePoly::constant(1), SpherePoly::constant(1)).pi2_multiple == 2);
    CHECK(inner_product(var(0), var(1)).is_zero());

    const SpherePoly ideal_gen = SpherePoly::radius_squared() - SpherePoly::constant(1);
    for (const auto& e : monomials_up_to(4))
        CHECK(inner_product(ideal_gen, SpherePoly::monomial(e, 1)).is_zero());
}

TEST_CASE("restriction equality via the Gram kernel") {
    std::mt19937_64 rng(13);
    const SpherePoly ideal_gen = SpherePoly::radius_squared() - SpherePoly::constant(1);
    for (int t = 0; t < 6; ++t) {
        const SpherePoly p = random_poly(rng, 2);
        CHECK(is_zero_on_sphere(ideal_gen * p));
    }
    CHECK_FALSE(is_zero_on_sphere(var(0)));
    CHECK_FALSE(is_zero_on_sphere(SpherePoly::constant(1)));
}

TEST_CASE("Leibniz rule (property, exact)") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 12; ++t) {
        const SpherePoly p = random_poly(rng, 3), q = random_poly(rng, 3);
        for (auto f : {FrameField::Xi, FrameField::X1, FrameField::X2}) {
            const SpherePoly lhs = frame_derive(p * q, f);
            const SpherePoly rhs = frame_derive(p, f) * q + p * frame_derive(q, f);
            CHECK((lhs - rhs).is_zero());
        }
    }
}

TEST_CASE("integration by parts (property, exact)") {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 12; ++t) {
        const SpherePoly p = random_poly(rng, 4), q = random_poly(rng, 4);
        for (auto f : {FrameField::Xi, FrameField::X1, FrameField::X2}) {
            const SphereScalar lhs = inner_product(frame_derive(p, f), q);
            const SphereScalar rhs = inner_product(p, frame_derive(q, f));
            CHECK(lhs.pi2_multiple + rhs.pi2_multiple == 0);
        }
    }
}

TEST_CASE("structure constants on all monomials up to degree 3") {
    const FrameField fields[3] = {FrameField::Xi, FrameField::X1, FrameField::X2};
    for (const auto& e : monomials_up_to(3)) {
        const SpherePoly p = SpherePoly::monomial(e, 1);
        for (int a = 0; a < 3; ++a) {
            const int b = (a + 1) % 3, c = (a + 2) % 3;
            // [e_a, e_b] p = e_a(e_b p) - e_b(e_a p) = -2 e_c p
            const SpherePoly lhs = frame_derive(frame_derive(p, fields[b]), fields[a]) -
                                   frame_derive(frame_derive(p, fields[a]), fields[b]);
            const SpherePoly rhs = Rational(-2) * frame_derive(p, fields[c]);
            CHECK((lhs - rhs).is_zero());
        }
    }
}

TEST_CASE("double-to-rational conversion is exact") {
    const double v = 0.1;
    const Rational r = rational_from_double(v);
    CHECK(r.convert_to<double>() == v);
    CHECK(rational_from_double(0.5) == Rational(1, 2));
    CHECK(rational_from_double(-3.0) == -3);
}

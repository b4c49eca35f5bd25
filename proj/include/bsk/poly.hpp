#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

// Exact polynomial algebra on R^4 restricted to the unit 3-sphere.
// Variables are ordered (x1, y1, x2, y2); coefficients are exact rationals.

namespace bsk::poly {

using Rational = boost::multiprecision::cpp_rational;

// Exponent tuple (a,b,c,d) for x1^a y1^b x2^c y2^d.
using Exponents = std::array<int, 4>;

struct Monomial {
    Exponents exponents{0, 0, 0, 0};
    Rational coefficient{0};

    int total_degree() const { return exponents[0] + exponents[1] + exponents[2] + exponents[3]; }
};

// A polynomial as a finite exponent->coefficient map; zero coefficients are
// never stored. Two SpherePolys represent the same function on S^3 iff the
// exact sphere integral of their squared difference vanishes.
class SpherePoly {
  public:
    SpherePoly() = default;

    static SpherePoly zero() { return SpherePoly{}; }
    static SpherePoly constant(const Rational& c);
    static SpherePoly variable(int index);                       // 0..3
    static SpherePoly monomial(const Exponents& e, const Rational& c);

    // x1^2 + y1^2 + x2^2 + y2^2
    static SpherePoly radius_squared();

    const std::map<Exponents, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;                                          // -1 for the zero polynomial
    std::size_t term_count() const { return terms_.size(); }

    void add_term(const Exponents& e, const Rational& c);

    SpherePoly& operator+=(const SpherePoly& o);
    SpherePoly& operator-=(const SpherePoly& o);

    friend SpherePoly operator+(SpherePoly a, const SpherePoly& b) { return a += b; }
    friend SpherePoly operator-(SpherePoly a, const SpherePoly& b) { return a -= b; }
    friend SpherePoly operator*(const SpherePoly& a, const SpherePoly& b);
    friend SpherePoly operator*(const Rational& s, SpherePoly p);
    friend SpherePoly operator-(SpherePoly p);

    bool operator==(const SpherePoly& o) const { return terms_ == o.terms_; }

    // Plain pointwise evaluation (coefficients converted to double per term).
    double evaluate(const std::array<double, 4>& x) const;

    std::string str() const;

  private:
    std::map<Exponents, Rational> terms_;
};

enum class FrameField { Xi, X1, X2 };

// Directional derivative along the standard frame. Degree never increases.
SpherePoly frame_derive(const SpherePoly& p, FrameField which);

// An exact rational multiple of pi^2 (every sphere integral of a rational
// polynomial is one).
struct SphereScalar {
    Rational pi2_multiple{0};

    double value() const;
    bool is_zero() const { return pi2_multiple == 0; }

    SphereScalar& operator+=(const SphereScalar& o) {
        pi2_multiple += o.pi2_multiple;
        return *this;
    }
    friend SphereScalar operator+(SphereScalar a, const SphereScalar& b) { return a += b; }
    friend SphereScalar operator-(const SphereScalar& a, const SphereScalar& b) {
        return SphereScalar{a.pi2_multiple - b.pi2_multiple};
    }
    friend SphereScalar operator*(const Rational& s, const SphereScalar& a) {
        return SphereScalar{s * a.pi2_multiple};
    }
    bool operator==(const SphereScalar& o) const { return pi2_multiple == o.pi2_multiple; }
};

// Exact integral of a single monomial over the unit S^3; zero unless all
// exponents are even, otherwise 4 * prod (e_i - 1)!! / (sum e_i + 2)!! times pi^2.
Rational monomial_integral_pi2(const Exponents& e);

SphereScalar sphere_integral(const SpherePoly& p);
SphereScalar inner_product(const SpherePoly& p, const SpherePoly& q);

// Restriction equality: p vanishes identically on S^3.
bool is_zero_on_sphere(const SpherePoly& p);

// Exact conversion of a finite double (doubles are dyadic rationals).
Rational rational_from_double(double v);

}  // namespace bsk::poly

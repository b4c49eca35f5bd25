#include "bsk/poly.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bsk::poly {

SpherePoly SpherePoly::constant(const Rational& c) {
    SpherePoly p;
    p.add_term({0, 0, 0, 0}, c);
    return p;
}

SpherePoly SpherePoly::variable(int index) {
    if (index < 0 || index > 3) throw std::invalid_argument("variable index must be 0..3");
    Exponents e{0, 0, 0, 0};
    e[index] = 1;
    return monomial(e, 1);
}

SpherePoly SpherePoly::monomial(const Exponents& e, const Rational& c) {
    for (int v : e)
        if (v < 0) throw std::invalid_argument("negative exponent");
    SpherePoly p;
    p.add_term(e, c);
    return p;
}

SpherePoly SpherePoly::radius_squared() {
    SpherePoly p;
    for (int i = 0; i < 4; ++i) {
        Exponents e{0, 0, 0, 0};
        e[i] = 2;
        p.add_term(e, 1);
    }
    return p;
}

int SpherePoly::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
    return d;
}

void SpherePoly::add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

SpherePoly& SpherePoly::operator+=(const SpherePoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

SpherePoly& SpherePoly::operator-=(const SpherePoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

SpherePoly operator*(const SpherePoly& a, const SpherePoly& b) {
    SpherePoly r;
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            Exponents e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]};
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

SpherePoly operator*(const Rational& s, SpherePoly p) {
    if (s == 0) return SpherePoly{};
    for (auto& [e, c] : p.terms_) c *= s;
    return p;
}

SpherePoly operator-(SpherePoly p) {
    for (auto& [e, c] : p.terms_) c = -c;
    return p;
}

double SpherePoly::evaluate(const std::array<double, 4>& x) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c.convert_to<double>();
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < e[i]; ++k) t *= x[i];
        sum += t;
    }
    return sum;
}

std::string SpherePoly::str() const {
    if (terms_.empty()) return "0";
    static const char* names[4] = {"x1", "y1", "x2", "y2"};
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (int i = 0; i < 4; ++i) {
            if (e[i] == 0) continue;
            os << "*" << names[i];
            if (e[i] > 1) os << "^" << e[i];
        }
    }
    return os.str();
}

namespace {

// Coefficient functions of the standard frame: entry (field, i) is the
// coefficient of d/dv_i, given as (variable index, sign); from
// xi = -y1 dx1 + x1 dy1 - y2 dx2 + x2 dy2 and cyclic companions.
struct FrameCoeff {
    int var;
    int sign;
};

constexpr FrameCoeff kFrame[3][4] = {
    {{1, -1}, {0, +1}, {3, -1}, {2, +1}},   // xi
    {{2, -1}, {3, +1}, {0, +1}, {1, -1}},   // X1
    {{3, -1}, {2, -1}, {1, +1}, {0, +1}},   // X2
};

}  // namespace

SpherePoly frame_derive(const SpherePoly& p, FrameField which) {
    const FrameCoeff* row = kFrame[static_cast<int>(which)];
    SpherePoly r;
    for (const auto& [e, c] : p.terms()) {
        for (int i = 0; i < 4; ++i) {
            if (e[i] == 0) continue;
            Exponents d = e;
            d[i] -= 1;
            d[row[i].var] += 1;
            r.add_term(d, c * e[i] * row[i].sign);
        }
    }
    return r;
}

double SphereScalar::value() const {
    const double pi = std::numbers::pi;
    return pi2_multiple.convert_to<double>() * pi * pi;
}

namespace {

using BigInt = boost::multiprecision::cpp_int;

// n!! with (-1)!! = 1 and 0!! = 1.
BigInt double_factorial(int n) {
    BigInt r = 1;
    for (int k = n; k > 1; k -= 2) r *= k;
    return r;
}

}  // namespace

Rational monomial_integral_pi2(const Exponents& e) {
    int sum = 0;
    for (int v : e) {
        if (v % 2 != 0) return 0;
        sum += v;
    }
    BigInt num = 4;
    for (int v : e) num *= double_factorial(v - 1);
    BigInt den = double_factorial(sum + 2);
    return Rational(num, den);
}

SphereScalar sphere_integral(const SpherePoly& p) {
    Rational acc = 0;
    for (const auto& [e, c] : p.terms()) acc += c * monomial_integral_pi2(e);
    return SphereScalar{acc};
}

SphereScalar inner_product(const SpherePoly& p, const SpherePoly& q) {
    return sphere_integral(p * q);
}

bool is_zero_on_sphere(const SpherePoly& p) {
    return inner_product(p, p).is_zero();
}

Rational rational_from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite double");
    return Rational(v);
}

}  // namespace bsk::poly

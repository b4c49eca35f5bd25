#include "bsk/selftest.hpp"

#include <random>

#include "bsk/curlspec.hpp"
#include "bsk/poly.hpp"
#include "bsk/s3.hpp"

namespace bsk::selftest {

using curlspec::PolyVectorField;
using poly::FrameField;
using poly::frame_derive;
using poly::Rational;
using poly::SpherePoly;

namespace {

std::vector<poly::Exponents> monomials_up_to(int max_degree) {
    std::vector<poly::Exponents> out;
    for (int d = 0; d <= max_degree; ++d)
        for (int a = d; a >= 0; --a)
            for (int b = d - a; b >= 0; --b)
                for (int c = d - a - b; c >= 0; --c) out.push_back({a, b, c, d - a - b - c});
    return out;
}

SpherePoly random_poly(std::mt19937_64& rng, int max_degree) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    SpherePoly p;
    for (const auto& e : monomials_up_to(max_degree)) p.add_term(e, coeff(rng));
    return p;
}

PolyVectorField random_field(std::mt19937_64& rng, int max_degree) {
    return PolyVectorField{random_poly(rng, max_degree), random_poly(rng, max_degree),
                           random_poly(rng, max_degree)};
}

constexpr FrameField kFields[3] = {FrameField::Xi, FrameField::X1, FrameField::X2};

}  // namespace

std::vector<Result> run_all() {
    std::vector<Result> out;
    auto record = [&out](const std::string& name, bool pass, const std::string& detail = "") {
        out.push_back(Result{name, pass, detail});
    };

    // Structure constants [e_a, e_b] = -2 eps_abc e_c on all monomials of
    // degree <= 3. This pins every convention used downstream.
    {
        bool ok = true;
        for (const auto& e : monomials_up_to(3)) {
            const SpherePoly p = SpherePoly::monomial(e, 1);
            for (int a = 0; a < 3 && ok; ++a) {
                const int b = (a + 1) % 3, c = (a + 2) % 3;
                const SpherePoly lhs = frame_derive(frame_derive(p, kFields[b]), kFields[a]) -
                                       frame_derive(frame_derive(p, kFields[a]), kFields[b]);
                const SpherePoly rhs = Rational(-2) * frame_derive(p, kFields[c]);
                if (!(lhs - rhs).is_zero()) ok = false;
            }
            if (!ok) break;
        }
        record("structure_constants", ok);
    }

    // Leibniz rule for every frame derivation.
    {
        std::mt19937_64 rng(101);
        bool ok = true;
        for (int t = 0; t < 8 && ok; ++t) {
            const SpherePoly p = random_poly(rng, 3), q = random_poly(rng, 3);
            for (auto v : kFields) {
                const SpherePoly lhs = frame_derive(p * q, v);
                const SpherePoly rhs = frame_derive(p, v) * q + p * frame_derive(q, v);
                if (!(lhs - rhs).is_zero()) {
                    ok = false;
                    break;
                }
            }
        }
        record("leibniz_rule", ok);
    }

    // Integration by parts: Int V(p) q = -Int p V(q), exact.
    {
        std::mt19937_64 rng(202);
        bool ok = true;
        for (int t = 0; t < 8 && ok; ++t) {
            const SpherePoly p = random_poly(rng, 4), q = random_poly(rng, 4);
            for (auto v : kFields) {
                const auto lhs = poly::inner_product(frame_derive(p, v), q);
                const auto rhs = poly::inner_product(p, frame_derive(q, v));
                if (!(lhs.pi2_multiple + rhs.pi2_multiple == 0)) {
                    ok = false;
                    break;
                }
            }
        }
        record("integration_by_parts", ok);
    }

    // Odd-exponent monomials integrate to exactly zero.
    {
        bool ok = true;
        for (const auto& e : monomials_up_to(5)) {
            const bool odd = (e[0] % 2) || (e[1] % 2) || (e[2] % 2) || (e[3] % 2);
            if (odd && poly::monomial_integral_pi2(e) != 0) {
                ok = false;
                break;
            }
        }
        record("odd_monomial_integrals_vanish", ok);
    }

    // Curl is formally self-adjoint: <curl u, v> = <u, curl v>, exact.
    {
        std::mt19937_64 rng(303);
        bool ok = true;
        for (int t = 0; t < 6 && ok; ++t) {
            const PolyVectorField u = random_field(rng, 3), v = random_field(rng, 3);
            const auto lhs = curlspec::field_inner_product(curlspec::curl_frame(u), v);
            const auto rhs = curlspec::field_inner_product(u, curlspec::curl_frame(v));
            ok = lhs == rhs;
        }
        record("curl_self_adjoint", ok);
    }

    // div o curl = 0 symbolically.
    {
        std::mt19937_64 rng(404);
        bool ok = true;
        for (int t = 0; t < 6 && ok; ++t) {
            const PolyVectorField u = random_field(rng, 3);
            ok = poly::is_zero_on_sphere(curlspec::div_frame(curlspec::curl_frame(u)));
        }
        record("div_curl_zero", ok);
    }

    // curl o grad = 0 symbolically.
    {
        std::mt19937_64 rng(505);
        bool ok = true;
        for (int t = 0; t < 6 && ok; ++t) {
            const SpherePoly p = random_poly(rng, 3);
            const PolyVectorField g = curlspec::grad_field(p);
            const PolyVectorField c = curlspec::curl_frame(g);
            ok = poly::is_zero_on_sphere(c.f) && poly::is_zero_on_sphere(c.f1) &&
                 poly::is_zero_on_sphere(c.f2);
        }
        record("curl_grad_zero", ok);
    }

    // Frame Gram identity: (xi, X1, X2, p) orthonormal as polynomials on S^3.
    {
        const SpherePoly x1 = SpherePoly::variable(0), y1 = SpherePoly::variable(1);
        const SpherePoly x2 = SpherePoly::variable(2), y2 = SpherePoly::variable(3);
        const SpherePoly fields[4][4] = {
            {-y1, x1, -y2, x2},    // xi
            {-x2, y2, x1, -y1},    // X1
            {-y2, -x2, y1, x1},    // X2
            {x1, y1, x2, y2},      // position
        };
        bool ok = true;
        for (int a = 0; a < 4 && ok; ++a) {
            for (int b = a; b < 4 && ok; ++b) {
                SpherePoly dot;
                for (int i = 0; i < 4; ++i) dot += fields[a][i] * fields[b][i];
                if (a == b) dot -= SpherePoly::constant(1);
                ok = poly::is_zero_on_sphere(dot);
            }
        }
        record("frame_gram_identity", ok);
    }

    // div(grad x1) = -3 x1 (degree-1 harmonics have scalar eigenvalue 3).
    {
        const SpherePoly x1 = SpherePoly::variable(0);
        const SpherePoly lhs = curlspec::div_frame(curlspec::grad_field(x1)) +
                               Rational(3) * x1;
        record("laplacian_degree_one", poly::is_zero_on_sphere(lhs));
    }

    // Orientation: *d(eta) = +2 eta at sample points.
    {
        bool ok = true;
        std::string detail;
        try {
            s3::assert_orientation();
        } catch (const std::exception& ex) {
            ok = false;
            detail = ex.what();
        }
        record("hodge_orientation", ok, detail);
    }

    return out;
}

bool all_pass(const std::vector<Result>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace bsk::selftest

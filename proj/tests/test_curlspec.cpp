#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "bsk/curlspec.hpp"
#include "bsk/errors.hpp"

using namespace bsk::curlspec;
using bsk::poly::FrameField;
using bsk::poly::Rational;
using bsk::poly::SpherePoly;

namespace {

SpherePoly var(int i) { return SpherePoly::variable(i); }

PolyVectorField constant_field(int c0, int c1, int c2) {
    return PolyVectorField{SpherePoly::constant(c0), SpherePoly::constant(c1),
                           SpherePoly::constant(c2)};
}

bool field_zero_on_sphere(const PolyVectorField& v) {
    return bsk::poly::is_zero_on_sphere(v.f) && bsk::poly::is_zero_on_sphere(v.f1) &&
           bsk::poly::is_zero_on_sphere(v.f2);
}

PolyVectorField random_field(std::mt19937_64& rng, int max_degree) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    PolyVectorField v;
    for (int d = 0; d <= max_degree; ++d)
        for (int a = d; a >= 0; --a)
            for (int b = d - a; b >= 0; --b)
                for (int c = d - a - b; c >= 0; --c)
                    for (int slot = 0; slot < 3; ++slot)
                        v.component(slot).add_term({a, b, c, d - a - b - c}, coeff(rng));
    return v;
}

std::map<int, int> cluster_map(const SpectrumReport& rep) {
    std::map<int, int> out;
    for (const auto& c : rep.clusters) out[static_cast<int>(std::lround(c.mu))] = c.multiplicity;
    return out;
}

}  // namespace

TEST_CASE("curl of the constant frame fields") {
    const PolyVectorField xi = constant_field(1, 0, 0);
    const PolyVectorField curled = curl_frame(xi);
    CHECK((curled.f - SpherePoly::constant(2)).is_zero());
    CHECK(curled.f1.is_zero());
    CHECK(curled.f2.is_zero());
}

TEST_CASE("curl of a gradient vanishes symbolically") {
    const PolyVectorField g = grad_field(var(0));
    // Components of grad x1 read (-y1, -x2, -y2).
    CHECK((g.f + var(1)).is_zero());
    CHECK((g.f1 + var(2)).is_zero());
    CHECK((g.f2 + var(3)).is_zero());
    CHECK(field_zero_on_sphere(curl_frame(g)));

    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int t = 0; t < 5; ++t) {
        SpherePoly p;
        for (int i = 0; i < 4; ++i) p += Rational(coeff(rng)) * var(i) * var((i + 1) % 4);
        CHECK(field_zero_on_sphere(curl_frame(grad_field(p))));
    }
}

TEST_CASE("divergence identities") {
    // div(grad x1) = -3 x1: degree-1 harmonics have scalar eigenvalue 3.
    const SpherePoly lhs = div_frame(grad_field(var(0))) + Rational(3) * var(0);
    CHECK(bsk::poly::is_zero_on_sphere(lhs));

    std::mt19937_64 rng(32);
    for (int t = 0; t < 5; ++t) {
        const PolyVectorField v = random_field(rng, 3);
        CHECK(bsk::poly::is_zero_on_sphere(div_frame(curl_frame(v))));
    }
}

TEST_CASE("curl does not raise the polynomial degree") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 8; ++t) {
        const PolyVectorField v = random_field(rng, 3);
        CHECK(curl_frame(v).degree() <= v.degree());
    }
}

TEST_CASE("assembly at K=0: G = 2 pi^2 I, C = 2G") {
    const OperatorPencil p = assemble(0);
    REQUIRE(p.basis.size() == 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            CHECK(p.gram_matrix[a][b] == (a == b ? Rational(2) : Rational(0)));
            CHECK(p.curl_matrix[a][b] == Rational(2) * p.gram_matrix[a][b]);
        }
    const SpectrumReport rep = spectrum(p);
    REQUIRE(rep.clusters.size() == 1);
    CHECK(rep.clusters[0].mu == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.clusters[0].multiplicity == 3);
}

TEST_CASE("assembly rejects degrees beyond the size cap") {
    CHECK_THROWS_AS(assemble(7), bsk::ResourceError);
    CHECK_THROWS_AS(assemble(-1), bsk::ConfigError);
}

TEST_CASE("spectrum at K=1: {0:4, +2:3, +3:8}, rank 15") {
    const SpectrumReport rep = spectrum(1);
    CHECK(rep.rank_g == 15);
    const auto clusters = cluster_map(rep);
    REQUIRE(clusters.size() == 3);
    CHECK(clusters.at(0) == 4);
    CHECK(clusters.at(2) == 3);
    CHECK(clusters.at(3) == 8);
    CHECK(rep.gradient_count == 4);
}

TEST_CASE("spectrum at K=2: rank 42, negative family enters") {
    const SpectrumReport rep = spectrum(2);
    CHECK(rep.rank_g == 42);
    const auto clusters = cluster_map(rep);
    CHECK(clusters.at(2) == 3);
    CHECK(clusters.at(3) == 8);
    CHECK(clusters.at(4) == 15);
    CHECK(clusters.at(-2) == 3);
    CHECK(rep.gradient_count == 13);  // gradients of degree-1 and degree-2 harmonics
    int total = 0;
    for (const auto& [mu, mult] : clusters) total += mult;
    CHECK(total == rep.rank_g);
}

TEST_CASE("eigenvalue integrality and realized integers for K <= 4") {
    for (int k = 0; k <= 4; ++k) {
        const SpectrumReport rep = spectrum(k);
        int total = 0;
        for (const auto& c : rep.clusters) {
            const double nearest = std::lround(c.mu);
            CHECK(std::abs(c.mu - nearest) < 1e-9);
            total += c.multiplicity;
            const int mu = static_cast<int>(nearest);
            if (mu > 0) {
                CHECK(mu >= 2);
                CHECK(mu <= k + 2);
                CHECK(c.multiplicity == (mu - 1) * (mu + 1));  // (k'+1)(k'+3), k' = mu-2
            } else if (mu < 0) {
                CHECK(mu <= -2);
                CHECK(mu >= -k);  // opposite-sign family at component degree |mu|
                CHECK(c.multiplicity == (-mu - 1) * (-mu + 1));
            }
        }
        CHECK(total == rep.rank_g);
        int expected_rank = 0;
        for (int d = 0; d <= k; ++d) expected_rank += 3 * (d + 1) * (d + 1);
        CHECK(rep.rank_g == expected_rank);
    }
}

TEST_CASE("eigenspace mu=2 spans the constant frame fields") {
    const auto basis = eigenspace(1, 2);
    REQUIRE(basis.size() == 3);
    for (const auto& v : basis) {
        CHECK(v.degree() == 0);
        CHECK(field_zero_on_sphere(curl_frame(v) - Rational(2) * v));
        const NormConstancy nc = norm_constancy(v);
        CHECK(nc.exactly_constant);
        CHECK(nc.max_deviation == 0.0);
    }
    // G-orthonormality (floating normalization of exact vectors).
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double ip = field_inner_product(basis[i], basis[j]).value();
            CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
}

TEST_CASE("eigenspace mu=3: eight exact eigenfields with degree-1 components") {
    const auto basis = eigenspace(1, 3);
    REQUIRE(basis.size() == 8);
    for (const auto& v : basis) {
        CHECK(v.degree() == 1);
        CHECK(field_zero_on_sphere(curl_frame(v) - Rational(3) * v));
        CHECK(bsk::poly::is_zero_on_sphere(div_frame(v)));
        // Components restrict to scalar eigenfunctions of eigenvalue 3.
        for (int slot = 0; slot < 3; ++slot) {
            const SpherePoly res =
                frame_laplacian(v.component(slot)) + Rational(3) * v.component(slot);
            CHECK(bsk::poly::is_zero_on_sphere(res));
        }
    }
}

TEST_CASE("eigenspace mu=0 consists of exact curl kernels") {
    const auto basis = eigenspace(1, 0);
    REQUIRE(basis.size() == 4);
    for (const auto& v : basis) CHECK(field_zero_on_sphere(curl_frame(v)));
}

TEST_CASE("eigenspace for an absent eigenvalue raises NotFound") {
    CHECK_THROWS_AS(eigenspace(0, 5), bsk::NotFoundError);
}

TEST_CASE("laplace and divergence invariants across K=2 eigenspaces") {
    for (int mu : {2, 3, 4, -2}) {
        const auto basis = eigenspace(2, mu);
        const int d = mu > 0 ? mu - 2 : -mu;
        const Rational lam = d * (d + 2);
        for (const auto& v : basis) {
            CHECK(field_zero_on_sphere(curl_frame(v) - Rational(mu) * v));
            CHECK(bsk::poly::is_zero_on_sphere(div_frame(v)));
            for (int slot = 0; slot < 3; ++slot) {
                const SpherePoly res =
                    frame_laplacian(v.component(slot)) + lam * v.component(slot);
                CHECK(bsk::poly::is_zero_on_sphere(res));
            }
        }
    }
}

TEST_CASE("norm constancy: frozen examples") {
    const PolyVectorField v = constant_field(3, 0, 4);  // 3 xi + 4 X2
    const NormConstancy nc = norm_constancy(v);
    CHECK(nc.mean == 25.0);
    CHECK(nc.max_deviation == 0.0);
    CHECK(nc.exactly_constant);

    const NormConstancy unit = norm_constancy(constant_field(1, 0, 0));
    CHECK(unit.mean == 1.0);
    CHECK(unit.max_deviation == 0.0);

    // An explicit mu=3 eigenfield: (f, f1, f2) = (x1, -y2, 0).
    PolyVectorField w;
    w.f = var(0);
    w.f1 = Rational(-1) * var(3);
    CHECK(field_zero_on_sphere(curl_frame(w) - Rational(3) * w));
    const NormConstancy nw = norm_constancy(w);
    CHECK(nw.mean == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nw.max_deviation > 0.1);
}

TEST_CASE("cluster ambiguity raises a diagnostic error with raw eigenvalues") {
    // With a huge tolerance the unit gaps between integer clusters fall below
    // the 10x guard band and the report must refuse to cluster.
    try {
        spectrum(1, 0.2);
        FAIL("expected DiagnosticError");
    } catch (const bsk::DiagnosticError& ex) {
        CHECK(!ex.payload.empty());
        CHECK(ex.payload.front() == '[');
    }
}

TEST_CASE("rational row reduction: rank and nullspace") {
    using Row = std::vector<Rational>;
    std::vector<Row> m = {Row{1, 2, 3}, Row{2, 4, 6}, Row{1, 0, 1}};
    const RowReduction rr = rational_row_reduce(m);
    CHECK(rr.rank == 2);
    REQUIRE(rr.nullspace.size() == 1);
    const auto& v = rr.nullspace[0];
    for (const auto& row : m) {
        Rational dot = 0;
        for (int i = 0; i < 3; ++i) dot += row[i] * v[i];
        CHECK(dot == 0);
    }
}

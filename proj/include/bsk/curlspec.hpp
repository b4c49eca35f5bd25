#pragma once

#include <cstdint>
#include <vector>

#include "bsk/poly.hpp"

// Exact assembly of the curl operator on polynomial vector fields on S^3 and
// its spectrum: eigenvalues, multiplicities, eigenspaces.

namespace bsk::curlspec {

using poly::Exponents;
using poly::Rational;
using poly::SpherePoly;
using poly::SphereScalar;

// X = f xi + f1 X1 + f2 X2 with polynomial components.
struct PolyVectorField {
    SpherePoly f, f1, f2;

    const SpherePoly& component(int i) const { return i == 0 ? f : (i == 1 ? f1 : f2); }
    SpherePoly& component(int i) { return i == 0 ? f : (i == 1 ? f1 : f2); }
    int degree() const;
};

// curl X = (2f + X1 f2 - X2 f1) xi + (2f1 + X2 f - xi f2) X1 + (2f2 + xi f1 - X1 f) X2.
PolyVectorField curl_frame(const PolyVectorField& x);

// div X = xi(f) + X1(f1) + X2(f2).
SpherePoly div_frame(const PolyVectorField& x);

// Tangential gradient: components (xi(p), X1(p), X2(p)).
PolyVectorField grad_field(const SpherePoly& p);

// Frame Laplacian xi^2 + X1^2 + X2^2.
SpherePoly frame_laplacian(const SpherePoly& p);

SpherePoly norm_squared_poly(const PolyVectorField& x);

// L^2 pairing: sum of componentwise sphere inner products.
SphereScalar field_inner_product(const PolyVectorField& u, const PolyVectorField& v);

PolyVectorField operator+(const PolyVectorField& a, const PolyVectorField& b);
PolyVectorField operator-(const PolyVectorField& a, const PolyVectorField& b);
PolyVectorField operator*(const Rational& s, const PolyVectorField& a);

// Exact pencil over all fields with a single monomial of degree <= K in one
// frame slot: C_ab = <curl v_a, v_b>, G_ab = <v_a, v_b> (both as multiples of
// pi^2, the common factor dropped).
struct OperatorPencil {
    int max_degree = 0;
    std::vector<PolyVectorField> basis;
    std::vector<std::vector<Rational>> curl_matrix;   // C, symmetric
    std::vector<std::vector<Rational>> gram_matrix;   // G, PSD
};

OperatorPencil assemble(int max_degree);

struct Cluster {
    double mu = 0.0;
    int multiplicity = 0;
};

struct SpectrumReport {
    int max_degree = 0;
    double tol = 1e-9;
    std::vector<Cluster> clusters;  // ascending in mu; includes the zero cluster
    int rank_g = 0;
    int gradient_count = 0;  // dimension of the zero cluster
    std::vector<double> raw_eigenvalues;
};

SpectrumReport spectrum(const OperatorPencil& pencil, double tol = 1e-9);
SpectrumReport spectrum(int max_degree, double tol = 1e-9);

// G-orthonormal basis of the mu-eigenspace; the underlying coefficient
// vectors are exact rational nullspace solutions of (C - mu G) on the
// deflated pivot basis, so linear identities (div = 0, curl = mu X) hold
// symbolically. Throws NotFoundError if mu is not in the spectrum at this K.
std::vector<PolyVectorField> eigenspace(int max_degree, int mu);

struct NormConstancy {
    double mean = 0.0;
    double max_deviation = 0.0;
    bool exactly_constant = false;
};

// Mean of |v|^2 over S^3 (exact) and the maximum sampled deviation from it.
NormConstancy norm_constancy(const PolyVectorField& v, int sample_count = 10000,
                             std::uint64_t seed = 0x905bde5a11u);

// Exact rational row reduction; exposed for reuse and testing.
struct RowReduction {
    int rank = 0;
    std::vector<int> pivot_cols;
    std::vector<std::vector<Rational>> nullspace;  // basis vectors, full length
};

RowReduction rational_row_reduce(std::vector<std::vector<Rational>> m);

}  // namespace bsk::curlspec

#include "bsk/curlspec.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bsk/errors.hpp"

namespace bsk::curlspec {

using poly::FrameField;
using poly::frame_derive;

int PolyVectorField::degree() const {
    return std::max(f.degree(), std::max(f1.degree(), f2.degree()));
}

PolyVectorField curl_frame(const PolyVectorField& x) {
    PolyVectorField r;
    const Rational two = 2;
    r.f = two * x.f + frame_derive(x.f2, FrameField::X1) - frame_derive(x.f1, FrameField::X2);
    r.f1 = two * x.f1 + frame_derive(x.f, FrameField::X2) - frame_derive(x.f2, FrameField::Xi);
    r.f2 = two * x.f2 + frame_derive(x.f1, FrameField::Xi) - frame_derive(x.f, FrameField::X1);
    return r;
}

SpherePoly div_frame(const PolyVectorField& x) {
    return frame_derive(x.f, FrameField::Xi) + frame_derive(x.f1, FrameField::X1) +
           frame_derive(x.f2, FrameField::X2);
}

PolyVectorField grad_field(const SpherePoly& p) {
    return PolyVectorField{frame_derive(p, FrameField::Xi), frame_derive(p, FrameField::X1),
                           frame_derive(p, FrameField::X2)};
}

SpherePoly frame_laplacian(const SpherePoly& p) {
    SpherePoly r;
    for (auto v : {FrameField::Xi, FrameField::X1, FrameField::X2})
        r += frame_derive(frame_derive(p, v), v);
    return r;
}

SpherePoly norm_squared_poly(const PolyVectorField& x) {
    return x.f * x.f + x.f1 * x.f1 + x.f2 * x.f2;
}

SphereScalar field_inner_product(const PolyVectorField& u, const PolyVectorField& v) {
    SphereScalar s = poly::inner_product(u.f, v.f);
    s += poly::inner_product(u.f1, v.f1);
    s += poly::inner_product(u.f2, v.f2);
    return s;
}

PolyVectorField operator+(const PolyVectorField& a, const PolyVectorField& b) {
    return PolyVectorField{a.f + b.f, a.f1 + b.f1, a.f2 + b.f2};
}

PolyVectorField operator-(const PolyVectorField& a, const PolyVectorField& b) {
    return PolyVectorField{a.f - b.f, a.f1 - b.f1, a.f2 - b.f2};
}

PolyVectorField operator*(const Rational& s, const PolyVectorField& a) {
    return PolyVectorField{s * a.f, s * a.f1, s * a.f2};
}

namespace {

std::vector<Exponents> monomials_up_to(int max_degree) {
    std::vector<Exponents> out;
    for (int d = 0; d <= max_degree; ++d) {
        for (int a = d; a >= 0; --a)
            for (int b = d - a; b >= 0; --b)
                for (int c = d - a - b; c >= 0; --c) out.push_back({a, b, c, d - a - b - c});
    }
    return out;
}

constexpr int kFieldCap = 630;  // 3 * C(6+4,4); keeps the dense solve in seconds

}  // namespace

OperatorPencil assemble(int max_degree) {
    if (max_degree < 0) throw ConfigError("assemble: max_degree must be >= 0");
    const auto monos = monomials_up_to(max_degree);
    const std::size_t n = 3 * monos.size();
    if (n > kFieldCap)
        throw ResourceError("assemble: basis of " + std::to_string(n) + " fields exceeds cap " +
                            std::to_string(kFieldCap));

    OperatorPencil p;
    p.max_degree = max_degree;
    p.basis.reserve(n);
    for (const auto& e : monos) {
        for (int slot = 0; slot < 3; ++slot) {
            PolyVectorField v;
            v.component(slot) = SpherePoly::monomial(e, 1);
            p.basis.push_back(std::move(v));
        }
    }

    std::vector<PolyVectorField> curls;
    curls.reserve(n);
    for (const auto& v : p.basis) curls.push_back(curl_frame(v));

    p.curl_matrix.assign(n, std::vector<Rational>(n, 0));
    p.gram_matrix.assign(n, std::vector<Rational>(n, 0));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            const Rational g = field_inner_product(p.basis[a], p.basis[b]).pi2_multiple;
            const Rational c = field_inner_product(curls[a], p.basis[b]).pi2_multiple;
            p.gram_matrix[a][b] = g;
            p.gram_matrix[b][a] = g;
            p.curl_matrix[a][b] = c;
            p.curl_matrix[b][a] = c;
        }
    }
    return p;
}

RowReduction rational_row_reduce(std::vector<std::vector<Rational>> m) {
    RowReduction out;
    if (m.empty()) return out;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    std::vector<int> pivot_row_of_col(cols, -1);
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[r], m[pivot]);
        const Rational inv = m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            const Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivot_row_of_col[c] = static_cast<int>(r);
        out.pivot_cols.push_back(static_cast<int>(c));
        ++r;
    }
    out.rank = static_cast<int>(r);

    std::vector<bool> is_pivot(cols, false);
    for (int c : out.pivot_cols) is_pivot[c] = true;
    for (std::size_t free_c = 0; free_c < cols; ++free_c) {
        if (is_pivot[free_c]) continue;
        std::vector<Rational> v(cols, 0);
        v[free_c] = 1;
        for (int pc : out.pivot_cols) {
            const int pr = pivot_row_of_col[pc];
            v[pc] = -m[pr][free_c];
        }
        out.nullspace.push_back(std::move(v));
    }
    return out;
}

namespace {

struct Deflated {
    std::vector<int> pivot;      // indices of a G-positive-definite subbasis
    Eigen::MatrixXd c, g;        // restricted matrices as doubles
};

Deflated deflate(const OperatorPencil& p) {
    const RowReduction rr = rational_row_reduce(p.gram_matrix);
    Deflated d;
    d.pivot = rr.pivot_cols;
    const int r = rr.rank;
    d.c.resize(r, r);
    d.g.resize(r, r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            d.c(i, j) = p.curl_matrix[d.pivot[i]][d.pivot[j]].convert_to<double>();
            d.g(i, j) = p.gram_matrix[d.pivot[i]][d.pivot[j]].convert_to<double>();
        }
    }
    return d;
}

}  // namespace

SpectrumReport spectrum(const OperatorPencil& pencil, double tol) {
    const Deflated d = deflate(pencil);
    SpectrumReport rep;
    rep.max_degree = pencil.max_degree;
    rep.tol = tol;
    rep.rank_g = static_cast<int>(d.pivot.size());
    if (rep.rank_g == 0) return rep;

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(d.c, d.g, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EvalError("spectrum: generalized eigensolve failed");
    const Eigen::VectorXd ev = es.eigenvalues();
    rep.raw_eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(rep.raw_eigenvalues.begin(), rep.raw_eigenvalues.end());

    // Clustering tolerance 1e-6 for multiplicity counting; the gaps here are >= 1.
    const double cluster_tol = 1e-6;
    std::vector<Cluster> clusters;
    std::size_t i = 0;
    while (i < rep.raw_eigenvalues.size()) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < rep.raw_eigenvalues.size() &&
               rep.raw_eigenvalues[j] - rep.raw_eigenvalues[i] <= cluster_tol) {
            sum += rep.raw_eigenvalues[j];
            ++j;
        }
        clusters.push_back(Cluster{sum / (j - i), static_cast<int>(j - i)});
        i = j;
    }
    for (std::size_t k = 0; k + 1 < clusters.size(); ++k) {
        if (clusters[k + 1].mu - clusters[k].mu < 10.0 * tol) {
            std::ostringstream os;
            os << "[";
            for (std::size_t t = 0; t < rep.raw_eigenvalues.size(); ++t)
                os << (t ? "," : "") << rep.raw_eigenvalues[t];
            os << "]";
            throw DiagnosticError("spectrum: cluster ambiguity near mu=" +
                                      std::to_string(clusters[k].mu),
                                  os.str());
        }
    }
    rep.clusters = std::move(clusters);
    for (const auto& c : rep.clusters)
        if (std::abs(c.mu) < 0.5) rep.gradient_count = c.multiplicity;
    return rep;
}

SpectrumReport spectrum(int max_degree, double tol) {
    return spectrum(assemble(max_degree), tol);
}

std::vector<PolyVectorField> eigenspace(int max_degree, int mu) {
    const OperatorPencil pencil = assemble(max_degree);
    const RowReduction rr = rational_row_reduce(pencil.gram_matrix);
    const auto& pivot = rr.pivot_cols;
    const std::size_t r = pivot.size();

    std::vector<std::vector<Rational>> a(r, std::vector<Rational>(r, 0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            a[i][j] = pencil.curl_matrix[pivot[i]][pivot[j]] -
                      Rational(mu) * pencil.gram_matrix[pivot[i]][pivot[j]];

    const RowReduction null_a = rational_row_reduce(std::move(a));
    if (null_a.nullspace.empty())
        throw NotFoundError("eigenspace: mu=" + std::to_string(mu) + " not present at K=" +
                            std::to_string(max_degree));

    std::vector<PolyVectorField> fields;
    fields.reserve(null_a.nullspace.size());
    for (const auto& vec : null_a.nullspace) {
        PolyVectorField v;
        for (std::size_t j = 0; j < r; ++j) {
            if (vec[j] == 0) continue;
            v = v + vec[j] * pencil.basis[pivot[j]];
        }
        fields.push_back(std::move(v));
    }

    // Exact Gram-Schmidt (no square roots), then a floating normalization
    // converted back to an exact dyadic rational.
    for (std::size_t i = 0; i < fields.size(); ++i) {
        for (std::size_t k = 0; k < i; ++k) {
            const Rational num = field_inner_product(fields[i], fields[k]).pi2_multiple;
            const Rational den = field_inner_product(fields[k], fields[k]).pi2_multiple;
            if (den == 0) throw EvalError("eigenspace: degenerate Gram-Schmidt pivot");
            fields[i] = fields[i] - (num / den) * fields[k];
        }
    }
    for (auto& v : fields) {
        const double nrm2 = field_inner_product(v, v).value();
        if (!(nrm2 > 0)) throw EvalError("eigenspace: zero vector after orthogonalization");
        const Rational scale = poly::rational_from_double(1.0 / std::sqrt(nrm2));
        v = scale * v;
    }
    return fields;
}

NormConstancy norm_constancy(const PolyVectorField& v, int sample_count, std::uint64_t seed) {
    NormConstancy out;
    const SpherePoly n2 = norm_squared_poly(v);
    const SphereScalar integral = sphere_integral(n2);
    const Rational mean_rational = integral.pi2_multiple / 2;  // divide by Vol = 2 pi^2
    out.mean = mean_rational.convert_to<double>();

    if (poly::is_zero_on_sphere(n2 - SpherePoly::constant(mean_rational))) {
        out.exactly_constant = true;
        out.max_deviation = 0.0;
        return out;
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double dev = 0.0;
    for (int k = 0; k < sample_count; ++k) {
        double x[4] = {gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
        double nn = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
        if (nn < 1e-8) continue;
        const std::array<double, 4> p{x[0] / nn, x[1] / nn, x[2] / nn, x[3] / nn};
        dev = std::max(dev, std::abs(n2.evaluate(p) - out.mean));
    }
    out.max_deviation = dev;
    return out;
}

}  // namespace bsk::curlspec

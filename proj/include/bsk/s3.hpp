#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

// Round geometry of the unit 3-sphere: the standard frame, the contact form
// eta and d(eta), Hodge star in frame components, product quadrature grids.

namespace bsk::s3 {

using Vec4 = Eigen::Vector4d;
using Vec3 = Eigen::Vector3d;

// A point of S^3, renormalized on construction. Coordinate order (x1,y1,x2,y2).
struct Point4 {
    Vec4 x;

    Point4() : x(1, 0, 0, 0) {}
    explicit Point4(const Vec4& v);
    Point4(double x1, double y1, double x2, double y2) : Point4(Vec4(x1, y1, x2, y2)) {}

    double operator[](int i) const { return x[i]; }
};

// The frame (xi, X1, X2) evaluated at a point; pairwise orthonormal and
// orthogonal to the base point.
struct FrameBasis {
    Vec4 xi, x1, x2;

    const Vec4& operator[](int i) const { return i == 0 ? xi : (i == 1 ? x1 : x2); }
};

FrameBasis frame_at(const Point4& p);

// eta_q(v) = <xi(q), v>.
double contact_eval(const Point4& q, const Vec4& v);

// d(eta) = 2(dx1^dy1 + dx2^dy2), evaluated on ambient tangent vectors.
double deta_eval(const Point4& q, const Vec4& u, const Vec4& v);

// Component triples in the coframe dual to (xi, X1, X2). Two-form components
// follow the cyclic convention w0 = w(X1,X2), w1 = w(X2,xi), w2 = w(xi,X1),
// so the Hodge star acts componentwise.
struct OneForm3 {
    Vec3 c{0, 0, 0};
    double norm2() const { return c.squaredNorm(); }
};

struct TwoForm3 {
    Vec3 c{0, 0, 0};
    double norm2() const { return c.squaredNorm(); }
};

// Hodge star with optional conformal factor: under the metric c^2 g the star
// picks up a factor c on 1-forms and 1/c on 2-forms.
TwoForm3 hodge_star(const OneForm3& b, double conformal_factor = 1.0);
OneForm3 hodge_star(const TwoForm3& w, double conformal_factor = 1.0);

// Verifies *d(eta) = +2 eta at 100 fixed sample points; throws if the
// orientation convention is violated. Runs once per process.
void assert_orientation();

struct GridSpec {
    int n_s = 32;
    int n_theta = 24;
    int n_psi = 24;
};

// Product quadrature grid in hyperspherical coordinates
// p = (cos s, sin s sin t cos u, sin s sin t sin u, sin s cos t):
// Gauss-Legendre in s and t against densities sin^2 s and sin t, uniform
// trapezoid in u. Nodes never touch the coordinate singularities.
class GridS3 {
  public:
    GridS3(int n_s, int n_theta, int n_psi);

    // Composite rule: per_segment Gauss points inside each [s_breaks[i],
    // s_breaks[i+1]] panel. Used for integrands that are only piecewise
    // smooth in s (tabulated profiles).
    GridS3(const std::vector<double>& s_breaks, int per_segment, int n_theta, int n_psi);

    const GridSpec& spec() const { return spec_; }
    std::size_t size() const { return nodes_.size(); }
    const Point4& node(std::size_t i) const { return nodes_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    double s_of(std::size_t i) const { return s_values_[i]; }
    double weight_sum() const;

    const std::vector<double>& s_knots() const { return s_nodes_1d_; }

  private:
    void assemble(const std::vector<double>& s_nodes, const std::vector<double>& s_weights,
                  int n_theta, int n_psi);

    GridSpec spec_;
    std::vector<Point4> nodes_;
    std::vector<double> weights_;
    std::vector<double> s_values_;
    std::vector<double> s_nodes_1d_;
};

GridS3 build_grid(int n_s, int n_theta, int n_psi);

// Deterministic quadrature: integrand evaluated data-parallel into slots,
// then reduced pairwise.
double quadrature(const GridS3& grid, const std::function<double(std::size_t, const Point4&)>& f);
double quadrature(const GridS3& grid, const std::function<double(const Point4&)>& f);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace bsk::s3

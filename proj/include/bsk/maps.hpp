#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "bsk/s3.hpp"

// Maps of the 3-sphere to itself: identity, quaternion isometries, the
// suspension family, tabulated-profile suspensions and seeded synthetic test
// maps, together with differentials, pullbacks of eta/d(eta) and strain data.

namespace bsk::maps {

using s3::FrameBasis;
using s3::OneForm3;
using s3::Point4;
using s3::TwoForm3;
using s3::Vec3;
using s3::Vec4;

// Quaternion product in the coordinate order (1, i, j, k) = (x1, y1, x2, y2).
Vec4 quat_mul(const Vec4& a, const Vec4& b);

struct MapS3 {
    std::string label;
    std::function<Point4(const Point4&)> eval;
    // Optional analytic ambient differential; valid on tangent vectors.
    std::function<Eigen::Matrix4d(const Point4&)> jacobian;

    bool has_analytic_differential() const { return static_cast<bool>(jacobian); }
    Point4 operator()(const Point4& p) const { return eval(p); }
};

// Monotone (Fritsch-Butland) cubic interpolant of a boundary-pinned profile
// alpha: [0,pi] -> [0, B*pi].
class ProfileTable {
  public:
    ProfileTable(std::vector<double> s, std::vector<double> alpha);

    static ProfileTable from_csv(std::istream& in);

    double alpha(double s) const;
    double alpha_prime(double s) const;
    int winding() const { return winding_; }  // alpha(pi) / pi, rounded
    const std::vector<double>& knots() const { return s_; }
    const std::vector<double>& values() const { return a_; }

  private:
    std::vector<double> s_, a_, m_;  // knots, values, slopes
    int winding_ = 1;
    std::size_t segment(double s) const;
};

// alpha(s) = 2 atan(a tan(s/2)), continuous with alpha(pi) = pi.
struct SuspensionProfile {
    double a = 1.0;
    double alpha(double s) const;
    double alpha_prime(double s) const;
};

MapS3 identity_map();
MapS3 conjugation_map();                       // (x1,y1,x2,y2) -> (x1,-y1,-x2,-y2)
MapS3 constant_map(const Point4& q0);
MapS3 suspension_map(double a);                // a > 0
MapS3 profile_suspension_map(ProfileTable table);
MapS3 right_translate(const Vec4& unit_quat, MapS3 base);
// Seeded smooth degree-preserving perturbation of the identity, used as a
// generic non-Beltrami control.
MapS3 fourier_test_map(std::uint64_t seed);

// Ambient images (d phi(xi), d phi(X1), d phi(X2)) at p; analytic if the map
// carries a differential, otherwise second-order geodesic central differences
// with step h, projected to the tangent space at phi(p).
std::array<Vec4, 3> differential_columns(const MapS3& map, const Point4& p, double h = 1e-4);
std::array<Vec4, 3> differential_columns_fd(const MapS3& map, const Point4& p, double h);

// 3x3 matrix of d phi in the orthonormal frames at p and phi(p).
struct Jacobian3 {
    Eigen::Matrix3d m;
};

Jacobian3 differential(const MapS3& map, const Point4& p, double h = 1e-4);

// Pointwise frame components of phi^* eta and phi^* d(eta); xi_hat is the
// metric dual of beta in the domain frame.
struct FormSample {
    OneForm3 beta;
    TwoForm3 omega;
    Vec3 xi_hat;
};

FormSample pullback_sample(const MapS3& map, const Point4& p, double h = 1e-4);
OneForm3 pullback_eta(const MapS3& map, const Point4& p, double h = 1e-4);
TwoForm3 pullback_deta(const MapS3& map, const Point4& p, double h = 1e-4);

struct Strain {
    Vec3 eigenvalues;          // ascending lambda_i^2
    Eigen::Matrix3d eigenvectors;  // columns, orthonormal in the domain frame
};

Strain strain(const MapS3& map, const Point4& p, double h = 1e-4);

}  // namespace bsk::maps

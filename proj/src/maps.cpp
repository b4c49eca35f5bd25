#include "bsk/maps.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bsk::maps {

namespace {
constexpr double kPi = std::numbers::pi;
}

Vec4 quat_mul(const Vec4& a, const Vec4& b) {
    return Vec4(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]);
}

// ---------------------------------------------------------------------------
// Profiles

ProfileTable::ProfileTable(std::vector<double> s, std::vector<double> alpha)
    : s_(std::move(s)), a_(std::move(alpha)) {
    if (s_.size() != a_.size() || s_.size() < 2)
        throw std::invalid_argument("ProfileTable: need matching s/alpha columns with >= 2 rows");
    for (std::size_t i = 0; i + 1 < s_.size(); ++i)
        if (!(s_[i] < s_[i + 1])) throw std::invalid_argument("ProfileTable: s must be strictly increasing");
    if (std::abs(s_.front()) > 1e-9 || std::abs(s_.back() - kPi) > 1e-9)
        throw std::invalid_argument("ProfileTable: s must span [0, pi]");
    if (std::abs(a_.front()) > 1e-9)
        throw std::invalid_argument("ProfileTable: alpha(0) must be 0");
    const double b = a_.back() / kPi;
    winding_ = static_cast<int>(std::lround(b));
    if (std::abs(a_.back() - winding_ * kPi) > 1e-6)
        throw std::invalid_argument("ProfileTable: alpha(pi) must be an integer multiple of pi");
    // Pin the boundary exactly.
    s_.front() = 0.0;
    s_.back() = kPi;
    a_.front() = 0.0;
    a_.back() = winding_ * kPi;

    // Fritsch-Butland monotone slopes.
    const std::size_t n = s_.size();
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = s_[i + 1] - s_[i];
        d[i] = (a_[i + 1] - a_[i]) / h[i];
    }
    m_.assign(n, 0.0);
    m_.front() = d.front();
    m_.back() = d.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            m_[i] = 0.0;
        } else {
            m_[i] = 3.0 * (h[i - 1] + h[i]) /
                    ((2.0 * h[i] + h[i - 1]) / d[i - 1] + (h[i] + 2.0 * h[i - 1]) / d[i]);
        }
    }
}

ProfileTable ProfileTable::from_csv(std::istream& in) {
    std::vector<double> s, a;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double sv, av;
        if (row >> sv >> av) {
            s.push_back(sv);
            a.push_back(av);
        } else if (s.empty()) {
            continue;  // header row
        } else {
            throw std::invalid_argument("profile CSV: malformed row: " + line);
        }
    }
    return ProfileTable(std::move(s), std::move(a));
}

std::size_t ProfileTable::segment(double s) const {
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t i = static_cast<std::size_t>(it - s_.begin());
    if (i == 0) return 0;
    if (i >= s_.size()) return s_.size() - 2;
    return i - 1;
}

double ProfileTable::alpha(double s) const {
    s = std::clamp(s, 0.0, kPi);
    const std::size_t i = segment(s);
    const double h = s_[i + 1] - s_[i];
    const double t = (s - s_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return a_[i] * (2 * t3 - 3 * t2 + 1) + h * m_[i] * (t3 - 2 * t2 + t) +
           a_[i + 1] * (-2 * t3 + 3 * t2) + h * m_[i + 1] * (t3 - t2);
}

double ProfileTable::alpha_prime(double s) const {
    s = std::clamp(s, 0.0, kPi);
    const std::size_t i = segment(s);
    const double h = s_[i + 1] - s_[i];
    const double t = (s - s_[i]) / h;
    const double t2 = t * t;
    return (a_[i] * (6 * t2 - 6 * t) + h * m_[i] * (3 * t2 - 4 * t + 1) +
            a_[i + 1] * (-6 * t2 + 6 * t) + h * m_[i + 1] * (3 * t2 - 2 * t)) /
           h;
}

double SuspensionProfile::alpha(double s) const {
    // Branch-correct form; alpha(pi) = pi by atan2(a, 0) = pi/2.
    return 2.0 * std::atan2(a * std::sin(0.5 * s), std::cos(0.5 * s));
}

double SuspensionProfile::alpha_prime(double s) const {
    const double c = std::cos(0.5 * s), t = std::sin(0.5 * s);
    return a / (c * c + a * a * t * t);
}

// ---------------------------------------------------------------------------
// Map families

namespace {

// Common suspension machinery over any profile with alpha(0)=0, alpha(pi)=B*pi.
template <typename Profile>
Point4 suspension_eval(const Profile& prof, const Point4& p) {
    const Vec3 v(p.x[1], p.x[2], p.x[3]);
    const double sv = v.norm();
    const double s = std::atan2(sv, p.x[0]);
    const double al = prof.alpha(s);
    if (sv < 1e-14) {
        return Point4(Vec4(std::cos(al) >= 0 ? 1.0 : -1.0, 0, 0, 0));
    }
    const Vec3 n = v / sv;
    const double sa = std::sin(al);
    return Point4(Vec4(std::cos(al), sa * n[0], sa * n[1], sa * n[2]));
}

template <typename Profile>
Eigen::Matrix4d suspension_jacobian(const Profile& prof, int winding, const Point4& p) {
    const Vec3 v(p.x[1], p.x[2], p.x[3]);
    const double sv = v.norm();
    const double s = std::atan2(sv, p.x[0]);
    const double al = prof.alpha(s);
    const double ap = prof.alpha_prime(s);
    const double sa = std::sin(al), ca = std::cos(al);

    double rho, rho_prime_over_ss;  // rho = sin(alpha)/sin(s)
    if (sv < 1e-9) {
        // North pole: rho -> alpha'(0); south pole: rho -> (-1)^(B+1) alpha'(pi).
        rho = (p.x[0] > 0) ? ap : ((winding % 2 == 0) ? -ap : ap);
        rho_prime_over_ss = 0.0;
    } else {
        rho = sa / sv;
        rho_prime_over_ss = (ap * ca - rho * p.x[0]) / (sv * sv);
    }

    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = ap * rho;
    for (int i = 1; i < 4; ++i) {
        m(i, i) = rho;
        m(i, 0) = -rho_prime_over_ss * p.x[i];  // -(d rho/ds)(w0/sin s) v
    }
    return m;
}

}  // namespace

MapS3 identity_map() {
    MapS3 m;
    m.label = "identity";
    m.eval = [](const Point4& p) { return p; };
    m.jacobian = [](const Point4&) { return Eigen::Matrix4d::Identity().eval(); };
    return m;
}

MapS3 conjugation_map() {
    MapS3 m;
    m.label = "conjugation";
    Eigen::Matrix4d c = Eigen::Matrix4d::Identity();
    c(1, 1) = c(2, 2) = c(3, 3) = -1.0;
    m.eval = [c](const Point4& p) { return Point4(Vec4(c * p.x)); };
    m.jacobian = [c](const Point4&) { return c; };
    return m;
}

MapS3 constant_map(const Point4& q0) {
    MapS3 m;
    m.label = "constant";
    m.eval = [q0](const Point4&) { return q0; };
    m.jacobian = [](const Point4&) { return Eigen::Matrix4d::Zero().eval(); };
    return m;
}

MapS3 suspension_map(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("suspension_map: a > 0 required");
    SuspensionProfile prof{a};
    MapS3 m;
    m.label = "suspension(a=" + std::to_string(a) + ")";
    m.eval = [prof](const Point4& p) { return suspension_eval(prof, p); };
    m.jacobian = [prof](const Point4& p) { return suspension_jacobian(prof, 1, p); };
    return m;
}

MapS3 profile_suspension_map(ProfileTable table) {
    auto shared = std::make_shared<ProfileTable>(std::move(table));
    const int b = shared->winding();
    MapS3 m;
    m.label = "profile_suspension(B=" + std::to_string(b) + ")";
    m.eval = [shared](const Point4& p) { return suspension_eval(*shared, p); };
    m.jacobian = [shared, b](const Point4& p) { return suspension_jacobian(*shared, b, p); };
    return m;
}

MapS3 right_translate(const Vec4& unit_quat, MapS3 base) {
    if (std::abs(unit_quat.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("right_translate: u must be a unit quaternion");
    const Vec4 u = unit_quat;
    // Right multiplication by u is linear; its matrix has columns e_i * u.
    Eigen::Matrix4d r;
    for (int i = 0; i < 4; ++i) {
        Vec4 e = Vec4::Zero();
        e[i] = 1.0;
        r.col(i) = quat_mul(e, u);
    }
    MapS3 m;
    m.label = "right_translate*" + base.label;
    auto base_eval = base.eval;
    m.eval = [base_eval, r](const Point4& p) { return Point4(Vec4(r * base_eval(p).x)); };
    if (base.jacobian) {
        auto base_jac = base.jacobian;
        m.jacobian = [base_jac, r](const Point4& p) { return (r * base_jac(p)).eval(); };
    }
    return m;
}

MapS3 fourier_test_map(std::uint64_t seed) {
    // 15 monomials of degree <= 2 per component; coefficients drawn once.
    struct Mono {
        int i = -1, j = -1;
    };
    static constexpr int kCount = 15;
    std::array<Mono, kCount> monos;
    int idx = 0;
    monos[idx++] = Mono{-1, -1};
    for (int i = 0; i < 4; ++i) monos[idx++] = Mono{i, -1};
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) monos[idx++] = Mono{i, j};

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::array<std::array<double, kCount>, 4> coeff{};
    double l1_sq = 0.0;
    for (int c = 0; c < 4; ++c) {
        double l1 = 0.0;
        for (int t = 0; t < kCount; ++t) {
            coeff[c][t] = dist(rng);
            l1 += std::abs(coeff[c][t]);
        }
        l1_sq += l1 * l1;
    }
    // |w(p)| <= 1 on the sphere after this scaling; epsilon keeps p + eps*w
    // inside a ball avoiding the origin, so the homotopy to the identity is
    // well defined and the degree stays 1.
    const double scale = 1.0 / std::sqrt(l1_sq);
    const double eps = 0.25;

    MapS3 m;
    m.label = "fourier_test(seed=" + std::to_string(seed) + ")";
    m.eval = [monos, coeff, scale, eps](const Point4& p) {
        Vec4 w = Vec4::Zero();
        for (int c = 0; c < 4; ++c) {
            double acc = 0.0;
            for (int t = 0; t < kCount; ++t) {
                const auto& mo = monos[t];
                double v = coeff[c][t];
                if (mo.i >= 0) v *= p.x[mo.i];
                if (mo.j >= 0) v *= p.x[mo.j];
                acc += v;
            }
            w[c] = acc * scale;
        }
        return Point4(Vec4(p.x + eps * w));
    };
    return m;
}

// ---------------------------------------------------------------------------
// Differentials and pullbacks

std::array<Vec4, 3> differential_columns_fd(const MapS3& map, const Point4& p, double h) {
    const FrameBasis f = s3::frame_at(p);
    const Point4 fp = map.eval(p);
    const double ch = std::cos(h), sh = std::sin(h);
    std::array<Vec4, 3> cols;
    for (int j = 0; j < 3; ++j) {
        const Vec4 e = f[j];
        const Point4 qp(Vec4(ch * p.x + sh * e));
        const Point4 qm(Vec4(ch * p.x - sh * e));
        Vec4 d = (map.eval(qp).x - map.eval(qm).x) / (2.0 * sh);
        d -= d.dot(fp.x) * fp.x;
        cols[j] = d;
    }
    return cols;
}

std::array<Vec4, 3> differential_columns(const MapS3& map, const Point4& p, double h) {
    if (map.has_analytic_differential()) {
        const Eigen::Matrix4d jac = map.jacobian(p);
        const FrameBasis f = s3::frame_at(p);
        return {Vec4(jac * f.xi), Vec4(jac * f.x1), Vec4(jac * f.x2)};
    }
    return differential_columns_fd(map, p, h);
}

Jacobian3 differential(const MapS3& map, const Point4& p, double h) {
    const auto cols = differential_columns(map, p, h);
    const FrameBasis tf = s3::frame_at(map.eval(p));
    Jacobian3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.m(i, j) = tf[i].dot(cols[j]);
    return out;
}

FormSample pullback_sample(const MapS3& map, const Point4& p, double h) {
    const auto cols = differential_columns(map, p, h);
    const Point4 fp = map.eval(p);
    const Vec4 xi_target = s3::frame_at(fp).xi;
    FormSample out;
    for (int j = 0; j < 3; ++j) out.beta.c[j] = xi_target.dot(cols[j]);
    out.omega.c[0] = s3::deta_eval(fp, cols[1], cols[2]);
    out.omega.c[1] = s3::deta_eval(fp, cols[2], cols[0]);
    out.omega.c[2] = s3::deta_eval(fp, cols[0], cols[1]);
    out.xi_hat = out.beta.c;
    return out;
}

OneForm3 pullback_eta(const MapS3& map, const Point4& p, double h) {
    const auto cols = differential_columns(map, p, h);
    const Vec4 xi_target = s3::frame_at(map.eval(p)).xi;
    OneForm3 b;
    for (int j = 0; j < 3; ++j) b.c[j] = xi_target.dot(cols[j]);
    return b;
}

TwoForm3 pullback_deta(const MapS3& map, const Point4& p, double h) {
    const auto cols = differential_columns(map, p, h);
    const Point4 fp = map.eval(p);
    TwoForm3 w;
    w.c[0] = s3::deta_eval(fp, cols[1], cols[2]);
    w.c[1] = s3::deta_eval(fp, cols[2], cols[0]);
    w.c[2] = s3::deta_eval(fp, cols[0], cols[1]);
    return w;
}

Strain strain(const MapS3& map, const Point4& p, double h) {
    const Jacobian3 j = differential(map, p, h);
    const Eigen::Matrix3d cg = j.m.transpose() * j.m;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cg);
    Strain out;
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();
    return out;
}

}  // namespace bsk::maps

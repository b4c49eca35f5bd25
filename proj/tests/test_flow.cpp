#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bsk/analysis.hpp"
#include "bsk/errors.hpp"
#include "bsk/flow.hpp"

using namespace bsk::flow;
using bsk::s3::GridS3;

namespace {

constexpr double kPi = std::numbers::pi;
const double kFourPiSq = 4.0 * kPi * kPi;

const GridS3& flow_grid() {
    static const GridS3 grid = bsk::s3::build_grid(24, 16, 16);
    return grid;
}

}  // namespace

TEST_CASE("reduced energy of the straight profile is 4 pi^2") {
    const Profile p = make_profile(1, 32, [](double s) { return s; });
    CHECK(reduced_energy(p, 2.0, flow_grid()) == doctest::Approx(kFourPiSq).epsilon(1e-9));
}

TEST_CASE("reduced energy of suspension(2) profile exceeds 4 pi^2 at constant c=2") {
    bsk::maps::SuspensionProfile prof{2.0};
    const Profile p = make_profile(1, 48, [&](double s) { return prof.alpha(s); });
    CHECK(reduced_energy(p, 2.0, flow_grid()) > kFourPiSq + 1.0);
}

TEST_CASE("vacuum profile: alpha = 0 with B = 0 has zero energy") {
    Profile p;
    p.target_degree = 0;
    p.s_nodes = {kPi / 4, kPi / 2, 3 * kPi / 4};
    p.alpha = {0.0, 0.0, 0.0};
    CHECK(reduced_energy(p, 2.0, flow_grid()) < 1e-18);
}

TEST_CASE("banded gradient agrees with brute-force central differences") {
    const Profile p = make_profile(1, 12, [](double s) { return s + 0.2 * std::sin(s); });
    const double eps = 1e-5;
    const auto banded = energy_gradient(p, 2.0, flow_grid(), eps);
    REQUIRE(banded.size() == p.alpha.size());
    for (std::size_t i = 0; i < p.alpha.size(); ++i) {
        Profile plus = p, minus = p;
        plus.alpha[i] += eps;
        minus.alpha[i] -= eps;
        const double brute = (reduced_energy(plus, 2.0, flow_grid()) -
                              reduced_energy(minus, 2.0, flow_grid())) /
                             (2 * eps);
        CHECK(std::abs(banded[i] - brute) < 1e-7 * std::max(1.0, std::abs(brute)));
    }
}

TEST_CASE("minimize: perturbed identity relaxes to alpha = s at B=1, c=2") {
    const Profile start = make_profile(1, 32, [](double s) { return s + 0.3 * std::sin(2 * s); });
    FlowOptions opts;
    opts.max_iter = 400;
    opts.grad_tol = 2e-4;
    const FlowResult res = minimize(start, 2.0, flow_grid(), opts);

    // Accepted steps strictly decrease the energy.
    for (std::size_t i = 1; i < res.energy_trace.size(); ++i)
        CHECK(res.energy_trace[i] < res.energy_trace[i - 1]);

    CHECK(res.report.energy < kFourPiSq * 1.005);
    CHECK(res.report.energy > kFourPiSq * (1.0 - 1e-6));
    double sup = 0.0;
    for (std::size_t i = 0; i < res.profile.alpha.size(); ++i)
        sup = std::max(sup, std::abs(res.profile.alpha[i] - res.profile.s_nodes[i]));
    CHECK(sup < 1e-2);
    CHECK(std::abs(res.report.degree - 1.0) < 1e-4);
}

TEST_CASE("minimize: suspension(3) profile relaxes into the identity basin") {
    bsk::maps::SuspensionProfile prof{3.0};
    const Profile start = make_profile(1, 24, [&](double s) { return prof.alpha(s); });
    FlowOptions opts;
    opts.max_iter = 1500;  // the farther start needs more of the slow lowest mode
    opts.grad_tol = 5e-4;
    const FlowResult res = minimize(start, 2.0, flow_grid(), opts);

    CHECK(res.report.energy < kFourPiSq * 1.005);
    double sup = 0.0;
    for (std::size_t i = 0; i < res.profile.alpha.size(); ++i)
        sup = std::max(sup, std::abs(res.profile.alpha[i] - res.profile.s_nodes[i]));
    CHECK(sup < 5e-2);
    CHECK(std::abs(res.report.degree - 1.0) < 1e-4);
}

TEST_CASE("minimize: B=2 stays strictly above the bound") {
    const Profile start = make_profile(2, 24, [](double s) { return 2 * s; });
    FlowOptions opts;
    opts.max_iter = 60;
    opts.grad_tol = 1e-3;
    const FlowResult res = minimize(start, 2.0, flow_grid(), opts);
    CHECK(std::abs(res.report.degree - 2.0) < 1e-4);
    CHECK(res.report.energy / (2 * kFourPiSq) > 1.0 + 1e-4);
    for (std::size_t i = 1; i < res.energy_trace.size(); ++i)
        CHECK(res.energy_trace[i] < res.energy_trace[i - 1]);
}

TEST_CASE("minimize rejects invalid configurations") {
    const Profile p = make_profile(1, 8, [](double s) { return s; });
    CHECK_THROWS_AS(minimize(p, -2.0, flow_grid()), bsk::ConfigError);
    Profile b0 = p;
    b0.target_degree = 0;
    CHECK_THROWS_AS(minimize(b0, 2.0, flow_grid()), bsk::ConfigError);
    FlowOptions bad;
    bad.step = 0.0;
    CHECK_THROWS_AS(minimize(p, 2.0, flow_grid(), bad), bsk::ConfigError);
}

TEST_CASE("minimize reports non-convergence when the iteration cap is hit") {
    const Profile start = make_profile(1, 16, [](double s) { return s + 0.3 * std::sin(2 * s); });
    FlowOptions opts;
    opts.max_iter = 2;
    opts.grad_tol = 0.0;
    const FlowResult res = minimize(start, 2.0, flow_grid(), opts);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 2);
}

TEST_CASE("profile round trip through the spline adds no defect at the identity") {
    // The interpolant reproduces linear data exactly, so the tabulated
    // identity profile has the same defect floor as the analytic identity map.
    const Profile p = make_profile(1, 64, [](double s) { return s; });
    const bsk::maps::MapS3 tab = bsk::maps::profile_suspension_map(p.to_table());
    const double floor_analytic = bsk::analysis::bps_defect(
        bsk::maps::identity_map(), bsk::analysis::Coupling::constant(2.0), flow_grid());
    const double floor_profile =
        bsk::analysis::bps_defect(tab, bsk::analysis::Coupling::constant(2.0), flow_grid());
    CHECK(floor_profile < 10.0 * std::max(floor_analytic, 1e-9));
}

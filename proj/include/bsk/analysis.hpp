#pragma once

#include <array>
#include <string>
#include <vector>

#include "bsk/maps.hpp"
#include "bsk/s3.hpp"

// Energy, topological degree, Bogomol'nyi defect and the property-check suite
// for (strong and variable-coupling) Beltrami maps.

namespace bsk::analysis {

using maps::MapS3;
using s3::GridS3;
using s3::OneForm3;
using s3::Point4;
using s3::TwoForm3;

struct Coupling {
    enum class Mode { Constant, Pointwise };
    Mode mode = Mode::Constant;
    double c = 2.0;

    static Coupling constant(double c) { return Coupling{Mode::Constant, c}; }
    static Coupling pointwise() { return Coupling{Mode::Pointwise, 0.0}; }
    bool is_constant() const { return mode == Mode::Constant; }
};

// One-form fields sampled pointwise, with frame-geodesic finite differences.
using OneFormField = std::function<OneForm3(const Point4&)>;

OneFormField beta_field(const MapS3& map, double h = 1e-4);

// (*d beta) from sampled components plus the commutator correction
// ([e_a, e_b] = -2 eps_abc e_c), matching the symbolic curl convention.
OneForm3 fd_curl_at(const OneFormField& field, const Point4& p, double h = 1e-4);
double fd_div_at(const OneFormField& field, const Point4& p, double h = 1e-4);

// E = 1/2 Int c |phi^* eta|^2 + c^-1 |phi^* d eta|^2.
double energy(const MapS3& map, const Coupling& c, const GridS3& grid, double h = 1e-4);

// deg = (1/4 pi^2) Int phi^*(eta ^ d eta); near-integer for smooth maps.
double degree(const MapS3& map, const GridS3& grid, double h = 1e-4);

// L^2 norm of *d beta - c beta over the grid.
double bps_defect(const MapS3& map, const Coupling& c, const GridS3& grid, double h = 1e-4);

struct PointwiseCoupling {
    bool critical = false;  // |beta| below threshold; no value reported
    double c = 0.0;
    double residual = 0.0;  // | *d beta - c beta |
};

PointwiseCoupling pointwise_coupling(const MapS3& map, const Point4& p, double h = 1e-4);

struct CheckResult {
    std::string name;
    double value = 0.0;  // residual, or extremal value for sign checks
    double tol = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string note;
};

struct PropertyReport {
    std::vector<CheckResult> checks;
    std::array<int, 4> rank_histogram{0, 0, 0, 0};
    int critical_points = 0;

    const CheckResult& check(const std::string& name) const;
    bool all_pass() const;  // ignoring skipped checks
};

// The ten pointwise/integral identities of strong (and variable-c) Beltrami
// maps; failures are findings, not exceptions.
PropertyReport check_properties(const MapS3& map, const Coupling& c, const GridS3& grid,
                                double h = 1e-4);

struct EnergyReport {
    double energy = 0.0;
    double degree = 0.0;
    double bound = 0.0;  // 4 pi^2 * round(degree)
    double ratio = 0.0;
    double defect = 0.0;
    std::string coupling_mode;
    double c = 0.0;
    bool degree_resolved = true;        // |deg - round(deg)| <= 1e-3
    bool bound_ok = true;               // E - bound >= -slack
    double completion_residual = 0.0;   // relative residual of the Bogomol'nyi completion
    bool completion_ok = true;
};

EnergyReport bound_report(const MapS3& map, const Coupling& c, const GridS3& grid,
                          double h = 1e-4);

}  // namespace bsk::analysis

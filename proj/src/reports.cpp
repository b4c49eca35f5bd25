#include "bsk/reports.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bsk/errors.hpp"
#include "bsk/selftest.hpp"

namespace bsk::reports {

namespace {
constexpr double kPi = std::numbers::pi;
}

maps::MapS3 map_from_json(const json& spec) {
    if (!spec.is_object() || !spec.contains("family"))
        throw ConfigError("map spec: expected an object with a 'family' field");
    const std::string family = spec.at("family").get<std::string>();

    if (family == "identity") return maps::identity_map();
    if (family == "conjugation") return maps::conjugation_map();
    if (family == "constant") {
        s3::Vec4 q(1, 0, 0, 0);
        if (spec.contains("point")) {
            const auto pt = spec.at("point").get<std::vector<double>>();
            if (pt.size() != 4) throw ConfigError("map spec: 'point' must have 4 entries");
            q = s3::Vec4(pt[0], pt[1], pt[2], pt[3]);
        }
        return maps::constant_map(s3::Point4(q));
    }
    if (family == "suspension") {
        if (!spec.contains("a")) throw ConfigError("map spec: suspension requires 'a'");
        const double a = spec.at("a").get<double>();
        if (!(a > 0.0)) throw ConfigError("map spec: suspension parameter a must be positive");
        return maps::suspension_map(a);
    }
    if (family == "profile_suspension") {
        if (spec.contains("csv")) {
            std::ifstream in(spec.at("csv").get<std::string>());
            if (!in) throw ConfigError("map spec: cannot open profile CSV");
            return maps::profile_suspension_map(maps::ProfileTable::from_csv(in));
        }
        if (spec.contains("s") && spec.contains("alpha")) {
            return maps::profile_suspension_map(maps::ProfileTable(
                spec.at("s").get<std::vector<double>>(),
                spec.at("alpha").get<std::vector<double>>()));
        }
        throw ConfigError("map spec: profile_suspension requires 'csv' or 's'+'alpha'");
    }
    if (family == "right_translate") {
        if (!spec.contains("u") || !spec.contains("base"))
            throw ConfigError("map spec: right_translate requires 'u' and 'base'");
        const auto uv = spec.at("u").get<std::vector<double>>();
        if (uv.size() != 4) throw ConfigError("map spec: 'u' must have 4 entries");
        s3::Vec4 u(uv[0], uv[1], uv[2], uv[3]);
        const double n = u.norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError("map spec: 'u' must be nonzero");
        return maps::right_translate(u / n, map_from_json(spec.at("base")));
    }
    if (family == "fourier_test") {
        const std::uint64_t seed =
            spec.contains("seed") ? spec.at("seed").get<std::uint64_t>() : 1;
        return maps::fourier_test_map(seed);
    }
    throw ConfigError("map spec: unknown family '" + family + "'");
}

analysis::Coupling coupling_from_json(const json& spec) {
    if (spec.is_number()) return analysis::Coupling::constant(spec.get<double>());
    if (!spec.is_object() || !spec.contains("mode"))
        throw ConfigError("coupling spec: expected {mode: constant|pointwise}");
    const std::string mode = spec.at("mode").get<std::string>();
    if (mode == "constant") {
        const double c = spec.contains("c") ? spec.at("c").get<double>() : 2.0;
        if (!(c > 0.0)) throw ConfigError("coupling spec: c must be positive");
        return analysis::Coupling::constant(c);
    }
    if (mode == "pointwise") return analysis::Coupling::pointwise();
    throw ConfigError("coupling spec: unknown mode '" + mode + "'");
}

s3::GridSpec grid_from_json(const json& spec, const s3::GridSpec& fallback) {
    if (spec.is_null()) return fallback;
    if (spec.is_array()) {
        const auto v = spec.get<std::vector<int>>();
        if (v.size() != 3) throw ConfigError("grid spec: expected [n_s, n_theta, n_psi]");
        return s3::GridSpec{v[0], v[1], v[2]};
    }
    if (spec.is_object()) {
        s3::GridSpec g = fallback;
        if (spec.contains("n_s")) g.n_s = spec.at("n_s").get<int>();
        if (spec.contains("n_theta")) g.n_theta = spec.at("n_theta").get<int>();
        if (spec.contains("n_psi")) g.n_psi = spec.at("n_psi").get<int>();
        return g;
    }
    throw ConfigError("grid spec: expected array or object");
}

json finalize(json body, const std::string& subcommand) {
    json out;
    out["schema"] = 1;
    out["subcommand"] = subcommand;
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    out["timestamp"] = buf;
    out.update(body);
    return out;
}

namespace {

json energy_body(const analysis::EnergyReport& r) {
    json j;
    j["E"] = r.energy;
    j["degree"] = r.degree;
    j["bound"] = r.bound;
    j["ratio"] = r.ratio;
    j["defect"] = r.defect;
    j["coupling_mode"] = r.coupling_mode;
    if (r.coupling_mode == "constant") j["c"] = r.c;
    j["degree_resolved"] = r.degree_resolved;
    if (!r.degree_resolved) j["warning"] = "unresolved degree";
    j["bound_ok"] = r.bound_ok;
    j["completion_residual"] = r.completion_residual;
    j["completion_ok"] = r.completion_ok;
    return j;
}

json grid_json(const s3::GridSpec& g) { return json::array({g.n_s, g.n_theta, g.n_psi}); }

bool family_has_s_profile(const json& map_spec) {
    const std::string fam = map_spec.value("family", "");
    return fam == "identity" || fam == "suspension" || fam == "profile_suspension";
}

}  // namespace

json spectrum_report(int max_degree, double tol) {
    const auto t0 = std::chrono::steady_clock::now();
    const curlspec::SpectrumReport rep = curlspec::spectrum(max_degree, tol);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json clusters = json::array();
    double worst_integrality = 0.0;
    for (const auto& c : rep.clusters) {
        json jc;
        jc["mu"] = c.mu;
        jc["mu_int"] = static_cast<int>(std::lround(c.mu));
        jc["multiplicity"] = c.multiplicity;
        clusters.push_back(jc);
        if (std::abs(c.mu) > 0.5)
            worst_integrality = std::max(worst_integrality, std::abs(c.mu - std::lround(c.mu)));
    }
    json body;
    body["K"] = rep.max_degree;
    body["tol"] = rep.tol;
    body["clusters"] = clusters;
    body["rankG"] = rep.rank_g;
    body["gradient_count"] = rep.gradient_count;
    body["max_integer_distance"] = worst_integrality;
    body["runtime_seconds"] = seconds;
    return finalize(body, "spectrum");
}

json energy_report(const json& map_spec, const json& coupling_spec, const s3::GridSpec& res) {
    const maps::MapS3 map = map_from_json(map_spec);
    const analysis::Coupling c = coupling_from_json(coupling_spec);
    const s3::GridS3 grid = s3::build_grid(res.n_s, res.n_theta, res.n_psi);
    json body = energy_body(analysis::bound_report(map, c, grid));
    body["map"] = map.label;
    body["grid"] = grid_json(res);
    return finalize(body, "energy");
}

json check_report(const json& map_spec, const json& coupling_spec, const s3::GridSpec& res,
                  int profile_samples) {
    const maps::MapS3 map = map_from_json(map_spec);
    const analysis::Coupling c = coupling_from_json(coupling_spec);
    const s3::GridS3 grid = s3::build_grid(res.n_s, res.n_theta, res.n_psi);

    const analysis::PropertyReport props = analysis::check_properties(map, c, grid);
    const analysis::EnergyReport er = analysis::bound_report(map, c, grid);

    json checks = json::array();
    for (const auto& ck : props.checks) {
        json jc;
        jc["name"] = ck.name;
        jc["value"] = ck.value;
        jc["tol"] = ck.tol;
        jc["pass"] = ck.pass;
        jc["skipped"] = ck.skipped;
        if (!ck.note.empty()) jc["note"] = ck.note;
        checks.push_back(jc);
    }

    json body;
    body["map"] = map.label;
    body["grid"] = grid_json(res);
    body["checks"] = checks;
    body["all_pass"] = props.all_pass();
    body["rank_histogram"] = props.rank_histogram;
    body["critical_points"] = props.critical_points;
    body["energy"] = energy_body(er);

    if (family_has_s_profile(map_spec) && profile_samples > 0) {
        // Per-s profile sweep at a fixed generic (theta, psi).
        const double theta0 = 1.0, psi0 = 0.5;
        json rows = json::array();
        for (int i = 0; i < profile_samples; ++i) {
            const double s = kPi * (i + 0.5) / profile_samples;
            const double ss = std::sin(s);
            const s3::Point4 p(std::cos(s), ss * std::sin(theta0) * std::cos(psi0),
                               ss * std::sin(theta0) * std::sin(psi0), ss * std::cos(theta0));
            const auto pc = analysis::pointwise_coupling(map, p);
            const auto st = maps::strain(map, p);
            const auto beta = maps::pullback_eta(map, p);
            json row;
            row["s"] = s;
            row["beta_sq"] = beta.norm2();
            row["c_pt"] = pc.critical ? 0.0 : pc.c;
            row["critical"] = pc.critical;
            row["lambda_sq"] = json::array(
                {st.eigenvalues[0], st.eigenvalues[1], st.eigenvalues[2]});
            rows.push_back(row);
        }
        body["profile"] = rows;
    }
    return finalize(body, "check");
}

json flow_report(const json& config) {
    const int b = config.value("B", 1);
    const double c = config.value("c", 2.0);
    const int n_interior = config.value("nodes", 64);
    const s3::GridSpec res = grid_from_json(config.contains("grid") ? config.at("grid") : json(),
                                            s3::GridSpec{32, 24, 24});
    flow::FlowOptions opts;
    opts.step = config.value("step", 0.5);
    opts.max_iter = config.value("max_iter", 500);
    opts.grad_tol = config.value("grad_tol", 2e-4);

    const std::string init = config.value("init", "linear");
    std::function<double(double)> alpha0;
    if (init == "linear") {
        alpha0 = [b](double s) { return b * s; };
    } else if (init == "perturbed") {
        alpha0 = [b](double s) { return b * s + 0.3 * std::sin(2.0 * s); };
    } else if (init == "suspension") {
        const double a = config.value("a", 2.0);
        maps::SuspensionProfile prof{a};
        alpha0 = [prof](double s) { return prof.alpha(s); };
    } else {
        throw ConfigError("flow: unknown init '" + init + "'");
    }

    const s3::GridS3 grid = s3::build_grid(res.n_s, res.n_theta, res.n_psi);
    flow::Profile prof = flow::make_profile(b, n_interior, alpha0);
    const auto t0 = std::chrono::steady_clock::now();
    const flow::FlowResult result = flow::minimize(std::move(prof), c, grid, opts);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json body;
    body["B"] = b;
    body["c"] = c;
    body["nodes"] = n_interior;
    body["grid"] = grid_json(res);
    body["init"] = init;
    body["step"] = opts.step;
    body["max_iter"] = opts.max_iter;
    body["grad_tol"] = opts.grad_tol;
    body["converged"] = result.converged;
    body["iterations"] = result.iterations;
    body["runtime_seconds"] = seconds;
    body["energy_trace"] = result.energy_trace;
    body["final"] = energy_body(result.report);
    body["profile_s"] = result.profile.s_nodes;
    body["profile_alpha"] = result.profile.alpha;
    return finalize(body, "flow");
}

json convergence_report(const json& map_spec, const json& coupling_spec,
                        const s3::GridSpec& base) {
    const maps::MapS3 map = map_from_json(map_spec);
    const analysis::Coupling c = coupling_from_json(coupling_spec);

    const s3::GridSpec levels[3] = {
        base,
        {2 * base.n_s, 2 * base.n_theta, 2 * base.n_psi},
        {4 * base.n_s, 4 * base.n_theta, 4 * base.n_psi},
    };
    std::vector<double> energies, degrees;
    json resolutions = json::array();
    for (const auto& g : levels) {
        const s3::GridS3 grid = s3::build_grid(g.n_s, g.n_theta, g.n_psi);
        energies.push_back(analysis::energy(map, c, grid));
        degrees.push_back(analysis::degree(map, grid));
        resolutions.push_back(grid_json(g));
    }
    auto order = [](const std::vector<double>& q) {
        const double d1 = std::abs(q[0] - q[1]), d2 = std::abs(q[1] - q[2]);
        if (d2 < 1e-15 || d1 < 1e-15) return json();  // converged below noise
        return json(std::log2(d1 / d2));
    };
    json body;
    body["map"] = map.label;
    body["resolutions"] = resolutions;
    body["E"] = energies;
    body["degree"] = degrees;
    body["E_order"] = order(energies);
    body["degree_order"] = order(degrees);
    return finalize(body, "convergence");
}

json selftest_report() {
    const auto results = selftest::run_all();
    json arr = json::array();
    for (const auto& r : results) {
        json jr;
        jr["name"] = r.name;
        jr["pass"] = r.pass;
        if (!r.detail.empty()) jr["detail"] = r.detail;
        arr.push_back(jr);
    }
    json body;
    body["results"] = arr;
    body["all_pass"] = selftest::all_pass(results);
    return finalize(body, "selftest");
}

}  // namespace bsk::reports

// Command-line front end. All computation goes through the C API in
// bsk/capi.h; this binary only parses flags, forwards JSON and writes files.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "bsk/capi.h"

namespace {

using json = nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitFailure = 1;

int exit_code_for(bsk_status st) {
    std::cerr << "error: " << bsk_last_error() << "\n";
    return (st == BSK_ERR_INVALID_ARGUMENT || st == BSK_ERR_RESOURCE) ? kExitUsage : kExitFailure;
}

struct Options {
    std::string map_family = "identity";
    double a = 2.0;
    std::uint64_t seed = 1;
    std::vector<double> u;
    std::string profile_csv;
    std::string map_json;

    std::string coupling = "constant";
    double c = 2.0;

    std::vector<int> res{32, 24, 24};
    std::string out;
    std::string csv;
    std::string config_path;
    int threads = 0;
};

json build_map_spec(const Options& o) {
    if (!o.map_json.empty()) return json::parse(o.map_json);
    json spec;
    spec["family"] = o.map_family;
    if (o.map_family == "suspension") spec["a"] = o.a;
    if (o.map_family == "fourier_test") spec["seed"] = o.seed;
    if (o.map_family == "profile_suspension") spec["csv"] = o.profile_csv;
    if (o.map_family == "right_translate") {
        spec["u"] = o.u.empty() ? std::vector<double>{1, 0, 0, 0} : o.u;
        spec["base"] = json{{"family", "identity"}};
    }
    return spec;
}

json build_coupling_spec(const Options& o) {
    if (o.coupling == "pointwise") return json{{"mode", "pointwise"}};
    return json{{"mode", "constant"}, {"c", o.c}};
}

void apply_config_defaults(Options& o, CLI::App* sub) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + o.config_path);
    json cfg = json::parse(in);
    auto overridden = [&](const std::string& flag) {
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    if (cfg.contains("map") && !overridden("--map")) o.map_family = cfg["map"];
    if (cfg.contains("a") && !overridden("--a")) o.a = cfg["a"];
    if (cfg.contains("seed") && !overridden("--seed")) o.seed = cfg["seed"];
    if (cfg.contains("coupling") && !overridden("--coupling")) o.coupling = cfg["coupling"];
    if (cfg.contains("c") && !overridden("--c")) o.c = cfg["c"];
    if (cfg.contains("res") && !overridden("--res")) o.res = cfg["res"].get<std::vector<int>>();
    if (cfg.contains("threads") && !overridden("--threads")) o.threads = cfg["threads"];
}

int emit(const char* text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return kExitFailure;
        }
        f << text << "\n";
    }
    return 0;
}

int write_profile_csv(const json& report, const std::string& path) {
    if (!report.contains("profile")) return 0;
    std::ofstream f(path);
    if (!f) {
        std::cerr << "error: cannot write " << path << "\n";
        return kExitFailure;
    }
    f << "s,beta_sq,c_pt,lambda1_sq,lambda2_sq,lambda3_sq\n";
    f.precision(17);
    for (const auto& row : report["profile"]) {
        const auto& lam = row["lambda_sq"];
        f << row["s"].get<double>() << "," << row["beta_sq"].get<double>() << ","
          << row["c_pt"].get<double>() << "," << lam[0].get<double>() << ","
          << lam[1].get<double>() << "," << lam[2].get<double>() << "\n";
    }
    return 0;
}

struct CString {
    char* ptr = nullptr;
    ~CString() { bsk_string_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bsk: energy, degree and Beltrami-map verification toolkit on the 3-sphere"};
    app.require_subcommand(1);

    Options o;
    int max_degree = 3;
    double spectrum_tol = 1e-9;
    int flow_b = 1;
    int flow_nodes = 64;
    double flow_step = 0.5;
    int flow_max_iter = 500;
    double flow_grad_tol = 2e-4;
    std::string flow_init = "linear";
    std::string csv_prefix;

    auto add_common = [&](CLI::App* sub, bool with_map) {
        sub->add_option("--res", o.res, "grid resolution n_s,n_theta,n_psi")->expected(3);
        sub->add_option("--out", o.out, "write the JSON report to this path");
        sub->add_option("--threads", o.threads, "cap worker threads (0 = hardware)");
        sub->add_option("--config", o.config_path, "JSON config supplying defaults");
        if (with_map) {
            sub->add_option("--map", o.map_family,
                            "map family: identity|conjugation|constant|suspension|"
                            "profile_suspension|right_translate|fourier_test");
            sub->add_option("--a", o.a, "suspension parameter");
            sub->add_option("--seed", o.seed, "seed for fourier_test maps");
            sub->add_option("--u", o.u, "unit quaternion for right_translate")->expected(4);
            sub->add_option("--profile-csv", o.profile_csv, "CSV with columns s,alpha");
            sub->add_option("--map-json", o.map_json, "raw map spec JSON (overrides --map)");
            sub->add_option("--coupling", o.coupling, "constant|pointwise");
            sub->add_option("--c", o.c, "constant coupling value");
        }
    };

    CLI::App* sp = app.add_subcommand("spectrum", "exact curl spectrum on polynomial fields");
    sp->add_option("--max-degree", max_degree, "polynomial degree bound K");
    sp->add_option("--tol", spectrum_tol, "integrality tolerance");
    add_common(sp, false);

    CLI::App* en = app.add_subcommand("energy", "energy/degree/bound report for a map");
    add_common(en, true);

    CLI::App* ck = app.add_subcommand("check", "run the Beltrami property checks for a map");
    add_common(ck, true);
    ck->add_option("--csv", o.csv, "write the per-s profile sweep to this CSV");

    CLI::App* fl = app.add_subcommand("flow", "equivariant gradient-flow minimization");
    fl->add_option("--B", flow_b, "target degree (boundary alpha(pi) = B pi)");
    fl->add_option("--c", o.c, "constant coupling");
    fl->add_option("--nodes", flow_nodes, "interior profile nodes");
    fl->add_option("--step", flow_step, "initial descent step");
    fl->add_option("--max-iter", flow_max_iter, "iteration cap");
    fl->add_option("--grad-tol", flow_grad_tol, "gradient sup-norm stop");
    fl->add_option("--init", flow_init, "initial profile: linear|perturbed|suspension");
    fl->add_option("--a", o.a, "parameter for --init suspension");
    fl->add_option("--csv-prefix", csv_prefix, "write <prefix>_profile.csv and <prefix>_trace.csv");
    add_common(fl, false);

    CLI::App* cv = app.add_subcommand("convergence", "energy/degree at three resolutions");
    add_common(cv, true);

    CLI::App* st = app.add_subcommand("selftest", "exact symbolic invariants of the core");
    st->add_option("--out", o.out, "write the JSON report to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        apply_config_defaults(o, active);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    bsk_set_threads(o.threads);

    const std::string map_spec = build_map_spec(o).dump();
    const std::string coupling_spec = build_coupling_spec(o).dump();
    const int res[3] = {o.res.size() == 3 ? o.res[0] : 32, o.res.size() == 3 ? o.res[1] : 24,
                        o.res.size() == 3 ? o.res[2] : 24};

    CString text;
    bsk_status status = BSK_OK;

    if (active == sp) {
        status = bsk_spectrum_report(max_degree, spectrum_tol, &text.ptr);
    } else if (active == en) {
        status = bsk_energy_report(map_spec.c_str(), coupling_spec.c_str(), res, &text.ptr);
    } else if (active == ck) {
        status = bsk_check_report(map_spec.c_str(), coupling_spec.c_str(), res, &text.ptr);
    } else if (active == cv) {
        const int base[3] = {res[0] / 2 > 4 ? res[0] / 2 : 8, res[1] / 2 > 4 ? res[1] / 2 : 6,
                             res[2] / 2 > 4 ? res[2] / 2 : 6};
        status = bsk_convergence_report(map_spec.c_str(), coupling_spec.c_str(), base, &text.ptr);
    } else if (active == fl) {
        json cfg;
        cfg["B"] = flow_b;
        cfg["c"] = o.c;
        cfg["nodes"] = flow_nodes;
        cfg["grid"] = o.res;
        cfg["step"] = flow_step;
        cfg["max_iter"] = flow_max_iter;
        cfg["grad_tol"] = flow_grad_tol;
        cfg["init"] = flow_init;
        if (flow_init == "suspension") cfg["a"] = o.a;
        status = bsk_flow_run(cfg.dump().c_str(), &text.ptr);
    } else if (active == st) {
        int all_pass = 0;
        status = bsk_selftest(&text.ptr, &all_pass);
        if (status == BSK_OK && !all_pass) {
            const json rep = json::parse(text.ptr);
            for (const auto& r : rep["results"])
                if (!r["pass"].get<bool>())
                    std::cerr << "selftest failure: " << r["name"].get<std::string>() << "\n";
            emit(text.ptr, o.out);
            return kExitFailure;
        }
    }

    if (status != BSK_OK) return exit_code_for(status);

    if (active == ck && !o.csv.empty()) {
        const int rc = write_profile_csv(json::parse(text.ptr), o.csv);
        if (rc != 0) return rc;
    }
    if (active == fl && !csv_prefix.empty()) {
        const json rep = json::parse(text.ptr);
        {
            std::ofstream f(csv_prefix + "_profile.csv");
            f << "s,alpha\n";
            f.precision(17);
            const auto& s = rep["profile_s"];
            const auto& a = rep["profile_alpha"];
            for (std::size_t i = 0; i < s.size(); ++i)
                f << s[i].get<double>() << "," << a[i].get<double>() << "\n";
        }
        {
            std::ofstream f(csv_prefix + "_trace.csv");
            f << "iteration,E\n";
            f.precision(17);
            const auto& tr = rep["energy_trace"];
            for (std::size_t i = 0; i < tr.size(); ++i)
                f << i << "," << tr[i].get<double>() << "\n";
        }
    }

    return emit(text.ptr, o.out);
}

#include "bsk/capi.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "bsk/analysis.hpp"
#include "bsk/errors.hpp"
#include "bsk/maps.hpp"
#include "bsk/parallel.hpp"
#include "bsk/reports.hpp"
#include "bsk/s3.hpp"

namespace {

thread_local std::string g_last_error = "";

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
bsk_status guarded(Fn&& fn) {
    try {
        fn();
        return BSK_OK;
    } catch (const bsk::ConfigError& ex) {
        g_last_error = ex.what();
        return BSK_ERR_INVALID_ARGUMENT;
    } catch (const bsk::ResourceError& ex) {
        g_last_error = ex.what();
        return BSK_ERR_RESOURCE;
    } catch (const bsk::NotFoundError& ex) {
        g_last_error = ex.what();
        return BSK_ERR_NOT_FOUND;
    } catch (const bsk::DiagnosticError& ex) {
        g_last_error = std::string(ex.what()) + " payload=" + ex.payload;
        return BSK_ERR_DIAGNOSTIC;
    } catch (const bsk::EvalError& ex) {
        g_last_error = ex.what();
        return BSK_ERR_EVAL;
    } catch (const std::invalid_argument& ex) {
        g_last_error = ex.what();
        return BSK_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& ex) {
        g_last_error = ex.what();
        return BSK_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return BSK_ERR_INTERNAL;
    }
}

nlohmann::json parse_json(const char* text, const char* what) {
    if (text == nullptr) throw bsk::ConfigError(std::string(what) + ": null JSON");
    return nlohmann::json::parse(text);
}

bsk::s3::GridSpec spec_from_resolution(const int resolution[3]) {
    if (resolution == nullptr) return bsk::s3::GridSpec{};
    return bsk::s3::GridSpec{resolution[0], resolution[1], resolution[2]};
}

}  // namespace

struct bsk_grid {
    bsk::s3::GridS3 grid;
};

struct bsk_map {
    bsk::maps::MapS3 map;
};

extern "C" {

const char* bsk_version(void) { return "bskyrme 1.0.0"; }

const char* bsk_last_error(void) { return g_last_error.c_str(); }

void bsk_string_free(char* s) { std::free(s); }

bsk_status bsk_set_threads(int n) {
    bsk::set_max_threads(n);
    return BSK_OK;
}

bsk_status bsk_grid_create(int n_s, int n_theta, int n_psi, bsk_grid** out) {
    if (out == nullptr) {
        g_last_error = "bsk_grid_create: out is null";
        return BSK_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] { *out = new bsk_grid{bsk::s3::GridS3(n_s, n_theta, n_psi)}; });
}

void bsk_grid_destroy(bsk_grid* grid) { delete grid; }

int64_t bsk_grid_node_count(const bsk_grid* grid) {
    return grid ? static_cast<int64_t>(grid->grid.size()) : 0;
}

double bsk_grid_weight_sum(const bsk_grid* grid) {
    return grid ? grid->grid.weight_sum() : 0.0;
}

bsk_status bsk_map_create(const char* spec_json, bsk_map** out) {
    if (out == nullptr) {
        g_last_error = "bsk_map_create: out is null";
        return BSK_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        *out = new bsk_map{bsk::reports::map_from_json(parse_json(spec_json, "map spec"))};
    });
}

void bsk_map_destroy(bsk_map* map) { delete map; }

bsk_status bsk_map_eval(const bsk_map* map, const double p[4], double out[4]) {
    if (map == nullptr || p == nullptr || out == nullptr) {
        g_last_error = "bsk_map_eval: null argument";
        return BSK_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const bsk::s3::Point4 q = map->map.eval(bsk::s3::Point4(p[0], p[1], p[2], p[3]));
        for (int i = 0; i < 4; ++i) out[i] = q.x[i];
    });
}

bsk_status bsk_energy_report(const char* map_json, const char* coupling_json,
                             const int resolution[3], char** json_out) {
    if (json_out == nullptr) return BSK_ERR_INVALID_ARGUMENT;
    *json_out = nullptr;
    return guarded([&] {
        const auto rep = bsk::reports::energy_report(parse_json(map_json, "map spec"),
                                                     parse_json(coupling_json, "coupling spec"),
                                                     spec_from_resolution(resolution));
        *json_out = dup_string(rep.dump());
    });
}

bsk_status bsk_check_report(const char* map_json, const char* coupling_json,
                            const int resolution[3], char** json_out) {
    if (json_out == nullptr) return BSK_ERR_INVALID_ARGUMENT;
    *json_out = nullptr;
    return guarded([&] {
        const auto rep = bsk::reports::check_report(parse_json(map_json, "map spec"),
                                                    parse_json(coupling_json, "coupling spec"),
                                                    spec_from_resolution(resolution));
        *json_out = dup_string(rep.dump());
    });
}

bsk_status bsk_spectrum_report(int max_degree, double tol, char** json_out) {
    if (json_out == nullptr) return BSK_ERR_INVALID_ARGUMENT;
    *json_out = nullptr;
    return guarded([&] {
        const auto rep = bsk::reports::spectrum_report(max_degree, tol > 0 ? tol : 1e-9);
        *json_out = dup_string(rep.dump());
    });
}

bsk_status bsk_flow_run(const char* config_json, char** json_out) {
    if (json_out == nullptr) return BSK_ERR_INVALID_ARGUMENT;
    *json_out = nullptr;
    return guarded([&] {
        const auto rep = bsk::reports::flow_report(parse_json(config_json, "flow config"));
        *json_out = dup_string(rep.dump());
    });
}

bsk_status bsk_convergence_report(const char* map_json, const char* coupling_json,
                                  const int base_resolution[3], char** json_out) {
    if (json_out == nullptr) return BSK_ERR_INVALID_ARGUMENT;
    *json_out = nullptr;
    return guarded([&] {
        const auto rep = bsk::reports::convergence_report(
            parse_json(map_json, "map spec"), parse_json(coupling_json, "coupling spec"),
            base_resolution ? spec_from_resolution(base_resolution)
                            : bsk::s3::GridSpec{16, 12, 12});
        *json_out = dup_string(rep.dump());
    });
}

bsk_status bsk_selftest(char** json_out, int* all_pass) {
    if (json_out == nullptr) return BSK_ERR_INVALID_ARGUMENT;
    *json_out = nullptr;
    return guarded([&] {
        const auto rep = bsk::reports::selftest_report();
        if (all_pass) *all_pass = rep.at("all_pass").get<bool>() ? 1 : 0;
        *json_out = dup_string(rep.dump());
    });
}

}  // extern "C"

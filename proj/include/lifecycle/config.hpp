#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lifecycle/calibration.hpp"
#include "lifecycle/gompertz.hpp"
#include "lifecycle/hjb.hpp"
#include "lifecycle/mc.hpp"

namespace lifecycle {

// Flat ini-style run configuration. Every knob the CLI honours lives here;
// parse and serialize share one field table so the round trip is exact.
struct RunConfig {
    // [mortality]
    double x = 65.0;
    double m = 89.335;
    double b = 9.5;
    double horizon = 55.0;

    // [dfm]
    double dfm_r = 0.025;
    double dfm_rho = 0.025;
    double dfm_f0 = 100.0;
    double dfm_pi0 = 0.0;
    std::vector<double> dfm_gammas{4.0, 8.0};
    double dfm_path_step = 1.0;

    // [table2]
    double t2_r = 0.02;
    double t2_horizon = 30.0;
    std::vector<double> t2_gammas{0.5, 1.0, 1.5, 3.0, 5.0, 10.0};
    std::vector<double> t2_sigmas{0.0, 0.15, 0.25};

    // [calibration]
    std::vector<double> calib_sigmas{0.15, 0.25};
    int calib_nodes = 3200;
    int calib_steps_per_year = 2920;
    double calib_floor_ratio = 1e-3;
    double calib_lambda_cap = 20.0;
    double calib_t0 = 1e-3;
    int calib_output_stride = 64;

    // [hjb]
    int hjb_nodes = 1600;
    int hjb_steps_per_year = 365;
    int hjb_store_every = 7;
    int surface_time_stride = 4;
    int surface_node_stride = 16;

    // [mc]
    int mc_paths = 100000;
    int mc_steps_per_year = 52;
    std::uint64_t mc_seed = 20260819;
    bool mc_antithetic = true;
    bool mc_bernoulli_deaths = false;

    GompertzParams gompertz() const { return {x, m, b}; }
    CalibGrid calib_grid() const;
    HjbGrid hjb_grid() const;
    SimConfig sim_config() const;
    void require_valid() const;
};

RunConfig parse_config(const std::string& text, const std::string& where = "<string>");
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& cfg);

}  // namespace lifecycle

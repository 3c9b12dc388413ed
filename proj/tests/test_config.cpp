#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "lifecycle/config.hpp"

using namespace lifecycle;

TEST_CASE("defaults are valid and serialize to every known key") {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.require_valid());
    const std::string text = serialize_config(cfg);
    for (const char* key :
         {"[mortality]", "[dfm]", "[table2]", "[calibration]", "[hjb]", "[mc]", "x = 65",
          "gammas = 0.5,1,1.5,3,5,10", "sigmas = 0,0.15,0.25", "seed = 20260819",
          "antithetic = true", "nodes = 3200", "steps_per_year = 2920"})
        CHECK_MESSAGE(text.find(key) != std::string::npos, "missing: " << key);
}

TEST_CASE("round trip is idempotent") {
    RunConfig cfg;
    cfg.m = 90.25;
    cfg.calib_sigmas = {0.1, 0.2, 0.3};
    cfg.mc_antithetic = false;
    cfg.t2_r = 0.0213;
    const std::string once = serialize_config(cfg);
    const std::string twice = serialize_config(parse_config(once));
    CHECK(once == twice);
    // and a third pass for good measure
    CHECK(serialize_config(parse_config(twice)) == twice);
}

TEST_CASE("overrides, comments and whitespace") {
    const std::string text =
        "# comment line\n"
        "[mortality]\n"
        "  m = 90.5   # trailing comment\n"
        "\n"
        "[mc]\n"
        "paths = 5000\n"
        "antithetic = false\n";
    const RunConfig cfg = parse_config(text);
    CHECK(cfg.m == 90.5);
    CHECK(cfg.mc_paths == 5000);
    CHECK(cfg.mc_antithetic == false);
    // untouched keys keep their defaults
    CHECK(cfg.b == 9.5);
    CHECK(cfg.mc_seed == 20260819);
}

TEST_CASE("list parsing") {
    const RunConfig cfg = parse_config("[table2]\ngammas = 1, 2.5,7\n");
    REQUIRE(cfg.t2_gammas.size() == 3);
    CHECK(cfg.t2_gammas[0] == 1.0);
    CHECK(cfg.t2_gammas[1] == 2.5);
    CHECK(cfg.t2_gammas[2] == 7.0);
}

TEST_CASE("unknown keys, sections and malformed lines are hard errors") {
    CHECK_THROWS_AS(parse_config("[mortality]\nmm = 2\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[nosuch]\nx = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("x = 65\n"), ValidationError);        // key before section
    CHECK_THROWS_AS(parse_config("[mortality]\nx 65\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[mortality\nx = 65\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[mortality]\nx = sixty\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[mc]\nantithetic = yes\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[table2]\ngammas = \n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[mortality]\nx = 65\nx = 66\n"), ValidationError);
}

TEST_CASE("semantic validation happens after parsing") {
    CHECK_THROWS_AS(parse_config("[mortality]\nb = -1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[table2]\nhorizon = 60\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[mc]\npaths = 1\n"), ValidationError);
    CHECK_THROWS_AS(parse_config("[calibration]\nfloor_ratio = 1.5\n"), ValidationError);
}

TEST_CASE("load_config reads files and reports missing ones") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "lifecycle_test_cfg.cfg";
    {
        std::ofstream out(path);
        out << "[dfm]\nr = 0.03\nrho = 0.03\n";
    }
    const RunConfig cfg = load_config(path);
    CHECK(cfg.dfm_r == 0.03);
    fs::remove(path);
    CHECK_THROWS_AS(load_config(path), IoError);
}

TEST_CASE("solver setting helpers mirror the config") {
    RunConfig cfg;
    cfg.calib_nodes = 800;
    cfg.calib_steps_per_year = 730;
    cfg.hjb_nodes = 400;
    cfg.mc_paths = 4000;
    const auto cg = cfg.calib_grid();
    CHECK(cg.nodes == 800);
    CHECK(cg.dt == doctest::Approx(1.0 / 730.0).epsilon(1e-15));
    CHECK(cfg.hjb_grid().nodes == 400);
    CHECK(cfg.sim_config().n_paths == 4000);
    CHECK(cfg.gompertz().lambda0() == doctest::Approx(0.008124502804143447).epsilon(1e-12));
}

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sasatk/config.hpp"
#include "sasatk/errors.hpp"

using namespace sasatk;
using namespace sasatk::config;

TEST_SUITE("config") {
    TEST_CASE("defaults are valid") {
        const auto c = parse("");
        CHECK(c.k_count == 801);
        CHECK(c.t_list == std::vector<double>{20.0, 40.0, 80.0});
        CHECK(c.compare_zetas() == std::vector<double>{1.0});
    }

    TEST_CASE("keys, comments and lists") {
        const auto c = parse(
            "# comment\n"
            "amplitude_scale = 0.7   # trailing\n"
            "k_window = -3, 3\n"
            "  zeta=2\n"
            "zetas = 0.5, 1.5\n"
            "t_list = 1,2 , 4\n"
            "sim_n_modes = 1024\n"
            "ode_tol = 1e-9\n");
        CHECK(c.amplitude_scale == 0.7);
        REQUIRE(c.k_window.has_value());
        CHECK(c.k_window->first == -3.0);
        CHECK(c.zeta == 2.0);
        CHECK(c.compare_zetas() == std::vector<double>{0.5, 1.5});
        CHECK(c.t_list == std::vector<double>{1.0, 2.0, 4.0});
        CHECK(c.sim.n_modes == 1024);
        CHECK(c.tolerances.ode_tol == 1e-9);
        CHECK(table_window(c) == std::make_pair(-3.0, 3.0));
    }

    TEST_CASE("default window follows zeta") {
        const auto c = parse("zeta = 12\nM = 12\n");
        CHECK(table_window(c).second == doctest::Approx(4.0));
    }

    TEST_CASE("invariants") {
        CHECK_THROWS_AS(parse("k_count = 2\n"), ConfigError);
        CHECK_THROWS_AS(parse("t_list = 1, 1\n"), ConfigError);
        CHECK_THROWS_AS(parse("t_list = 2, 1\n"), ConfigError);
        CHECK_THROWS_AS(parse("t_list = -1, 1\n"), ConfigError);
        CHECK_THROWS_AS(parse("ode_tol = 0\n"), ConfigError);
        CHECK_THROWS_AS(parse("quad_tol = -1e-9\n"), ConfigError);
        CHECK_THROWS_AS(parse("budget = nan\n"), ConfigError);
        CHECK_THROWS_AS(parse("k_window = 1, -1\n"), ConfigError);
    }

    TEST_CASE("malformed input") {
        CHECK_THROWS_AS(parse("unknown_key = 1\n"), ConfigError);
        CHECK_THROWS_AS(parse("zeta 1\n"), ConfigError);
        CHECK_THROWS_AS(parse("zeta = \n"), ConfigError);
        CHECK_THROWS_AS(parse("zeta = 1x\n"), ConfigError);
        CHECK_THROWS_AS(parse("k_count = 3.5\n"), ConfigError);
        CHECK_THROWS_AS(parse("k_window = 1\n"), ConfigError);
        CHECK_THROWS_AS(load("/nonexistent/sasatk.cfg"), IoError);
    }

    TEST_CASE("profile paths resolve against the config file") {
        const auto dir = std::filesystem::temp_directory_path() / "sasatk_cfg_test";
        std::filesystem::create_directories(dir);
        const auto prof = scattering::InitialProfile::gaussian(1.0, -12, 12, 241);
        prof.write_csv((dir / "p.csv").string());
        {
            std::ofstream out(dir / "run.cfg");
            out << "profile = p.csv\namplitude_scale = 0.5\n";
        }
        const auto c = load((dir / "run.cfg").string());
        const auto p = make_profile(c);
        CHECK(p.u0[120] == Complex(0.5, 0.0));
        std::filesystem::remove_all(dir);
    }
}

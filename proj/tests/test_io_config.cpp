#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pmqed/config.hpp"
#include "pmqed/io.hpp"
#include "pmqed/scenarios.hpp"

using namespace pmqed;

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("csv writer formats and guards column count") {
    CsvWriter csv({"a", "b"});
    csv.row({fmt_g17(1.5), fmt_g17(2.25)});
    CHECK(csv.content() == "a,b\n1.5,2.25\n");
    CHECK_THROWS_AS(csv.row({"only-one"}), std::invalid_argument);
}

TEST_CASE("config parsing: defaults, comments, overrides") {
    const std::string text = R"(
# resonator geometry
resonator.radius_um = 1.0
emitter.dipole_debye = 100   # strong drive
window.l_max = 12
fieldmap.filter = "anchor"
)";
    ScenarioConfig cfg = parse_config(text, "test.cfg");
    CHECK(cfg.emitter.dipole_debye == 100.0);
    CHECK(cfg.l_max == 12);
    CHECK(cfg.field_filter == "anchor");
    apply_override(cfg, "window.l_max=7");
    CHECK(cfg.l_max == 7);
    cfg.validate();
}

TEST_CASE("unknown keys are rejected with a location") {
    try {
        parse_config("resonator.radius_um = 1\nbogus.key = 3\n", "bad.cfg");
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.cfg:2") != std::string::npos);
        CHECK(msg.find("bogus.key") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("just a line\n"), std::invalid_argument);
    CHECK_THROWS_AS(apply_override(*(new ScenarioConfig), "novalue"), std::invalid_argument);
}

TEST_CASE("invalid enum values fail validation") {
    ScenarioConfig cfg;
    cfg.lamb_convention = "weird";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("config echo covers every bound key") {
    ScenarioConfig cfg;
    const auto echo = config_echo(cfg);
    bool saw_radius = false, saw_branch = false;
    for (const auto& [k, v] : echo) {
        if (k == "resonator.radius_um") saw_radius = true;
        if (k == "pseudomode.branch") saw_branch = true;
    }
    CHECK(saw_radius);
    CHECK(saw_branch);
}

TEST_CASE("scenario output is deterministic: two runs hash identically") {
    ScenarioConfig cfg;
    cfg.l_max = 3;
    cfg.spectrum_k_min = 3.5;
    cfg.spectrum_k_max = 3.6;
    cfg.spectrum_dk = 0.01;
    auto run_once = [&](const std::string& dir) {
        ScenarioConfig c = cfg;
        c.output_dir = dir;
        run_scenario(c, "spectrum");
        std::ifstream f(std::filesystem::path(dir) / "spectrum.csv", std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return sha256_hex(ss.str());
    };
    const std::string h1 = run_once("test_out_a");
    const std::string h2 = run_once("test_out_b");
    CHECK(h1 == h2);
    std::filesystem::remove_all("test_out_a");
    std::filesystem::remove_all("test_out_b");
}

TEST_CASE("pole catalog scenario writes the expected formats") {
    ScenarioConfig cfg;
    cfg.l_max = 2;
    cfg.re_max = 6.0;
    cfg.im_min = -1.0;
    cfg.output_dir = "test_out_poles";
    run_scenario(cfg, "poles");
    std::ifstream f("test_out_poles/poles.csv");
    std::string header;
    std::getline(f, header);
    CHECK(header == "l,n,re_z,im_z,residual");
    std::ifstream m("test_out_poles/manifest.json");
    std::stringstream ss;
    ss << m.rdbuf();
    CHECK(ss.str().find("\"scenario\": \"poles\"") != std::string::npos);
    CHECK(ss.str().find("resonator.radius_um") != std::string::npos);
    std::filesystem::remove_all("test_out_poles");
}

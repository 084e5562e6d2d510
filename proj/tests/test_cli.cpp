#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cavityspec/cli.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cli = cavityspec::cli;
using nlohmann::json;

namespace {

struct RunResult {
    int code = 0;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    RunResult r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line))
        v.push_back(line);
    return v;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> v;
    std::istringstream in(line);
    std::string f;
    while (std::getline(in, f, ','))
        v.push_back(f);
    return v;
}

// writes a throwaway config file and removes it on scope exit
struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name, const std::string& content) {
        path = std::filesystem::temp_directory_path() / name;
        std::ofstream f(path);
        f << content;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

} // namespace

TEST_CASE("spectrum: hard-wall free disc matches the Bessel anchors") {
    auto r = run({"spectrum", "--model", "disc-free", "--R", "1", "--gamma",
                  "dirichlet", "--m", "0", "--count", "2"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 3);
    auto row0 = fields(ls[1]);
    auto row1 = fields(ls[2]);
    REQUIRE(row0.size() == 8);
    CHECK(std::abs(std::stod(row0[3]) - 2.404825557695773) <= 1e-9);
    CHECK(std::abs(std::stod(row1[3]) - 5.520078110286311) <= 1e-9);
    CHECK(row0[0] == "disc_free");
    CHECK(row0[6] == "dirichlet");
    CHECK(row0[5] == "half_inv_MR2");
}

TEST_CASE("spectrum: published box and disc rows") {
    auto box = run({"spectrum", "--model", "sho1d", "--L", "5", "--gamma",
                    "-1.8735", "--parity", "even", "--count", "1"});
    REQUIRE(box.code == 0);
    auto brow = fields(lines(box.out)[1]);
    CHECK(std::abs(std::stod(brow[4]) - 0.4038) <= 1e-3);

    auto disc = run({"spectrum", "--model", "disc-iso", "--R", "2.5",
                     "--gamma", "-1.5504", "--m", "0", "--count", "1"});
    REQUIRE(disc.code == 0);
    auto drow = fields(lines(disc.out)[1]);
    CHECK(std::abs(std::stod(drow[4]) - 0.6804) <= 1e-3);
}

TEST_CASE("spectrum: csv schema, determinism, signed bound levels") {
    std::vector<std::string> args = {"spectrum", "--model", "disc-free",
                                     "--R",      "1",       "--gamma",
                                     "-3",       "--m",     "0",
                                     "--count",  "2"};
    auto a = run(args);
    auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out); // byte-identical reruns
    auto ls = lines(a.out);
    CHECK(ls[0] == "model,sector,index,spectral,energy,energy_unit,gamma,size");
    // the wall-bound level carries a negative spectral coordinate
    auto row = fields(ls[1]);
    CHECK(row[3] == "-3.55484788878");
    CHECK(std::stod(row[4]) < 0.0);
    // the next level is an ordinary interior mode
    CHECK(std::stod(fields(ls[2])[3]) > 0.0);
}

TEST_CASE("spectrum: json output parses and re-parses stably") {
    auto r = run({"spectrum", "--model", "sho1d", "--L", "5", "--gamma",
                  "dirichlet", "--parity", "even", "--count", "2", "--format",
                  "json"});
    REQUIRE(r.code == 0);
    json arr = json::parse(r.out);
    REQUIRE(arr.is_array());
    REQUIRE(arr.size() == 2);
    CHECK(arr[0]["gamma"] == "dirichlet");
    CHECK(arr[0]["model"] == "sho1d");
    CHECK(arr[0]["sector"] == "even");
    // serialize -> parse -> serialize is a fixed point
    std::string dumped = arr.dump(2) + "\n";
    CHECK(dumped == r.out);
    // energies are real and ordered
    double e0 = arr[0]["energy"].get<double>();
    double e1 = arr[1]["energy"].get<double>();
    CHECK(e0 < e1);
}

TEST_CASE("scan: schema, inclusive endpoints, spectrum consistency") {
    auto r = run({"scan", "--model", "disc-free", "--R", "1", "--m", "0",
                  "--count", "1", "--points", "3", "--u-min", "-1.55",
                  "--u-max", "1.55"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    CHECK(ls[0] == "u,gamma,branch,spectral,energy,warning");
    REQUIRE(ls.size() == 4);
    auto first = fields(ls[1]);
    auto last = fields(ls[3]);
    CHECK(std::stod(first[0]) == -1.55);
    CHECK(std::stod(last[0]) == 1.55);

    // a user-given endpoint reproduces the fixed-coupling solver exactly
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", std::tan(1.55));
    auto sp = run({"spectrum", "--model", "disc-free", "--R", "1", "--m", "0",
                   "--count", "1", "--gamma", buf});
    REQUIRE(sp.code == 0);
    auto sprow = fields(lines(sp.out)[1]);
    CHECK(last[3] == sprow[3]); // spectral, string-identical
    CHECK(last[4] == sprow[4]); // energy
}

TEST_CASE("scan: box branches are nondecreasing along the sweep") {
    auto r = run({"scan", "--model", "sho1d", "--L", "5", "--parity", "even",
                  "--count", "2", "--points", "21"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    double prev[2] = {-1e9, -1e9};
    for (std::size_t i = 1; i < ls.size(); ++i) {
        auto f = fields(ls[i]);
        int branch = std::stoi(f[2]);
        REQUIRE(branch >= 0);
        REQUIRE(branch <= 1);
        double e = std::stod(f[4]);
        CHECK(e >= prev[branch] - 1e-10);
        prev[branch] = e;
    }
}

TEST_CASE("scan: svg carries the fixed frame and dotted references") {
    auto r = run({"scan", "--model", "sho1d", "--L", "5", "--parity", "even",
                  "--count", "2", "--points", "5", "--format", "svg"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("<svg") != std::string::npos);
    CHECK(r.out.find("width=\"800\" height=\"600\"") != std::string::npos);
    CHECK(r.out.find("stroke-dasharray") != std::string::npos);
    CHECK(r.out.find("</svg>") != std::string::npos);
}

TEST_CASE("resonance: disc minimum lands between the published rows") {
    auto r = run({"resonance", "--model", "disc-iso", "--R", "2.5", "--m",
                  "0", "--points", "41"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    CHECK(ls[0] == "gamma_star,gap,spectral,energy");
    auto row = fields(ls[1]);
    double gstar = std::stod(row[0]);
    double gap = std::stod(row[1]);
    CHECK(gstar > -2.0);
    CHECK(gstar < -1.0);
    CHECK(gap > 0.0);
}

TEST_CASE("resonance: mixed sector pair is rejected") {
    auto r = run({"resonance", "--model", "sho1d", "--L", "5", "--sector-a",
                  "even", "--sector-b", "odd", "--points", "11"});
    CHECK(r.code == 2);
    CHECK(r.err.find("invalid configuration") != std::string::npos);
    CHECK(r.err.find("symmetry sector") != std::string::npos);
}

TEST_CASE("verify-tables: all sixteen rows verify") {
    auto r = run({"verify-tables"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 17);
    CHECK(ls[0] ==
          "table,size,gamma,nu_ref,nu,dnu,energy_ref,energy,denergy,pass");
    int box = 0, disc = 0;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        auto f = fields(ls[i]);
        REQUIRE(f.size() == 10);
        CHECK(f[9] == "1");
        (f[0] == "box" ? box : disc)++;
    }
    CHECK(box == 8);
    CHECK(disc == 8);

    // csv is the only format this report knows
    CHECK(run({"verify-tables", "--format", "json"}).code == 2);
}

TEST_CASE("uncertainty: zero-mode saturation flags") {
    auto flat = run({"uncertainty", "--model", "disc-free", "--R", "2",
                     "--gamma", "0", "--m", "0"});
    REQUIRE(flat.code == 0);
    json j = json::parse(flat.out);
    CHECK(j["satisfied"] == true);
    CHECK(j["saturated"] == true);
    CHECK(j["lhs"].get<double>() == 0.0);
    CHECK(j["energy"].get<double>() == 0.0);

    auto m2 = run({"uncertainty", "--model", "disc-free", "--R", "2",
                   "--gamma", "-1", "--m", "2"});
    REQUIRE(m2.code == 0);
    json k = json::parse(m2.out);
    CHECK(k["satisfied"] == true);
    CHECK(k["saturated"] == false);
    CHECK(std::abs(k["rhs"].get<double>() + 5.0 / 3.0) <= 1e-9);
    CHECK(k["moments"]["mean_nx"].get<double>() == 6.0);

    // json is the only format the audit emits
    CHECK(run({"uncertainty", "--model", "disc-free", "--R", "2", "--gamma",
               "0", "--m", "0", "--format", "csv"})
              .code == 2);
}

TEST_CASE("uncertainty: hard-wall box recovers the plain floor") {
    auto r = run({"uncertainty", "--model", "sho1d", "--L", "12", "--gamma",
                  "dirichlet", "--parity", "even", "--index", "0"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["gamma"] == "dirichlet");
    CHECK(std::abs(j["lhs"].get<double>() - 1.0) <= 1e-9);
    CHECK(std::abs(j["rhs"].get<double>() - 0.5) <= 1e-6);
    double dx = j["moments"]["delta_x"].get<double>();
    CHECK(std::abs(dx - std::sqrt(0.5)) <= 1e-6);
    CHECK(j["satisfied"] == true);
}

TEST_CASE("wavefunction: symmetry zeros and sample schema") {
    auto odd = run({"wavefunction", "--model", "sho1d", "--L", "5", "--gamma",
                    "0", "--parity", "odd", "--index", "0", "--samples",
                    "65"});
    REQUIRE(odd.code == 0);
    auto ls = lines(odd.out);
    CHECK(ls[0] == "coord,amplitude,density");
    REQUIRE(ls.size() == 66);
    auto mid = fields(ls[33]); // x = 0 sits in the middle of 65 samples
    CHECK(std::stod(mid[0]) == 0.0);
    CHECK(std::stod(mid[1]) == 0.0);

    auto iso = run({"wavefunction", "--model", "disc-iso", "--R", "2",
                    "--gamma", "1", "--m", "1", "--index", "0", "--samples",
                    "64"});
    REQUIRE(iso.code == 0);
    auto first = fields(lines(iso.out)[1]);
    CHECK(std::stod(first[0]) == 0.0);
    CHECK(std::stod(first[1]) == 0.0);

    auto svg = run({"wavefunction", "--model", "sho1d", "--L", "5", "--gamma",
                    "0", "--parity", "even", "--count", "2", "--format",
                    "svg"});
    REQUIRE(svg.code == 0);
    CHECK(svg.out.find("<svg") != std::string::npos);
}

TEST_CASE("config file supplies flags; command line wins") {
    TempFile cfg("cavityspec_test_cfg_a.conf",
                 "gamma = -1.8735\ncount = 1\n# trailing comment\n");
    auto viacfg = run({"spectrum", "--model", "sho1d", "--L", "5", "--parity",
                       "even", "--config", cfg.path.string()});
    REQUIRE(viacfg.code == 0);
    auto row = fields(lines(viacfg.out)[1]);
    CHECK(row[6] == "-1.8735");
    CHECK(std::abs(std::stod(row[4]) - 0.4038) <= 1e-3);

    // an explicit flag overrides the file's value for the same key
    auto flagwins = run({"spectrum", "--model", "sho1d", "--L", "5",
                         "--parity", "even", "--config", cfg.path.string(),
                         "--gamma", "0"});
    REQUIRE(flagwins.code == 0);
    CHECK(fields(lines(flagwins.out)[1])[6] == "0");

    // unreadable path and malformed lines are configuration errors
    CHECK(run({"spectrum", "--model", "sho1d", "--L", "5", "--parity", "even",
               "--gamma", "0", "--config", "/does/not/exist.conf"})
              .code == 2);
    TempFile bad("cavityspec_test_cfg_b.conf", "nodes\n");
    CHECK(run({"spectrum", "--model", "sho1d", "--L", "5", "--parity", "even",
               "--gamma", "0", "--config", bad.path.string()})
              .code == 2);
}

TEST_CASE("environment node count: reachable, below flags and config") {
    setenv("CAVITYSPEC_QUAD_NODES", "1", 1);
    // the env value reaches the option: 1 fails the [2, 512] check
    auto env = run({"uncertainty", "--model", "disc-free", "--R", "2",
                    "--gamma", "0", "--m", "0"});
    CHECK(env.code == 2);
    CHECK(env.err.find("--nodes") != std::string::npos);

    // an explicit flag out-ranks the environment
    CHECK(run({"uncertainty", "--model", "disc-free", "--R", "2", "--gamma",
               "0", "--m", "0", "--nodes", "128"})
              .code == 0);

    // so does a config file entry
    TempFile cfg("cavityspec_test_cfg_c.conf", "nodes = 128\n");
    CHECK(run({"uncertainty", "--model", "disc-free", "--R", "2", "--gamma",
               "0", "--m", "0", "--config", cfg.path.string()})
              .code == 0);
    unsetenv("CAVITYSPEC_QUAD_NODES");
}

TEST_CASE("exit codes for rejected configurations") {
    auto bad = run({"spectrum", "--model", "box", "--L", "5", "--gamma", "0"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("invalid configuration:") != std::string::npos);

    CHECK(run({}).code == 2);                       // no subcommand
    CHECK(run({"--help"}).code == 0);               // help is a success
    CHECK(run({"spectrum", "--model", "sho1d", "--L", "5", "--gamma", "0",
               "--count", "0"})
              .code == 2);                          // count below range
    CHECK(run({"scan", "--model", "sho1d", "--L", "5", "--parity", "even",
               "--u-min", "-1.0"})
              .code == 2);                          // half a u range
    CHECK(run({"resonance", "--model", "sho1d", "--L", "5", "--level-a", "1",
               "--level-b", "1", "--points", "11"})
              .code == 2);                          // identical levels

    // a level outside the search window is a solver failure, not config
    CHECK(run({"uncertainty", "--model", "sho1d", "--L", "1", "--gamma", "0",
               "--parity", "even", "--index", "5"})
              .code == 3);
}

TEST_CASE("output lands in a file when asked") {
    auto direct = run({"spectrum", "--model", "disc-free", "--R", "1",
                       "--gamma", "dirichlet", "--m", "0", "--count", "2"});
    auto path = std::filesystem::temp_directory_path() /
                "cavityspec_test_out.csv";
    auto filed = run({"spectrum", "--model", "disc-free", "--R", "1",
                      "--gamma", "dirichlet", "--m", "0", "--count", "2",
                      "--output", path.string()});
    REQUIRE(filed.code == 0);
    CHECK(filed.out.empty());
    std::ifstream f(path);
    std::stringstream got;
    got << f.rdbuf();
    CHECK(got.str() == direct.out);
    std::filesystem::remove(path);

    CHECK(run({"spectrum", "--model", "disc-free", "--R", "1", "--gamma",
               "dirichlet", "--m", "0", "--output",
               "/no/such/dir/out.csv"})
              .code == 2);
}

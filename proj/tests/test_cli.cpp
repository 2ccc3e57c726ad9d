#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "pspec/matrix_market.hpp"
#include "test_support.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pspec;
using namespace pspec::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string g_cli;

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / ("pspec_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        write_matrix_market((dir / "p1_A.mtx").string(), example_p1().A);
        write_matrix_market((dir / "p1_E.mtx").string(), example_p1().E);
        write_matrix_market((dir / "p2_A.mtx").string(), example_p2().A);
        Matrix T1(3, 3), T2(3, 3);
        T1 << Complex(1), Complex(-4), Complex(16),
              Complex(0), Complex(1),  Complex(-1),
              Complex(0), Complex(0),  Complex(1);
        T2 << Complex(1), Complex(-10), Complex(0),
              Complex(0), Complex(1),   Complex(0),
              Complex(0), Complex(0),   Complex(1);
        write_matrix_market((dir / "T1.mtx").string(), T1);
        write_matrix_market((dir / "T2.mtx").string(), T2);
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(const Workspace& ws, const std::string& args, const std::string& log = "cli.log") {
    const std::string cmd = g_cli + " " + args + " > " + ws.file(log) + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(bool(in));
    return json::parse(in);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("cli decompose: P1 spectrum, d, and index") {
    Workspace ws;
    const int rc = run_cli(ws, "decompose --A " + ws.file("p1_A.mtx") + " --E " +
                                   ws.file("p1_E.mtx") + " --out " + ws.file("out"));
    CHECK(rc == 0);
    const json j = load_json(ws.file("out/decompose.json"));
    CHECK(j["d"] == 1);
    CHECK(j["index"] == 1);
    REQUIRE(j["finite_eigenvalues"].size() == 2);
    for (const auto& e : j["finite_eigenvalues"]) {
        CHECK(std::abs(e[0].get<double>() + 1.0) < 1e-10);
        CHECK(std::abs(e[1].get<double>()) < 1e-10);
    }
    CHECK(j["residuals"]["reconstruction"].get<double>() < 1e-12);
}

TEST_CASE("cli kreiss: P1 lands in the paper's bracket") {
    Workspace ws;
    const int rc = run_cli(ws, "kreiss --A " + ws.file("p1_A.mtx") + " --E " +
                                   ws.file("p1_E.mtx") + " --out " + ws.file("outk"));
    CHECK(rc == 0);
    const json j = load_json(ws.file("outk/kreiss.json"));
    const double K = j["kreiss"].get<double>();
    CHECK(K > 2.5);
    CHECK(K < 3.5);
}

TEST_CASE("cli compare: dae invariant, legacy divergent") {
    Workspace ws;
    const int rc = run_cli(ws, "compare --A " + ws.file("p1_A.mtx") + " --E " +
                                   ws.file("p1_E.mtx") + " --T " + ws.file("T1.mtx") +
                                   " --T " + ws.file("T2.mtx") +
                                   " --grid -3,1,-2,2,41,41 --out " + ws.file("outc"));
    CHECK(rc == 0);
    const json j = load_json(ws.file("outc/compare.json"));
    CHECK(j["dae_fields_identical"] == true);
    CHECK(j["dae_max_rel_diff"].get<double>() < 1e-8);
    CHECK(j["gen1_fields_divergent"] == true);
    CHECK(j["gen1_max_ratio"].get<double>() > 10.0);
    CHECK(fs::exists(ws.file("outc/field_dae_original.csv")));
    CHECK(fs::exists(ws.file("outc/field_gen1_T2.csv")));
}

TEST_CASE("cli determinism: identical runs produce byte-identical outputs") {
    Workspace ws;
    const std::string args = "grid --A " + ws.file("p1_A.mtx") + " --E " +
                             ws.file("p1_E.mtx") + " --grid -3,1,-2,2,31,31 --eps 1,0.1";
    CHECK(run_cli(ws, args + " --out " + ws.file("run1")) == 0);
    CHECK(run_cli(ws, args + " --out " + ws.file("run2")) == 0);
    CHECK(slurp(ws.file("run1/field.csv")) == slurp(ws.file("run2/field.csv")));
    // JSON differs only in the echoed out-directory; compare with it patched.
    json a = load_json(ws.file("run1/grid.json"));
    json b = load_json(ws.file("run2/grid.json"));
    a["config"]["out"] = b["config"]["out"] = "";
    CHECK(a.dump() == b.dump());
}

TEST_CASE("cli config: canonical echo round-trips byte-identically") {
    Workspace ws;
    CHECK(run_cli(ws, "abscissa --A " + ws.file("p1_A.mtx") + " --E " +
                          ws.file("p1_E.mtx") + " --eps 1,0.5 --out " + ws.file("outa")) ==
          0);
    const json j = load_json(ws.file("outa/abscissa.json"));
    const std::string canonical = j["config"].dump(2);

    // feed the echoed config back in; flags only name the config file
    std::ofstream(ws.file("echo.json")) << canonical << "\n";
    CHECK(run_cli(ws, "abscissa --config " + ws.file("echo.json")) == 0);
    const json j2 = load_json(ws.file("outa/abscissa.json"));
    CHECK(j2["config"].dump(2) == canonical);
    CHECK(j2.dump() == j.dump());
}

TEST_CASE("cli exit codes: 2 for input problems, 3 for numerical ones") {
    Workspace ws;
    CHECK(run_cli(ws, "decompose --A " + ws.file("nope.mtx") + " --E " +
                          ws.file("p1_E.mtx")) == 2);
    // singular pencil: A = E = diag(1,1,0)
    CHECK(run_cli(ws, "decompose --A " + ws.file("p1_E.mtx") + " --E " +
                          ws.file("p1_E.mtx") + " --out " + ws.file("outx")) == 3);
    // the failure emits a JSON error document on stdout
    const std::string log = slurp(ws.file("cli.log"));
    CHECK(log.find("\"error\"") != std::string::npos);
    CHECK(log.find("\"numerical\"") != std::string::npos);
}

TEST_CASE("cli gen-saddle + project: generated pencil feeds the projector") {
    Workspace ws;
    CHECK(run_cli(ws, "gen-saddle --nv 12 --np 4 --seed 3 --out " + ws.file("saddle")) == 0);
    CHECK(fs::exists(ws.file("saddle/A.mtx")));
    CHECK(fs::exists(ws.file("saddle/E.mtx")));
    const json meta = load_json(ws.file("saddle/gen-saddle.json"));
    CHECK(meta["expected_d"] == 8);

    CHECK(run_cli(ws, "decompose --A " + ws.file("saddle/A.mtx") + " --E " +
                          ws.file("saddle/E.mtx") + " --mu 0.25 --out " +
                          ws.file("saddle_dec")) == 0);
    const json dec = load_json(ws.file("saddle_dec/decompose.json"));
    CHECK(dec["d"] == 8);
    CHECK(dec["index"] == 2);

    CHECK(run_cli(ws, "project --A " + ws.file("saddle/A.mtx") + " --E " +
                          ws.file("saddle/E.mtx") +
                          " --mu 0.25 --k 4 --grid -2,0.5,-1,1,21,21 --eps 0.5,0.1 "
                          "--out " +
                          ws.file("proj")) == 0);
    const json pj = load_json(ws.file("proj/project.json"));
    CHECK(pj["k"] == 4);
    CHECK(pj["converged"] == true);
    for (const auto& r : pj["residuals"]) CHECK(r.get<double>() < 1e-6);
    CHECK(fs::exists(ws.file("proj/interior_field.csv")));
}

TEST_CASE("cli transient and bounds run on P2 with SVG output") {
    Workspace ws;
    CHECK(run_cli(ws, "transient --A " + ws.file("p2_A.mtx") + " --E " +
                          ws.file("p1_E.mtx") + " --tmax 10 --nt 101 --eps 1,0.5 --out " +
                          ws.file("outt")) == 0);
    const json t = load_json(ws.file("outt/transient.json"));
    CHECK(t["peak"].get<double>() >= 1.0);
    CHECK(t["worst_initial_condition"].size() == 3);

    CHECK(run_cli(ws, "bounds --A " + ws.file("p2_A.mtx") + " --E " + ws.file("p1_E.mtx") +
                          " --grid -8,4,-12,12,151,151 --eps 1 --tmax 10 --nt 51 "
                          "--format csv,json,svg --out " +
                          ws.file("outb")) == 0);
    const json b = load_json(ws.file("outb/bounds.json"));
    CHECK(b["kreiss"].get<double>() >= 1.0);
    CHECK(fs::exists(ws.file("outb/bounds.csv")));

    CHECK(run_cli(ws, "nr --A " + ws.file("p2_A.mtx") + " --E " + ws.file("p1_E.mtx") +
                          " --format csv,json,svg --out " + ws.file("outn")) == 0);
    CHECK(fs::exists(ws.file("outn/nr.svg")));
    const json nr = load_json(ws.file("outn/nr.json"));
    CHECK(nr["omega"].get<double>() > 0.0);
}

TEST_CASE("cli discrete: spectral radius and monotone rho_eps on P1") {
    Workspace ws;
    CHECK(run_cli(ws, "discrete --A " + ws.file("p1_A.mtx") + " --E " +
                          ws.file("p1_E.mtx") + " --nt 50 --eps 0.5,0.1 --out " +
                          ws.file("outd")) == 0);
    const json j = load_json(ws.file("outd/discrete.json"));
    CHECK(j["spectral_radius"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
    REQUIRE(j["rho_eps"].size() == 2);
    CHECK(j["rho_eps"][0]["rho_eps"].get<double>() >
          j["rho_eps"][1]["rho_eps"].get<double>());
}

int main(int argc, char** argv) {
    // CMake appends the CLI binary path as the last argument.
    if (argc > 1) {
        g_cli = argv[argc - 1];
        --argc;
    }
    if (g_cli.empty() || !fs::exists(g_cli)) {
        std::fprintf(stderr, "usage: test_cli [doctest args] <path-to-pspec-cli>\n");
        return 1;
    }
    doctest::Context ctx(argc, argv);
    return ctx.run();
}

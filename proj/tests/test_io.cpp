#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mems4/mems4.hpp"
#include "oracles.hpp"

using namespace mems4;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               fs::path("mems4_io_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

std::string slurp(const std::string& p) {
    std::ifstream is(p);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void put(const std::string& p, const std::string& text) {
    std::ofstream os(p);
    os << text;
}

}  // namespace

TEST_CASE("doubles round-trip through their decimal form", "[io]") {
    oracles::Rng rng(99);
    for (int k = 0; k < 200; ++k) {
        double v = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-30, 30));
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("minimal config inherits documented defaults", "[io]") {
    TempDir tmp;
    put(tmp.file("run.cfg"),
        "# minimal scenario\n"
        "model = parabolic\n"
        "lambda = 0.4\n");
    RunConfigFile cfg = parse_config(tmp.file("run.cfg"));
    CHECK(cfg.model == "parabolic");
    CHECK(cfg.lambda == Approx(0.4));
    CHECK(cfg.B == Approx(0.01));
    CHECK(cfg.T == Approx(1.0));
    CHECK(cfg.N == 256);
    CHECK(cfg.dt == Approx(1e-3));
    CHECK(cfg.a == Approx(-1.0));
    CHECK(cfg.b == Approx(1.0));
    CHECK(cfg.u0_kind == InitKind::Zero);
}

TEST_CASE("config errors name the line or the invariant", "[io]") {
    TempDir tmp;
    CHECK_THROWS_AS(parse_config(tmp.file("missing.cfg")), ParseError);

    put(tmp.file("bad_kappa.cfg"), "kappa = 1.5\n");
    CHECK_THROWS_WITH(parse_config(tmp.file("bad_kappa.cfg")),
                      Catch::Matchers::ContainsSubstring("kappa must lie in (0,1)"));

    put(tmp.file("no_eq.cfg"), "model = parabolic\njust some words\n");
    CHECK_THROWS_WITH(parse_config(tmp.file("no_eq.cfg")),
                      Catch::Matchers::ContainsSubstring(":2:"));

    put(tmp.file("bad_val.cfg"), "dt = fast\n");
    CHECK_THROWS_AS(parse_config(tmp.file("bad_val.cfg")), ParseError);

    put(tmp.file("unknown.cfg"), "voltage = 3\n");
    CHECK_THROWS_AS(parse_config(tmp.file("unknown.cfg")), ParseError);

    put(tmp.file("bad_dom.cfg"), "a = 1\nb = -1\n");
    CHECK_THROWS_AS(parse_config(tmp.file("bad_dom.cfg")), ValidationError);
}

TEST_CASE("config lists and quoted strings parse", "[io]") {
    TempDir tmp;
    put(tmp.file("full.cfg"),
        "model = hyperbolic\n"
        "lambda = 2.5\n"
        "N = 128\n"
        "u0_kind = scaled_bump\n"
        "u0_amplitude = -0.05\n"
        "probes = 0.0, 0.5\n"
        "snapshot_times = 0.4, 2.5, 10000\n"
        "output_dir = \"results/run1\"\n");
    RunConfigFile cfg = parse_config(tmp.file("full.cfg"));
    CHECK(cfg.model == "hyperbolic");
    CHECK(cfg.N == 128);
    CHECK(cfg.u0_kind == InitKind::ScaledBump);
    CHECK(cfg.u0_amplitude == Approx(-0.05));
    REQUIRE(cfg.probes.size() == 2);
    CHECK(cfg.probes[1] == Approx(0.5));
    REQUIRE(cfg.snapshot_times.size() == 3);
    CHECK(cfg.snapshot_times[2] == Approx(10000.0));
    CHECK(cfg.output_dir == "results/run1");
}

TEST_CASE("profile CSV round-trips bit-exactly", "[io]") {
    TempDir tmp;
    Grid g = build_grid(-1.0, 1.0, 64);
    oracles::Rng rng(17);
    Field u = rng.field(g.interior_count(), -0.9, 0.9);
    const std::string p = tmp.file("profile.csv");
    write_profile_csv(p, g, u);
    Field back = read_field_csv(p, g.interior_count());
    REQUIRE(back.size() == u.size());
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(back[i] == u[i]);

    CHECK_THROWS_AS(read_field_csv(p, g.interior_count() + 1), ValidationError);
}

TEST_CASE("trajectory CSV is deterministic and schema-stable", "[io]") {
    TempDir tmp;
    Trajectory traj;
    oracles::Rng rng(3);
    for (int k = 0; k < 5; ++k) {
        TrajectorySample s;
        s.t = 0.1 * k;
        s.min_u = rng.uniform(-0.5, 0.0);
        s.u_probe = rng.uniform(-0.5, 0.0);
        s.l2_ut = rng.uniform(0.0, 1.0);
        s.energy = rng.uniform(-1.0, 0.0);
        s.l2_v = s.l2_ut;
        traj.samples.push_back(s);
    }
    const std::string p1 = tmp.file("a.csv");
    const std::string p2 = tmp.file("b.csv");
    write_trajectory_csv(p1, traj);
    write_trajectory_csv(p2, traj);
    CHECK(slurp(p1) == slurp(p2));

    std::istringstream is(slurp(p1));
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,min_u,u_probe,l2_ut,energy,dist_to_steady");

    write_trajectory_csv(p1, traj, /*hyperbolic=*/true);
    std::istringstream is2(slurp(p1));
    std::getline(is2, header);
    CHECK(header == "t,min_u,u_probe,l2_ut,energy,dist_to_steady,l2_v");
}

TEST_CASE("branch CSV tolerates missing stability columns", "[io]") {
    TempDir tmp;
    Branch br;
    SteadySolution a;
    a.lambda = 0.1;
    a.min_value = -0.04;
    a.residual_norm = 1e-12;
    a.smallest_eig = 3.5;
    SteadySolution b;
    b.lambda = 0.2;
    b.min_value = -0.09;
    b.residual_norm = 2e-12;
    br.points = {a, b};  // b has no eigenvalue
    br.points[1].smallest_eig.reset();
    const std::string p = tmp.file("branch.csv");
    write_branch_csv(p, br);
    std::string text = slurp(p);
    CHECK(text.find("lambda,min_psi,residual_norm,smallest_eig\n") == 0);
    CHECK(text.find("3.5") != std::string::npos);
    CHECK(text.find("2e-12,\n") != std::string::npos);
}

TEST_CASE("snapshot filenames embed the time", "[io]") {
    CHECK(snapshot_filename(0.5) == "snap_t0.5.csv");
    CHECK(snapshot_filename(10000.0) == "snap_t10000.csv");
}

TEST_CASE("initial field factory", "[io]") {
    TempDir tmp;
    RunConfigFile cfg;
    Grid g = build_grid(-1.0, 1.0, 64);

    Field z = make_initial_field(cfg, g, InitKind::Zero, 0.0, "");
    CHECK(linf_norm(z) == 0.0);

    Field bump = make_initial_field(cfg, g, InitKind::ScaledBump, -0.05, "");
    CHECK(*std::min_element(bump.begin(), bump.end()) == Approx(-0.05));
    CHECK(bump[g.nearest_node(0.0)] == Approx(-0.05));
    CHECK(std::abs(bump.front()) < 0.01);  // clamped profile near the wall

    const std::string p = tmp.file("u0.csv");
    write_profile_csv(p, g, bump);
    Field back = make_initial_field(cfg, g, InitKind::File, 0.0, p);
    for (std::size_t i = 0; i < bump.size(); ++i) CHECK(back[i] == bump[i]);
}

TEST_CASE("snapshot batch writer places files in the directory", "[io]") {
    TempDir tmp;
    Grid g = build_grid(-1.0, 1.0, 32);
    Trajectory traj;
    traj.snapshots.emplace_back(0.5, Field(g.interior_count(), -0.1));
    traj.snapshots.emplace_back(2.0, Field(g.interior_count(), -0.2));
    write_snapshots(tmp.path.string(), g, traj);
    CHECK(fs::exists(tmp.path / "snap_t0.5.csv"));
    CHECK(fs::exists(tmp.path / "snap_t2.csv"));
}

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sqg/config.hpp"
#include "sqg/csv.hpp"
#include "sqg/error.hpp"
#include "sqg/run.hpp"
#include "sqg/snapshot.hpp"
#include "sqg/sweep.hpp"

using namespace sqg;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"(# small smoke configuration
alpha = 1
N = 32
L = 10
t_end = 2
n_checkpoints = 6
init = two_bump
amplitude = 0.5
center = 1,0
amplitude2 = 0.25
center2 = -1,1
annulus_r_min = 2
kernel_r_max = 200
)";

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("sqg_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

}  // namespace

TEST_CASE("csv formatting and parsing") {
    CHECK(csv::format_double(0.1) == "0.1");
    CHECK(csv::parse_double(csv::format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(csv::parse_double(" +2.5e-3 ") == 2.5e-3);
    CHECK(std::isnan(csv::parse_double("nan")));
    CHECK_THROWS_AS(csv::parse_double("1.5x"), IoError);
    CHECK_THROWS_AS(csv::parse_double(""), IoError);
    const fs::path path = fs::temp_directory_path() / "sqg_test_table.csv";
    {
        csv::Writer w(path, {"a", "b"});
        w.comment("note");
        w.row({1.0, 2.0});
        w.row(std::vector<std::string>{"x", "y"});
        CHECK_THROWS_AS(w.row({1.0}), IoError);
        w.close();
    }
    const auto text = csv::read_text(path);
    CHECK(text.comments == std::vector<std::string>{"note"});
    CHECK(text.rows.size() == 2);
    CHECK(text.rows[1][text.column("b")] == "y");
    CHECK_THROWS_AS(csv::read(path), IoError);
    CHECK_THROWS_AS(text.column("c"), IoError);
    fs::remove(path);
}

TEST_CASE("minimal configuration") {
    const RunConfig c = parse_config_text("alpha = 0.5\nN = 64\nL = 20\nt_end = 10\n");
    CHECK(c.solver.alpha == 0.5);
    CHECK(c.solver.N == 64);
    CHECK(c.solver.checkpoints.size() == 41);
    CHECK(c.solver.checkpoints.back() == 10.0);
    CHECK(c.solver.init.kind == InitKind::gaussian);
    CHECK(c.solver.init.amplitude == 0.01);
    CHECK(c.annulus.r_min == 5.0);
    CHECK(c.annulus.r_max == 10.0);
    CHECK(c.warnings.empty());
    const RunConfig e = parse_config_text("alpha=1\nN=64\nL=20\nt_end=3\ncheckpoints = 1, 2\n");
    CHECK(e.solver.checkpoints == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("configuration errors name the line") {
    try {
        parse_config_text("N = 64\nL = 20\nalhpa = 1\nt_end = 1\n", "run.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("run.cfg:3") != std::string::npos);
        CHECK(what.find("alhpa") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("alpha = 1\nalpha = 1\nN = 64\nL = 20\nt_end = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("N = 64\nL = 20\nt_end = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("alpha = one\nN = 64\nL = 20\nt_end = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("alpha = 1\nN = 64\nL = 20\nt_end = 1\ndealias = yes\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("alpha = 3\nN = 64\nL = 20\nt_end = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("alpha = 1\nN = 63\nL = 20\nt_end = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("alpha = 1\nN = 64\nL = 20\nt_end = 1\ninit = expr\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("alpha = 1\nN = 64\nL = 20\nt_end = 1\nannulus_r_max = 30\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("alpha = 1\nN = 64\nL = 20\nt_end = 1\njunk line\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(fs::temp_directory_path() / "sqg_no_such.cfg"), ConfigError);
}

TEST_CASE("alpha above one warns") {
    const RunConfig c = parse_config_text("alpha = 1.5\nN = 64\nL = 20\nt_end = 1\n");
    REQUIRE(c.warnings.size() == 1);
    CHECK(c.warnings[0].find("alpha=1.5") != std::string::npos);
    const RunConfig quiet = parse_config_text("alpha = 1.5\nN = 64\nL = 20\nt_end = 1\ntheorem_diagnostics = false\n");
    CHECK(quiet.warnings.empty());
}

TEST_CASE("config hash ignores line order and comments") {
    const RunConfig a = parse_config_text("alpha = 1\nN = 64\nL = 20\nt_end = 1\n");
    const RunConfig b = parse_config_text("# same run\nt_end = 1\nL = 20\n\nN = 64\nalpha = 1   # trailing\n");
    const RunConfig c = parse_config_text("alpha = 1\nN = 64\nL = 20\nt_end = 2\n");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a).size() == 16);
    const auto& keys = config_keys();
    CHECK(std::any_of(keys.begin(), keys.end(), [](const auto& k) { return k.first == "kernel_r_max"; }));
}

TEST_CASE("a run writes its artifacts and resumes bit-identically") {
    const RunConfig cfg = parse_config_text(kSmall, "small");
    const fs::path whole = fresh_dir("whole");
    const RunResult full = run(cfg, whole);
    CHECK(full.complete);
    CHECK(full.records.size() == 7);
    CHECK(full.invariants.mass_ok);
    CHECK(full.invariants.l2_ok);
    CHECK(full.invariants.energy_ok);
    CHECK(full.energy.size() == 6);
    for (const char* f : {"manifest.json", "kernel_profile.csv", "diagnostics.csv", "energy.csv"}) {
        CHECK(fs::exists(whole / f));
    }
    const auto m = manifest(whole);
    CHECK(m["status"] == "complete");
    CHECK(m["config_hash"] == config_hash(cfg));
    CHECK(m["snapshots"].size() == 7);
    CHECK(m["suite"]["mass_drift"]["pass"] == true);

    const auto records = read_diagnostics_csv(whole / "diagnostics.csv");
    REQUIRE(records.size() == full.records.size());
    CHECK(records.back().linf == full.records.back().linf);

    // killed after two checkpoints, then resumed
    const fs::path split = fresh_dir("split");
    const RunResult part = run(cfg, split, {.stop_after = 2});
    CHECK_FALSE(part.complete);
    CHECK(manifest(split)["status"] == "incomplete");
    CHECK(manifest(split)["snapshots"].size() == 3);
    const RunResult rest = run(cfg, split);
    CHECK(rest.complete);
    CHECK(slurp(split / "snapshots" / "snap_0006.bin") == slurp(whole / "snapshots" / "snap_0006.bin"));
    CHECK(slurp(split / "diagnostics.csv") == slurp(whole / "diagnostics.csv"));
    CHECK(manifest(split)["steps"] == m["steps"]);

    // a complete run is not integrated again
    const RunResult again = run(cfg, whole);
    CHECK(again.steps == 0);
    CHECK(again.complete);

    // a truncated snapshot is dropped and the run continues from the one before
    fs::resize_file(split / "snapshots" / "snap_0006.bin", 10);
    const auto before = manifest(split);
    nlohmann::json edited = before;
    edited["status"] = "incomplete";
    std::ofstream(split / "manifest.json") << edited.dump();
    const RunResult repaired = run(cfg, split);
    CHECK(repaired.complete);
    CHECK(slurp(split / "snapshots" / "snap_0006.bin") == slurp(whole / "snapshots" / "snap_0006.bin"));

    // a different config starts over
    const RunConfig other = parse_config_text(std::string(kSmall) + "cfl = 0.4\n", "other");
    const RunResult restarted = run(other, split);
    CHECK(restarted.complete);
    CHECK(manifest(split)["config_hash"] == config_hash(other));

    fs::remove_all(whole);
    fs::remove_all(split);
}

TEST_CASE("diagnose recomputes a run's records from snapshots") {
    const RunConfig cfg = parse_config_text(kSmall, "small");
    const fs::path dir = fresh_dir("diagnose");
    const RunResult res = run(cfg, dir);
    const auto profile = read_profile_csv(dir / "kernel_profile.csv");
    const auto records = diagnose(dir / "snapshots", profile, cfg.annulus);
    REQUIRE(records.size() == res.records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].t == res.records[i].t);
        CHECK(records[i].annulus_cancel == res.records[i].annulus_cancel);
    }
    fs::remove_all(dir);
}

TEST_CASE("exponent targets") {
    const auto targets = load_targets();
    REQUIRE(targets.size() == 5);
    CHECK(targets[0].column == "linf");
    CHECK(targets[0].target(1.0) == -2.0);
    CHECK(targets[0].target(0.5) == -4.0);
    CHECK(targets[1].target(1.0) == -4.0);
    CHECK(targets[2].target(0.5) == 1.0);
    CHECK(targets[3].upper_only);
    CHECK(targets[3].accepts(1.0, 1.1));
    CHECK_FALSE(targets[3].accepts(1.0, 1.3));
    CHECK(targets[0].accepts(1.0, -1.75));
    CHECK_FALSE(targets[0].accepts(1.0, -1.65));
    CHECK_FALSE(targets[0].accepts(1.0, NAN));
}

TEST_CASE("sweep") {
    const RunConfig base = parse_config_text(kSmall, "small");
    const fs::path root = fresh_dir("sweep");
    CHECK_THROWS_AS(sweep(std::vector<double>{}, base, root), DomainError);
    CHECK_THROWS_AS(sweep(std::vector<double>{0.5, 1.5}, base, root), DomainError);

    setenv("SQG_THREADS", "2", 1);
    CHECK(sweep_workers(5) <= 2);
    CHECK(sweep_workers(1) == 1);
    const SweepResult res = sweep(std::vector<double>{1.0, 0.5, 1.0}, base, root);
    unsetenv("SQG_THREADS");
    REQUIRE(res.members.size() == 2);
    REQUIRE(res.notices.size() == 1);
    CHECK(res.notices[0].find("duplicate") != std::string::npos);
    for (const auto& m : res.members) {
        CHECK(m.ok);
        CHECK(fs::exists(m.dir / "manifest.json"));
        CHECK(m.exponents.size() == 5);
    }
    CHECK(res.members[1].dir.filename() == "alpha_0.5");
    const auto table = csv::read_text(res.exponents_csv);
    CHECK(table.rows.size() == 2);
    CHECK(table.rows[0][table.column("status")] == "ok");
    CHECK(table.column("linf_decay_target") > 0);
    CHECK(table.rows[1][table.column("linf_decay_target")] == "-4");
    fs::remove_all(root);
}

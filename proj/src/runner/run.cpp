#include "sqg/run.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "sqg/csv.hpp"
#include "sqg/error.hpp"
#include "sqg/fft.hpp"
#include "sqg/snapshot.hpp"
#include "sqg/spectral_ops.hpp"

namespace sqg {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string snapshot_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%04zu.bin", index);
    return buf;
}

void write_json(const fs::path& path, const json& j) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << j.dump(2) << '\n';
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename manifest into place: " + path.string());
}

struct SnapshotEntry {
    double t = 0.0;
    std::string file;
    double dissipation = 0.0;  // over the interval ending at this snapshot
};

void log_line(const RunOptions& o, const std::string& s) {
    if (o.log) *o.log << s << '\n';
}

}  // namespace

KernelProfile profile_for(const RunConfig& config) {
    return build_profile(config.solver.alpha, config.kernel_r_max, config.kernel_tol);
}

void write_diagnostics_csv(const fs::path& path, const std::vector<DiagnosticsRecord>& records) {
    csv::Writer out(path, record_columns());
    for (const auto& r : records) out.row(record_row(r));
    out.close();
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const fs::path& path) {
    const auto table = csv::read(path);
    if (table.header != record_columns()) throw IoError("unexpected diagnostics columns in " + path.string());
    std::vector<DiagnosticsRecord> out;
    for (const auto& row : table.rows) out.push_back(record_from_row(row));
    return out;
}

std::vector<DiagnosticsRecord> diagnose(const fs::path& snapshot_dir, const KernelProfile& profile,
                                        const AnnulusSpec& annulus) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(snapshot_dir)) {
        if (entry.path().extension() == ".bin") files.push_back(entry.path());
    }
    std::vector<Snapshot> snaps;
    for (const auto& f : files) snaps.push_back(read_snapshot(f));
    std::sort(snaps.begin(), snaps.end(), [](const Snapshot& a, const Snapshot& b) { return a.t < b.t; });
    if (snaps.empty() || snaps.front().t != 0.0) {
        throw IoError("snapshot directory needs a t = 0 snapshot: " + snapshot_dir.string());
    }
    for (std::size_t i = 1; i < snaps.size(); ++i) {
        if (snaps[i].t == snaps[i - 1].t) throw IoError("duplicate snapshot time in " + snapshot_dir.string());
        require_same_grid(snaps[i].theta.grid, snaps[0].theta.grid, "diagnose");
    }
    if (snaps.front().alpha != profile.alpha) {
        throw DomainError("kernel profile alpha does not match the snapshots");
    }
    DiagnosticContext ctx;
    ctx.profile = &profile;
    ctx.theta0 = snaps.front().theta;
    ctx.mass = grid_mass(ctx.theta0);
    ctx.annulus = annulus;
    std::vector<DiagnosticsRecord> out;
    for (const auto& s : snaps) out.push_back(compute_record(s.theta, s.t, ctx));
    return out;
}

RunResult run(const RunConfig& config, const fs::path& out_dir, const RunOptions& options) {
    const auto wall_start = std::chrono::steady_clock::now();
    const SolverConfig& sc = config.solver;
    fs::create_directories(out_dir / "snapshots");

    RunResult result;
    result.out_dir = out_dir;
    result.manifest = out_dir / "manifest.json";
    result.hash = config_hash(config);
    for (const auto& w : config.warnings) log_line(options, "warning: " + w);

    const KernelProfile profile = profile_for(config);
    write_profile_csv(profile, out_dir / "kernel_profile.csv");

    const InitialData init = make_initial(config.solver);
    result.mass0 = init.mass;

    // Resume bookkeeping.
    std::vector<SnapshotEntry> done;
    long prior_steps = 0;
    bool already_complete = false;
    if (options.resume && fs::exists(result.manifest)) {
        try {
            std::ifstream in(result.manifest);
            const json m = json::parse(in);
            if (m.at("config_hash") == result.hash) {
                prior_steps = m.value("steps", 0L);
                for (const auto& e : m.at("snapshots")) {
                    SnapshotEntry s{e.at("t"), e.at("file"), e.at("dissipation")};
                    try {
                        if (read_snapshot(out_dir / s.file).t != s.t) break;
                    } catch (const IoError&) {
                        break;
                    }
                    done.push_back(s);
                }
                already_complete = m.at("status") == "complete" && !done.empty() &&
                                   done.back().t == sc.t_end;
            }
        } catch (const std::exception& e) {
            log_line(options, std::string("manifest unusable, starting fresh: ") + e.what());
            done.clear();
            prior_steps = 0;
        }
    }

    const auto manifest_json = [&](const std::string& status) {
        json snaps = json::array();
        for (const auto& s : done) snaps.push_back({{"t", s.t}, {"file", s.file}, {"dissipation", s.dissipation}});
        json j;
        j["config_hash"] = result.hash;
        j["status"] = status;
        j["alpha"] = sc.alpha;
        j["N"] = sc.N;
        j["L"] = sc.L;
        j["mass0"] = init.mass;
        j["steps"] = prior_steps + result.steps;
        j["snapshots"] = snaps;
        j["kernel_profile_csv"] = "kernel_profile.csv";
        j["config"] = config.entries;
        j["warnings"] = config.warnings;
        return j;
    };

    if (done.empty()) {
        for (const auto& entry : fs::directory_iterator(out_dir / "snapshots")) {
            if (entry.path().extension() == ".bin") fs::remove(entry.path());
        }
        write_snapshot(out_dir / "snapshots" / snapshot_name(0), {sc.alpha, 0.0, init.theta});
        done.push_back({0.0, "snapshots/" + snapshot_name(0), 0.0});
        write_json(result.manifest, manifest_json("incomplete"));
    }

    if (!already_complete) {
        const Snapshot last = read_snapshot(out_dir / done.back().file);
        SolverState state = make_state(sc, last.theta, last.t);
        int new_checkpoints = 0;
        for (double tc : sc.checkpoints) {
            if (tc <= state.t) continue;
            if (options.stop_after >= 0 && new_checkpoints >= options.stop_after) {
                result.complete = false;
                result.steps = state.steps;
                result.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
                return result;
            }
            state.dissipation = 0.0;
            const Field theta = advance_to(state, tc);
            const double drift = std::abs(grid_mass(theta) - init.mass);
            if (drift > 1e-10 * std::abs(init.mass) + 1e-14) {
                write_json(result.manifest, manifest_json("incomplete"));
                throw NumericalError("mass invariant violated at t=" + csv::format_double(tc) +
                                     " (drift " + csv::format_double(drift) + ")");
            }
            const std::string file = "snapshots/" + snapshot_name(done.size());
            write_snapshot(out_dir / file, {sc.alpha, tc, theta});
            done.push_back({tc, file, state.dissipation});
            result.steps = state.steps;
            write_json(result.manifest, manifest_json("incomplete"));
            log_line(options, "t=" + csv::format_double(tc) + " steps=" + std::to_string(prior_steps + state.steps));
            ++new_checkpoints;
        }
    }

    // Diagnostics and invariants over all snapshots.
    result.records = diagnose(out_dir / "snapshots", profile, config.annulus);
    write_diagnostics_csv(out_dir / "diagnostics.csv", result.records);

    InvariantSummary& inv = result.invariants;
    std::vector<double> energies;
    for (const auto& s : done) {
        const Snapshot snap = read_snapshot(out_dir / s.file);
        energies.push_back(std::pow(l2_norm(snap.theta), 2));
    }
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        const auto& r = result.records[i];
        const double drift = std::abs(r.mass - init.mass) / std::max(std::abs(init.mass), 1e-300);
        inv.mass_drift = std::max(inv.mass_drift, init.mass == 0.0 ? std::abs(r.mass) : drift);
        if (std::abs(r.mass - init.mass) > 1e-10 * std::abs(init.mass) + 1e-14) inv.mass_ok = false;
        if (i == 0) continue;
        const auto& p = result.records[i - 1];
        if (p.l2 > 0.0) inv.l2_growth = std::max(inv.l2_growth, r.l2 / p.l2 - 1.0);
        if (r.l2 > p.l2 * (1.0 + 1e-8)) inv.l2_ok = false;
        if (p.linf > 0.0) inv.linf_growth = std::max(inv.linf_growth, r.linf / p.linf - 1.0);
        if (r.linf > p.linf * (1.0 + 1e-4)) inv.linf_ok = false;

        IntervalEnergy e;
        e.t0 = done[i - 1].t;
        e.t1 = done[i].t;
        e.energy0 = energies[i - 1];
        e.energy1 = energies[i];
        e.dissipation = done[i].dissipation;
        const double change = e.energy0 - e.energy1;
        e.relative_error = e.dissipation > 0.0 ? std::abs(change - e.dissipation) / e.dissipation
                                               : (change == 0.0 ? 0.0 : INFINITY);
        inv.energy_error = std::max(inv.energy_error, e.relative_error);
        if (e.relative_error > 0.01) inv.energy_ok = false;
        result.energy.push_back(e);
    }
    {
        csv::Writer out(out_dir / "energy.csv",
                        {"t0", "t1", "energy0", "energy1", "dissipation", "relative_error"});
        for (const auto& e : result.energy) {
            out.row({e.t0, e.t1, e.energy0, e.energy1, e.dissipation, e.relative_error});
        }
        out.close();
    }
    if (config.theorem_diagnostics && sc.alpha < 2.0) {
        inv.image = image_budget(profile, sc.L, config.annulus, result.records);
    }

    result.complete = true;
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    json m = manifest_json("complete");
    m["diagnostics_csv"] = "diagnostics.csv";
    m["energy_csv"] = "energy.csv";
    m["wall_seconds"] = result.wall_seconds;
    m["suite"] = {
        {"mass_drift", {{"value", inv.mass_drift}, {"pass", inv.mass_ok}}},
        {"l2_nonincreasing", {{"value", inv.l2_growth}, {"pass", inv.l2_ok}}},
        {"linf_nonamplification", {{"value", inv.linf_growth}, {"pass", inv.linf_ok}}},
        {"energy_balance", {{"value", inv.energy_error}, {"pass", inv.energy_ok}}},
        {"image_budget", {{"value", inv.image.worst_fraction}, {"pass", inv.image.ok}}},
    };
    write_json(result.manifest, m);
    return result;
}

}  // namespace sqg

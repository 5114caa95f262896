// Command-line front end: kernel, solve, diagnose, sweep, verify.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "sqg/config.hpp"
#include "sqg/csv.hpp"
#include "sqg/error.hpp"
#include "sqg/kernel.hpp"
#include "sqg/run.hpp"
#include "sqg/sweep.hpp"
#include "sqg/verify.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    for (auto token : sqg::csv::split(text)) {
        try {
            out.push_back(sqg::csv::parse_double(token));
        } catch (const sqg::IoError&) {
            throw sqg::ConfigError(std::string(what) + ": not a number: '" + std::string(token) + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Far-field asymptotics of the dissipative quasi-geostrophic equation"};
    app.require_subcommand(1);

    double k_alpha = 1.0, k_rmax = 5000.0, k_tol = 1e-10;
    std::string k_out = "kernel_profile.csv";
    auto* kernel = app.add_subcommand("kernel", "Tabulate G_alpha(1, r) and write it as CSV");
    kernel->add_option("--alpha", k_alpha, "Dissipation order in (0, 2]")->required();
    kernel->add_option("--r-max", k_rmax, "Largest tabulated radius")->capture_default_str();
    kernel->add_option("--tol", k_tol, "Relative quadrature tolerance")->capture_default_str();
    kernel->add_option("--out", k_out, "Output CSV")->capture_default_str();

    std::string s_config, s_out;
    bool s_fresh = false;
    auto* solve = app.add_subcommand("solve", "Integrate a configured run (resumes when possible)");
    solve->add_option("--config", s_config, "key = value configuration file")->required()->check(CLI::ExistingFile);
    solve->add_option("--out-dir", s_out, "Run directory")->required();
    solve->add_flag("--fresh", s_fresh, "Ignore an existing manifest");

    std::string d_snaps, d_profile, d_annulus = "5,20", d_out = "diagnostics.csv";
    auto* diagnose = app.add_subcommand("diagnose", "Diagnostics for a directory of snapshots");
    diagnose->add_option("--snapshots", d_snaps, "Directory of snap_*.bin files")->required()->check(CLI::ExistingDirectory);
    diagnose->add_option("--alpha-profile", d_profile, "Kernel profile CSV")->required()->check(CLI::ExistingFile);
    diagnose->add_option("--annulus", d_annulus, "r_min,r_max")->capture_default_str();
    diagnose->add_option("--out", d_out, "Output CSV")->capture_default_str();

    std::string w_alphas, w_config, w_out;
    auto* sweep = app.add_subcommand("sweep", "Run a configuration for several alpha values");
    sweep->add_option("--alphas", w_alphas, "Comma-separated alpha values")->required();
    sweep->add_option("--config", w_config, "Base configuration")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out-dir", w_out, "Output root")->required();

    std::string v_level = "quick", v_work = "verify_work", v_report;
    bool v_fault = false;
    auto* verify = app.add_subcommand("verify", "Run the named contracts and report");
    verify->add_option("level", v_level, "quick or full")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
    verify->add_option("--work-dir", v_work, "Directory for acceptance runs")->capture_default_str();
    verify->add_option("--report", v_report, "Write a JSON report here");
    verify->add_flag("--inject-fault", v_fault, "Perturb the alpha=1 kernel profile by 1e-4");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*kernel) {
            const auto profile = sqg::build_profile(k_alpha, k_rmax, k_tol);
            sqg::write_profile_csv(profile, k_out);
            std::cout << "wrote " << k_out << " (" << profile.radii.size()
                      << " radii, r_star=" << sqg::csv::format_double(profile.r_star) << ")\n";
        } else if (*solve) {
            const auto config = sqg::parse_config(s_config);
            const auto result = sqg::run(config, s_out, {.resume = !s_fresh, .log = &std::cerr});
            const auto& inv = result.invariants;
            std::cout << "run " << result.hash << " complete: " << result.steps << " new steps, "
                      << result.wall_seconds << " s\n"
                      << "mass drift " << inv.mass_drift << (inv.mass_ok ? " ok" : " FAIL") << "\n"
                      << "L2 growth " << inv.l2_growth << (inv.l2_ok ? " ok" : " FAIL") << "\n"
                      << "Linf growth " << inv.linf_growth << (inv.linf_ok ? " ok" : " FAIL") << "\n"
                      << "energy balance " << inv.energy_error << (inv.energy_ok ? " ok" : " FAIL") << "\n"
                      << "image budget " << inv.image.worst_fraction << (inv.image.ok ? " ok" : " FAIL") << "\n";
        } else if (*diagnose) {
            const auto bounds = parse_list(d_annulus, "--annulus");
            if (bounds.size() != 2) throw sqg::ConfigError("--annulus expects r_min,r_max");
            const sqg::AnnulusSpec annulus{bounds[0], bounds[1]};
            const auto profile = sqg::read_profile_csv(d_profile);
            const auto records = sqg::diagnose(d_snaps, profile, annulus);
            sqg::write_diagnostics_csv(d_out, records);
            std::cout << "wrote " << d_out << " (" << records.size() << " checkpoints)\n";
        } else if (*sweep) {
            const auto alphas = parse_list(w_alphas, "--alphas");
            const auto base = sqg::parse_config(w_config);
            const auto result = sqg::sweep(alphas, base, w_out, &std::cerr);
            for (const auto& n : result.notices) std::cout << "notice: " << n << "\n";
            for (const auto& m : result.members) {
                std::cout << "alpha=" << sqg::csv::format_double(m.alpha) << ": "
                          << (m.ok ? "ok" : "failed: " + m.error) << "\n";
                for (const auto& f : m.exponents) {
                    std::cout << "  " << f.target.quantity << " " << f.exponent << " (target "
                              << f.expected << ") " << (f.ok ? "ok" : "off") << "\n";
                }
            }
            std::cout << "wrote " << result.exponents_csv.string() << "\n";
            return result.all_ok() ? 0 : 1;
        } else if (*verify) {
            sqg::VerifyOptions options;
            options.level = v_level == "full" ? sqg::VerifyLevel::full : sqg::VerifyLevel::quick;
            options.work_dir = v_work;
            options.inject_fault = v_fault;
            options.log = &std::cerr;
            const auto report = sqg::verify(options);
            sqg::print_report(report, std::cout);
            if (!v_report.empty()) sqg::write_report_json(report, v_report);
            std::cout << (report.passed() ? "all contracts passed" : "some contracts FAILED") << " ("
                      << report.wall_seconds << " s)\n";
            return report.passed() ? 0 : 1;
        }
    } catch (const sqg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

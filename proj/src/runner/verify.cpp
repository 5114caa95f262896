#include "sqg/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sqg/checks.hpp"
#include "sqg/commutator.hpp"
#include "sqg/config.hpp"
#include "sqg/csv.hpp"
#include "sqg/error.hpp"
#include "sqg/fft.hpp"
#include "sqg/kernel.hpp"
#include "sqg/linear_r2.hpp"
#include "sqg/run.hpp"
#include "sqg/snapshot.hpp"
#include "sqg/solver.hpp"
#include "sqg/spectral_ops.hpp"
#include "sqg/sweep.hpp"

namespace sqg {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

const char* kPoisson = "Kernel-Poisson oracle";
const char* kGaussian = "Kernel-Gaussian oracle";
const char* kTail = "Tail constant";
const char* kSpectral = "Spectral identities";
const char* kCommutator = "Commutator identity";
const char* kLinear = "Solver-vs-kernel linear oracle";
const char* kConservation = "Conservation & dissipation";
const char* kDecay = "Decay exponents";
const char* kLinearFar = "Linear far-field growth";
const char* kNonlinearFar = "Nonlinear far-field growth";
const char* kRatio = "Far-field ratio";
const char* kRemainder = "Remainder and weighted gradient";

class Recorder {
public:
    Recorder(VerifyReport& report, std::ostream* log) : report_(report), log_(log) {}

    void add(const std::string& criterion, const std::string& name, bool passed, double measured,
             double limit, std::string detail = {}) {
        report_.contracts.push_back({name, criterion, passed, measured, limit, std::move(detail)});
        note((passed ? "  ok   " : "  FAIL ") + name + " = " + csv::format_double(measured));
    }

    /// Runs body; an exception fails the named contract instead of the whole report.
    void guard(const std::string& criterion, const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            add(criterion, name, false, NAN, NAN, std::string("exception: ") + e.what());
        }
    }

    void note(const std::string& line) {
        if (log_) *log_ << line << std::endl;
    }

private:
    VerifyReport& report_;
    std::ostream* log_;
};

double relative_gap(double value, double exact) {
    if (exact < 1e-300) return value < 1e-300 ? 0.0 : INFINITY;
    return std::abs(value - exact) / exact;
}

std::vector<double> radii_grid() {
    std::vector<double> r;
    for (int i = 0; i <= 1000; ++i) r.push_back(0.05 * i);
    return r;
}

void check_kernel_oracles(Recorder& rec, const KernelProfile& p1) {
    rec.guard(kPoisson, "kernel.poisson_oracle", [&] {
        double worst = 0.0;
        double worst_t = 0.0, worst_r = 0.0;
        for (double t : {0.5, 1.0, 2.0}) {
            for (double r : radii_grid()) {
                const double exact = t / (2.0 * kPi * std::pow(t * t + r * r, 1.5));
                const double e = relative_gap(kernel_eval_radial(p1, t, r), exact);
                if (e > worst) { worst = e; worst_t = t; worst_r = r; }
            }
        }
        rec.add(kPoisson, "kernel.poisson_oracle", worst <= 1e-6, worst, 1e-6,
                "worst at t=" + csv::format_double(worst_t) + " r=" + csv::format_double(worst_r));
    });
    rec.guard(kGaussian, "kernel.gaussian_oracle", [&] {
        const KernelProfile p2 = build_profile(2.0, 100.0, 1e-10);
        double worst = 0.0;
        for (double t : {0.5, 1.0, 2.0}) {
            for (double r : radii_grid()) {
                const double exact = std::exp(-r * r / (4.0 * t)) / (4.0 * kPi * t);
                worst = std::max(worst, relative_gap(kernel_eval_radial(p2, t, r), exact));
            }
        }
        rec.add(kGaussian, "kernel.gaussian_oracle", worst <= 1e-8, worst, 1e-8);
    });
}

void check_tail(Recorder& rec, const KernelProfile& p, const std::string& tag) {
    rec.guard(kTail, "kernel.tail_constant." + tag, [&] {
        const double r100 = 100.0;
        const double dev = std::abs(tail_limit_check(p, 1.0, std::span(&r100, 1))[0] - 1.0);
        rec.add(kTail, "kernel.tail_constant." + tag, dev <= 0.02, dev, 0.02, "|ratio - 1| at r=100");

        std::vector<double> radii;
        for (int i = 0; i <= 30; ++i) radii.push_back(50.0 * std::pow(4.0, i / 30.0));
        const auto ratios = tail_limit_check(p, 1.0, radii);
        double worst_rise = 0.0;
        for (std::size_t i = 1; i < ratios.size(); ++i) {
            worst_rise = std::max(worst_rise, std::abs(ratios[i] - 1.0) - std::abs(ratios[i - 1] - 1.0));
        }
        rec.add(kTail, "kernel.tail_decreasing." + tag, worst_rise <= 0.0, worst_rise, 0.0,
                "largest increase of |ratio - 1| between neighbouring radii in [50, 200]");
    });
}

void check_spectral(Recorder& rec) {
    const Grid g = make_grid(128, 10.0);
    rec.guard(kSpectral, "spectral.round_trip", [&] {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> normal;
        double round_trip = 0.0, parseval = 0.0;
        for (int s = 0; s < 10; ++s) {
            Field f(g);
            if (s % 2 == 0) {
                for (auto& v : f.data) v = normal(rng);
            } else {
                f = random_bandlimited_field(g, g.N / 3, 100 + s);
            }
            const SpectralField fh = forward(f);
            const Field back = inverse(fh);
            double diff = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < f.data.size(); ++i) {
                diff = std::max(diff, std::abs(back.data[i] - f.data[i]));
                scale = std::max(scale, std::abs(f.data[i]));
            }
            round_trip = std::max(round_trip, diff / scale);
            parseval = std::max(parseval, std::abs(l2_norm(f) - l2_norm(fh)) / l2_norm(f));
        }
        rec.add(kSpectral, "spectral.round_trip", round_trip <= 1e-12, round_trip, 1e-12);
        rec.add(kSpectral, "spectral.parseval", parseval <= 1e-12, parseval, 1e-12);
    });
    rec.guard(kSpectral, "spectral.riesz_divergence", [&] {
        double worst = 0.0;
        for (int s = 0; s < 10; ++s) {
            const SpectralField th = forward(random_bandlimited_field(g, g.N / 3, 200 + s));
            double scale = 0.0;
            for (int i = 0; i < g.N; ++i) {
                for (int j = 0; j < g.N; ++j) {
                    scale = std::max(scale, std::hypot(g.k(i), g.k(j)) * std::abs(th(i, j)));
                }
            }
            worst = std::max(worst, riesz_divergence_max(th) / scale);
        }
        const double limit = 4.0 * std::numeric_limits<double>::epsilon();
        rec.add(kSpectral, "spectral.riesz_divergence", worst <= limit, worst, limit,
                "max |k.u_hat| / max |k||theta_hat|");
    });
    rec.guard(kSpectral, "spectral.sv_inequality", [&] {
        const Grid gs = make_grid(64, 10.0);
        int violations = 0, cases = 0;
        double worst_margin = -INFINITY;
        double worst_equality = 0.0;
        for (double alpha : {0.5, 1.0}) {
            for (int s = 0; s < 100; ++s) {
                const Field f = random_bandlimited_field(gs, 8, 1000 + s);
                for (double q : {2.0, 3.0, 4.0}) {
                    const SvResult r = sv_inequality_check(f, q, alpha);
                    ++cases;
                    if (!r.holds()) ++violations;
                    worst_margin = std::max(worst_margin, (r.rhs - r.lhs) / std::max(std::abs(r.lhs), 1e-300));
                }
                Field positive = f;
                for (auto& v : positive.data) v += 1.5;
                const SvResult e = sv_inequality_check(positive, 2.0, alpha);
                worst_equality = std::max(worst_equality, std::abs(e.lhs - e.rhs) / std::abs(e.lhs));
            }
        }
        rec.add(kSpectral, "spectral.sv_inequality", violations == 0, violations, 0,
                std::to_string(cases) + " cases; largest (rhs - lhs)/|lhs| = " + csv::format_double(worst_margin));
        rec.add(kSpectral, "spectral.sv_q2_equality", worst_equality <= 1e-10, worst_equality, 1e-10,
                "q=2 on fields bounded away from zero");
    });
}

void check_commutator(Recorder& rec) {
    for (double alpha : {1.0, 0.5}) {
        const std::string name = "commutator.alpha" + csv::format_double(alpha);
        rec.guard(kCommutator, name, [&] {
            const CommutatorResult r = commutator_check(alpha, 2.0, {.radius = 20.0, .nodes = 512});
            const CommutatorResult torus = commutator_check_grid(alpha, 2.0, make_grid(512, 20.0));
            rec.add(kCommutator, name, r.relative_error <= 1e-4, r.relative_error, 1e-4,
                    "R^2 disk radius 20, 512 radial panels; periodic-grid version: " +
                        csv::format_double(torus.relative_error));
        });
    }
}

void check_linear_oracle(Recorder& rec, const KernelProfile& p1) {
    rec.guard(kLinear, "linear.solver_vs_kernel", [&] {
        SolverConfig sc;
        sc.alpha = 1.0;
        sc.N = 512;
        sc.L = 80.0;
        sc.t_end = 10.0;
        sc.checkpoints = {0.5, 1.0, 2.0, 5.0, 10.0};
        sc.linear_only = true;
        sc.init.kind = InitKind::gaussian;
        sc.init.amplitude = 0.01;
        sc.init.width = 1.0;
        validate(sc);
        const InitialData init = make_initial(sc);
        SolverState state = make_state(sc, init.theta, 0.0);
        const R2Source source = R2Source::from_init(sc.init);
        const Grid& g = state.grid;
        constexpr int kStride = 8;
        std::vector<Vec2> pts;
        std::vector<std::size_t> index;
        for (int i = 0; i < g.N; i += kStride) {
            for (int j = 0; j < g.N; j += kStride) {
                pts.push_back({g.x(i), g.x(j)});
                index.push_back(static_cast<std::size_t>(i) * g.N + j);
            }
        }
        double worst = 0.0, worst_t = 0.0;
        for (double t : sc.checkpoints) {
            const Field theta = advance_to(state, t);
            const auto conv = linear_part_r2(source, p1, t, pts, 1e-10);
            for (std::size_t k = 0; k < pts.size(); ++k) {
                const double gap = std::abs(theta.data[index[k]] - conv[k].value);
                if (gap > worst) { worst = gap; worst_t = t; }
            }
        }
        rec.add(kLinear, "linear.solver_vs_kernel", worst <= 1e-6, worst, 1e-6,
                "Gaussian of amplitude 0.01, N=512, L=80, every " + std::to_string(kStride) +
                    "th grid point; worst at t=" + csv::format_double(worst_t));
    });
}

void check_linear_far_field(Recorder& rec, const KernelProfile& p1, const KernelProfile& p05) {
    rec.guard(kLinearFar, "far_field.linear_growth", [&] {
        InitSpec init;
        init.amplitude = 1.0;
        init.width = 1.0;
        init.center = {1.0, 0.0};
        const std::vector<double> times{1, 2, 5, 10, 20, 50};
        const GrowthSeries s = lemma1_check(R2Source::from_init(init), p1, times, {5.0, 500.0});
        const double e = s.fit.exponent;
        rec.add(kLinearFar, "far_field.linear_growth", e >= 0.8 && e <= 1.2, e, 1.2,
                "range [0.8, 1.2]; off-centre Gaussian, R^2 annulus [5, 500]; unconverged points: " +
                    std::to_string(s.unconverged));
    });
    for (const KernelProfile* p : {&p1, &p05}) {
        const std::string name = "far_field.semigroup_oracle.alpha" + csv::format_double(p->alpha);
        rec.guard(kLinearFar, name, [&] {
            double worst = 0.0;
            for (double t : {1.0, 5.0, 20.0, 50.0}) {
                worst = std::max(worst, semigroup_oracle(*p, t, {5.0, 50.0}).relative_gap);
            }
            rec.add(kLinearFar, name, worst <= 1e-5, worst, 1e-5);
        });
    }
}

std::string acceptance_config(double alpha) {
    std::vector<double> times = log_checkpoints(0.1, 50.0, 41);
    for (double t : {1.0, 5.0, 10.0, 20.0}) times.push_back(t);
    std::sort(times.begin(), times.end());
    std::vector<double> unique;
    for (double t : times) {
        if (unique.empty() || t - unique.back() > 1e-6 * t) unique.push_back(t);
        else if (t == std::round(t)) unique.back() = t;
    }
    std::ostringstream cfg;
    cfg << "alpha = " << csv::format_double(alpha) << "\n"
        << "N = 256\nL = 40\nt_end = 50\n"
        << "init = two_bump\namplitude = 0.01\ncenter = 1.5,0\namplitude2 = 0.005\ncenter2 = -1,1\n"
        << "width = 1\nannulus_r_min = 5\nannulus_r_max = 20\ncheckpoints = ";
    for (std::size_t i = 0; i < unique.size(); ++i) cfg << (i ? "," : "") << csv::format_double(unique[i]);
    cfg << "\n";
    return cfg.str();
}

Field snapshot_at(const fs::path& dir, double t) {
    for (const auto& entry : fs::directory_iterator(dir / "snapshots")) {
        if (entry.path().extension() != ".bin") continue;
        Snapshot s = read_snapshot(entry.path());
        if (s.t == t) return s.theta;
    }
    throw IoError("no snapshot at t=" + csv::format_double(t) + " in " + dir.string());
}

void check_run(Recorder& rec, double alpha, const VerifyOptions& options,
               const std::vector<ExponentTarget>& targets) {
    const std::string tag = "alpha" + csv::format_double(alpha);
    const RunConfig cfg = parse_config_text(acceptance_config(alpha), "acceptance " + tag);
    const fs::path dir = options.work_dir / ("acceptance_" + tag);
    rec.note("acceptance run " + tag + " -> " + dir.string());
    RunResult res;
    try {
        res = run(cfg, dir, {.log = options.log});
    } catch (const std::exception& e) {
        rec.add(kConservation, "run." + tag + ".complete", false, NAN, NAN, e.what());
        return;
    }
    const auto& inv = res.invariants;
    const double t_end = cfg.solver.t_end;

    if (alpha == 1.0) {
        rec.add(kConservation, "run." + tag + ".mass_drift", inv.mass_ok && inv.mass_drift <= 1e-10,
                inv.mass_drift, 1e-10);
        rec.add(kConservation, "run." + tag + ".l2_nonincreasing", inv.l2_ok, inv.l2_growth, 1e-8,
                "largest relative L2 increase between checkpoints");
        rec.add(kConservation, "run." + tag + ".energy_balance", inv.energy_ok, inv.energy_error, 0.01);

        for (const auto& f : fit_exponents(res.records, alpha, t_end, targets)) {
            if (f.target.upper_only) continue;
            rec.add(kDecay, "run." + tag + "." + f.target.quantity, f.ok, f.exponent, f.expected,
                    "target " + csv::format_double(f.expected) + " +- " +
                        csv::format_double(f.target.tolerance) + " over [" +
                        csv::format_double(f.target.window_start) + ", " + csv::format_double(t_end) + "]");
        }

        rec.guard(kRatio, "run." + tag + ".far_field_ratio", [&] {
            const KernelProfile profile = profile_for(cfg);
            const double r = cfg.annulus.r_max;
            const auto c = corollary_check(snapshot_at(dir, 10.0), 10.0, profile, res.mass0, std::span(&r, 1))[0];
            const double dev = std::max(std::abs(c.min - 1.0), std::abs(c.max - 1.0));
            rec.add(kRatio, "run." + tag + ".far_field_ratio", dev <= 0.15, dev, 0.15,
                    "t=10, r=" + csv::format_double(r) + ": min " + csv::format_double(c.min) + ", max " +
                        csv::format_double(c.max));
        });
    }

    for (const auto& f : fit_exponents(res.records, alpha, t_end, targets)) {
        if (!f.target.upper_only) continue;
        const char* criterion = f.target.column == "v_weighted" ? kRemainder : kNonlinearFar;
        rec.add(criterion, "run." + tag + "." + f.target.quantity, f.ok, f.exponent,
                f.expected + f.target.tolerance,
                "over [" + csv::format_double(f.target.window_start) + ", " + csv::format_double(t_end) + "]");
    }
    rec.add(kNonlinearFar, "run." + tag + ".image_budget", inv.image.ok, inv.image.worst_fraction, 0.01,
            "worst at t=" + csv::format_double(inv.image.worst_t));
    const WgradResult w = wgrad_check(res.records, t_end);
    rec.add(kRemainder, "run." + tag + ".wgrad_bounded", w.bounded,
            w.max_early > 0.0 ? w.max_all / w.max_early : INFINITY, 2.0,
            "max over [1, t_end] / max over [1, t_end/4]");
}

}  // namespace

bool VerifyReport::passed() const {
    return std::all_of(contracts.begin(), contracts.end(), [](const Contract& c) { return c.passed; });
}

std::vector<std::pair<std::string, bool>> VerifyReport::criteria() const {
    std::vector<std::pair<std::string, bool>> out;
    for (const auto& c : contracts) {
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == c.criterion; });
        if (it == out.end()) out.emplace_back(c.criterion, c.passed);
        else it->second = it->second && c.passed;
    }
    return out;
}

VerifyReport verify(const VerifyOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    VerifyReport report;
    report.level = options.level;
    Recorder rec(report, options.log);

    rec.note("building kernel profiles");
    KernelProfile p1 = build_profile(1.0, 5000.0, 1e-10);
    if (options.inject_fault) {
        for (std::size_t i = 0; i < p1.values.size(); ++i) {
            p1.values[i] *= 1.0 + 1e-4;
            p1.grad_values[i] *= 1.0 + 1e-4;
            p1.log_values[i] += std::log1p(1e-4);
        }
    }
    check_kernel_oracles(rec, p1);
    rec.note("spectral identities");
    check_spectral(rec);
    rec.note("commutator identity");
    check_commutator(rec);

    if (options.level == VerifyLevel::full) {
        const KernelProfile p05 = build_profile(0.5, 5000.0, 1e-10);
        check_tail(rec, p1, "alpha1");
        check_tail(rec, p05, "alpha0.5");
        rec.note("linear oracle");
        check_linear_oracle(rec, p1);
        rec.note("linear far field");
        check_linear_far_field(rec, p1, p05);
        const auto targets = load_targets();
        fs::create_directories(options.work_dir);
        check_run(rec, 1.0, options, targets);
        check_run(rec, 0.5, options, targets);
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

void write_report_json(const VerifyReport& report, const fs::path& path) {
    nlohmann::json j;
    j["level"] = report.level == VerifyLevel::full ? "full" : "quick";
    j["passed"] = report.passed();
    j["wall_seconds"] = report.wall_seconds;
    const auto number = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(csv::format_double(v)); };
    for (const auto& c : report.contracts) {
        j["contracts"].push_back({{"name", c.name},
                                  {"criterion", c.criterion},
                                  {"passed", c.passed},
                                  {"measured", number(c.measured)},
                                  {"limit", number(c.limit)},
                                  {"detail", c.detail}});
    }
    for (const auto& [name, ok] : report.criteria()) j["criteria"].push_back({{"name", name}, {"passed", ok}});
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void print_report(const VerifyReport& report, std::ostream& out) {
    for (const auto& c : report.contracts) {
        out << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(44) << c.name << " measured "
            << std::setw(24) << csv::format_double(c.measured) << " limit " << csv::format_double(c.limit);
        if (!c.detail.empty()) out << "  (" << c.detail << ")";
        out << '\n';
    }
}

}  // namespace sqg

#include "sqg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <thread>

#include "sqg/csv.hpp"
#include "sqg/error.hpp"

namespace sqg {

namespace fs = std::filesystem;

namespace {

double column_value(const DiagnosticsRecord& r, const std::string& column) {
    const auto& names = record_columns();
    const auto row = record_row(r);
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == column) return row[i];
    }
    throw ConfigError("unknown diagnostics column '" + column + "'");
}

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

bool ExponentTarget::accepts(double alpha, double fitted) const {
    if (!std::isfinite(fitted)) return false;
    const double expected = target(alpha);
    if (upper_only) return fitted <= expected + tolerance;
    return std::abs(fitted - expected) <= tolerance;
}

fs::path default_targets_path() { return fs::path(SQG_DATA_DIR) / "targets.csv"; }

std::vector<ExponentTarget> load_targets(const fs::path& path) {
    const auto table = csv::read_text(path);
    const auto iq = table.column("quantity");
    const auto ic = table.column("column");
    const auto ia = table.column("coef_inv_alpha");
    const auto ik = table.column("constant");
    const auto ir = table.column("relation");
    const auto it = table.column("tolerance");
    const auto iw = table.column("window_start");
    std::vector<ExponentTarget> out;
    for (const auto& row : table.rows) {
        ExponentTarget t;
        t.quantity = row[iq];
        t.column = row[ic];
        t.coef_inv_alpha = csv::parse_double(row[ia]);
        t.constant = csv::parse_double(row[ik]);
        if (row[ir] == "upper") t.upper_only = true;
        else if (row[ir] != "equal") throw ConfigError(path.string() + ": unknown relation '" + row[ir] + "'");
        t.tolerance = csv::parse_double(row[it]);
        t.window_start = csv::parse_double(row[iw]);
        out.push_back(t);
    }
    if (out.empty()) throw ConfigError(path.string() + ": no targets");
    return out;
}

std::vector<FittedExponent> fit_exponents(std::span<const DiagnosticsRecord> records, double alpha,
                                          double t_end, std::span<const ExponentTarget> targets) {
    std::vector<FittedExponent> out;
    for (const auto& target : targets) {
        std::vector<double> times;
        std::vector<double> values;
        for (const auto& r : records) {
            times.push_back(r.t);
            values.push_back(column_value(r, target.column));
        }
        FittedExponent f;
        f.target = target;
        f.alpha = alpha;
        f.expected = target.target(alpha);
        try {
            f.exponent = fit_decay_exponent(times, values, target.window_start, t_end).exponent;
        } catch (const std::exception&) {
            f.exponent = NAN;
        }
        f.ok = target.accepts(alpha, f.exponent);
        out.push_back(f);
    }
    return out;
}

bool SweepResult::all_ok() const {
    return std::all_of(members.begin(), members.end(), [](const SweepMember& m) {
        return m.ok && std::all_of(m.exponents.begin(), m.exponents.end(),
                                   [](const FittedExponent& f) { return f.ok; });
    });
}

int sweep_workers(std::size_t runs) {
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("SQG_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1) workers = std::min(workers, cap);
        } catch (const std::exception&) {
            throw ConfigError(std::string("SQG_THREADS must be a positive integer, got '") + env + "'");
        }
    }
    return std::max(1, std::min<int>(workers, static_cast<int>(runs)));
}

SweepResult sweep(std::span<const double> alphas, const RunConfig& base, const fs::path& out_root,
                  std::ostream* log) {
    if (alphas.empty()) throw DomainError("sweep: empty alpha list");
    SweepResult result;
    std::vector<double> unique;
    for (double a : alphas) {
        if (!(a > 0.0 && a <= 1.0)) {
            throw DomainError("sweep: alpha must lie in (0, 1], got " + csv::format_double(a));
        }
        if (std::find(unique.begin(), unique.end(), a) != unique.end()) {
            result.notices.push_back("duplicate alpha " + csv::format_double(a) + " run once");
            continue;
        }
        unique.push_back(a);
    }
    const auto targets = load_targets();
    fs::create_directories(out_root);

    result.members.resize(unique.size());
    std::mutex log_mutex;
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < unique.size(); i = next++) {
            SweepMember& m = result.members[i];
            m.alpha = unique[i];
            m.dir = out_root / ("alpha_" + csv::format_double(m.alpha));
            try {
                auto entries = base.entries;
                entries["alpha"] = csv::format_double(m.alpha);
                const RunConfig cfg = config_from_entries(entries, "sweep alpha=" + csv::format_double(m.alpha));
                m.result = run(cfg, m.dir);
                m.exponents = fit_exponents(m.result.records, m.alpha, cfg.solver.t_end, targets);
                m.ok = true;
            } catch (const std::exception& e) {
                m.error = e.what();
            }
            if (log) {
                std::lock_guard lock(log_mutex);
                *log << "alpha=" << csv::format_double(m.alpha) << (m.ok ? " done" : " failed: " + m.error)
                     << '\n';
            }
        }
    };
    const int workers = sweep_workers(unique.size());
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();

    std::vector<std::string> header{"alpha", "status"};
    for (const auto& t : targets) {
        header.push_back(t.quantity);
        header.push_back(t.quantity + "_target");
        header.push_back(t.quantity + "_ok");
    }
    result.exponents_csv = out_root / "exponents.csv";
    csv::Writer out(result.exponents_csv, header);
    for (const auto& n : result.notices) out.comment(n);
    for (const auto& m : result.members) {
        std::vector<std::string> row{csv::format_double(m.alpha), m.ok ? "ok" : sanitize("failed: " + m.error)};
        for (std::size_t k = 0; k < targets.size(); ++k) {
            if (m.ok) {
                row.push_back(csv::format_double(m.exponents[k].exponent));
                row.push_back(csv::format_double(m.exponents[k].expected));
                row.push_back(m.exponents[k].ok ? "1" : "0");
            } else {
                row.insert(row.end(), {"nan", csv::format_double(targets[k].target(m.alpha)), "0"});
            }
        }
        out.row(row);
    }
    out.close();
    return result;
}

}  // namespace sqg

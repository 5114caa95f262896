// Full acceptance suite: one PASS/FAIL line per criterion, then every contract.
#include <filesystem>
#include <iostream>

#include "sqg/verify.hpp"

int main(int argc, char** argv) {
    sqg::VerifyOptions options;
    options.level = sqg::VerifyLevel::full;
    options.work_dir = argc > 1 ? argv[1] : "acceptance_work";
    options.log = &std::cerr;
    std::filesystem::remove_all(options.work_dir);

    const sqg::VerifyReport report = sqg::verify(options);

    std::cout << "\n== acceptance criteria ==\n";
    for (const auto& [name, ok] : report.criteria()) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
    }
    std::cout << "\n== contracts ==\n";
    sqg::print_report(report, std::cout);
    sqg::write_report_json(report, options.work_dir / "acceptance_report.json");
    std::cout << "\nwall time " << report.wall_seconds << " s\n";
    return report.passed() ? 0 : 1;
}

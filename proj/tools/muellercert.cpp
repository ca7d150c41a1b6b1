// muellercert: certify real 4x4 polarization transfer matrices.
//
//   muellercert analyze <file>               full report for one matrix
//   muellercert batch <dir>                  report for every file in a directory
//   muellercert tetra-scan --samples N --seed K
//   muellercert vanzyl
//
// Exit status: 0 success, 1 input failure, 2 internal failure. With
// --verdict-exit, analyze/batch instead return 0 (Mueller), 3 (pre-Mueller
// only) or 4 (not pre-Mueller); batch returns the worst tier seen.

#include <mueller/mueller.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>

namespace {

constexpr int kInputFailure = 1;
constexpr int kInternalFailure = 2;

struct Options {
    double tol = mueller::kDefaultTol;
    std::string format = "report";
    bool verdict_exit = false;
};

void emit(const mueller::Report& r, const Options& opt, const std::string& label = {})
{
    if (opt.format == "summary") {
        if (!label.empty()) std::cout << "== " << label << '\n';
        std::cout << mueller::summary(r);
    } else {
        auto doc = mueller::to_json(r);
        if (!label.empty()) doc["file"] = label;
        std::cout << doc.dump(2) << '\n';
    }
}

int run_analyze(const std::string& path, const Options& opt)
{
    mueller::Matrix4 m;
    try {
        m = mueller::read_matrix_file(path);
    } catch (const mueller::ParseError& e) {
        std::cerr << "muellercert: " << path << ": " << e.what() << '\n';
        return kInputFailure;
    }
    const auto report = mueller::analyze(mueller::MuellerCandidate(m), opt.tol);
    emit(report, opt);
    return opt.verdict_exit ? static_cast<int>(mueller::verdict_tier(report)) : 0;
}

int run_batch(const std::string& dir, const Options& opt)
{
    const auto entries = mueller::analyze_directory(dir, opt.tol);
    int worst = 0;
    bool input_failure = false;
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& entry : entries) {
        if (const auto* err = std::get_if<std::string>(&entry.result)) {
            std::cerr << "muellercert: " << entry.path << ": " << *err << '\n';
            input_failure = true;
            continue;
        }
        const auto& report = std::get<mueller::Report>(entry.result);
        worst = std::max(worst, static_cast<int>(mueller::verdict_tier(report)));
        if (opt.format == "summary") {
            emit(report, opt, entry.path);
        } else {
            auto doc = mueller::to_json(report);
            doc["file"] = entry.path;
            docs.push_back(doc);
        }
    }
    if (opt.format != "summary") std::cout << docs.dump(2) << '\n';
    if (input_failure) return kInputFailure;
    return opt.verdict_exit ? worst : 0;
}

int run_tetra(std::uint64_t samples, std::uint64_t seed, const Options& opt)
{
    const auto r = mueller::tetra_scan(samples, seed, opt.tol);
    if (opt.format == "summary") {
        std::cout << "samples " << r.samples << ", seed " << r.seed << '\n'
                  << "fraction Mueller     : " << r.fraction_mueller << '\n'
                  << "fraction pre-Mueller : " << r.fraction_pre_mueller << '\n';
    } else {
        std::cout << mueller::to_json(r).dump(2) << '\n';
    }
    return 0;
}

int run_vanzyl(const Options& opt)
{
    const auto s = mueller::vanzyl_case(opt.tol);
    if (opt.format == "summary") {
        std::cout << "d = (" << s.d[0] << ", " << s.d[1] << ", " << s.d[2] << ", " << s.d[3] << ")\n"
                  << "Mueller (linear inequalities): " << (s.constraints.satisfied ? "yes" : "no") << '\n'
                  << "binding: inequality " << s.constraints.position << " (" << s.constraints.formula
                  << "), excess " << s.constraints.violation << '\n'
                  << "diagonal-form H eigenvalues:";
        for (int i = 0; i < 4; ++i) std::cout << ' ' << s.diagonal_spectrum[i];
        std::cout << "\n" << s.note << '\n';
    } else {
        std::cout << mueller::to_json(s).dump(2) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Pre-Mueller and Mueller certification of 4x4 polarization matrices"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--tol", opt.tol, "Relative tolerance for every verdict")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"report", "summary"}))
        ->capture_default_str();
    app.add_flag("--verdict-exit", opt.verdict_exit, "Encode the verdict tier in the exit status");

    std::string file;
    auto* analyze = app.add_subcommand("analyze", "Analyze one matrix file");
    analyze->add_option("file", file, "Matrix file (16 numbers or {\"mueller\": [[...]]})")->required();

    std::string dir;
    auto* batch = app.add_subcommand("batch", "Analyze every file in a directory");
    batch->add_option("dir", dir, "Directory of matrix files")->required()->check(CLI::ExistingDirectory);

    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    auto* tetra = app.add_subcommand("tetra-scan", "Monte Carlo volume of Mueller matrices diag(1,d1,d2,d3)");
    tetra->add_option("--samples", samples, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
    tetra->add_option("--seed", seed, "Generator seed")->capture_default_str();

    auto* vanzyl = app.add_subcommand("vanzyl", "Constraint analysis of the van Zyl canonical parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputFailure;
    }

    try {
        if (*analyze) return run_analyze(file, opt);
        if (*batch) return run_batch(dir, opt);
        if (*tetra) return run_tetra(samples, seed, opt);
        if (*vanzyl) return run_vanzyl(opt);
    } catch (const std::exception& e) {
        std::cerr << "muellercert: internal error: " << e.what() << '\n';
        return kInternalFailure;
    }
    return kInternalFailure;
}

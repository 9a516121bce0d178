// gcollapse: run scenario files, run the acceptance suites, list bundled scenarios.
//
// Exit codes: 0 ok, 1 verification failure, 2 parse/usage error,
// 3 numeric failure, 4 invalid physics.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "gcollapse/csv.hpp"
#include "gcollapse/error.hpp"
#include "gcollapse/runner.hpp"
#include "gcollapse/scenario.hpp"
#include "gcollapse/verify.hpp"

namespace fs = std::filesystem;
using namespace gcollapse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitPhysics = 4;

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
    if (dynamic_cast<const ConvergenceError*>(&e)) return kExitNumeric;
    if (dynamic_cast<const PhysicsError*>(&e)) return kExitPhysics;
    if (dynamic_cast<const DimensionError*>(&e)) return kExitPhysics;
    return kExitNumeric;
}

fs::path scenario_dir() {
    if (const char* env = std::getenv("GCOLLAPSE_SCENARIO_DIR"); env && *env) return env;
    return GCOLLAPSE_SCENARIO_DIR;
}

std::vector<fs::path> bundled() {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(scenario_dir(), ec)) {
        if (entry.path().extension() == ".scn") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

// A path to an existing file, or the name of a bundled scenario.
fs::path resolve(const std::string& arg) {
    if (fs::is_regular_file(arg)) return arg;
    const fs::path candidate = scenario_dir() / (arg + ".scn");
    if (fs::is_regular_file(candidate)) return candidate;
    throw ParseError("no scenario file or bundled scenario named '" + arg + "'");
}

fs::path output_path(const scenario::Scenario& s, const std::optional<std::string>& out, bool many) {
    if (out) {
        if (many || fs::is_directory(*out)) return fs::path(*out) / (s.name + ".csv");
        return *out;
    }
    if (!s.output.empty()) return s.output;
    if (const char* env = std::getenv("GCOLLAPSE_OUT_DIR"); env && *env) return fs::path(env) / (s.name + ".csv");
    return s.name + ".csv";
}

struct Job {
    std::string arg;
    std::vector<std::string> summary;
    fs::path written;
    std::string error;
    int code = kExitOk;
};

void execute(Job& job, const std::optional<std::uint64_t>& seed, const std::optional<std::string>& out, bool many) {
    try {
        const fs::path file = resolve(job.arg);
        scenario::Scenario s = scenario::parse_file(file.string());
        if (seed) s.seed = *seed;
        const runner::RunResult result = runner::run(s);
        job.written = output_path(s, out, many);
        if (job.written.has_parent_path()) fs::create_directories(job.written.parent_path());
        csv::write(result.table, job.written.string());
        for (const auto& line : result.summary) job.summary.push_back(s.name + ": " + line);
    } catch (const std::exception& e) {
        job.error = e.what();
        job.code = exit_code_for(e);
    }
}

int run_command(const std::vector<std::string>& args, const std::optional<std::uint64_t>& seed,
                const std::optional<std::string>& out, unsigned jobs) {
    std::vector<Job> work(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) work[i].arg = args[i];
    const bool many = args.size() > 1;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < work.size(); i = next++) execute(work[i], seed, out, many);
    };
    std::vector<std::thread> pool;
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(work.size())));
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = kExitOk;
    for (const auto& job : work) {
        if (job.code != kExitOk) {
            std::cerr << "gcollapse: " << job.arg << ": " << job.error << "\n";
            if (code == kExitOk) code = job.code;
            continue;
        }
        for (const auto& line : job.summary) std::cout << line << "\n";
        std::cout << "wrote " << job.written.string() << "\n";
    }
    return code;
}

int verify_command(const std::string& suite, double perturbation, unsigned threads) {
    const std::vector<int> ids = verify::suite_criteria(suite);
    verify::VerifyOptions options;
    options.rate_perturbation = perturbation;
    options.threads = threads;
    options.scenario_dir = scenario_dir().string();
    std::vector<std::string> failed;
    for (int id : ids) {
        const verify::CriterionResult r = verify::run_criterion(id, options);
        std::cout << verify::format(r) << std::flush;
        for (const auto& c : r.checks) {
            if (!c.pass && !c.informational) failed.push_back("criterion " + std::to_string(id) + ": " + c.name);
        }
    }
    if (failed.empty()) {
        std::cout << "suite " << suite << ": all " << ids.size() << " criteria passed\n";
        return kExitOk;
    }
    for (const auto& f : failed) std::cout << "FAILED " << f << "\n";
    return kExitVerify;
}

int list_command() {
    for (const auto& file : bundled()) {
        const auto s = scenario::parse_file(file.string());
        std::cout << s.name << "\t" << scenario::kind_name(s.kind) << "\t" << file.string() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gravitationally induced collapse: scenarios and acceptance suites"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Log solver diagnostics to stderr");

    auto* run = app.add_subcommand("run", "Run scenario files or bundled scenarios by name");
    std::vector<std::string> scenarios;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    run->add_option("scenario", scenarios, "Scenario file or bundled name")->required();
    run->add_option("--out", out, "Output CSV (one scenario) or directory");
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--jobs", jobs, "Scenarios to run concurrently")->check(CLI::PositiveNumber);

    auto* ver = app.add_subcommand("verify", "Run an acceptance suite: residual, born, gravity, sn, all");
    std::string suite;
    double perturbation = 0.0;
    unsigned threads = 0;
    ver->add_option("suite", suite, "Suite name")->required();
    ver->add_option("--threads", threads, "Worker threads for sampling (0: all cores)");
    ver->add_option("--perturb-rate", perturbation)->group("");

    auto* list = app.add_subcommand("list-scenarios", "List bundled scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }
    spdlog::set_default_logger(spdlog::stderr_color_mt("gcollapse"));
    spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);

    try {
        if (run->parsed()) return run_command(scenarios, seed, out, jobs);
        if (ver->parsed()) return verify_command(suite, perturbation, threads);
        if (list->parsed()) return list_command();
    } catch (const std::exception& e) {
        std::cerr << "gcollapse: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return kExitParse;
}

// floquet: Floquet exponents by harmonic balance, monodromy integration
// and closed forms for commuting systems.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "floquet/error.hpp"
#include "floquet/job.hpp"
#include "floquet/report.hpp"

namespace {

using namespace floquet;
using namespace floquet::app;
using nlohmann::json;

enum ExitCode { kOk = 0, kParseError = 2, kSolverError = 3, kIoError = 4 };

struct Overrides {
    std::string configPath;
    std::string problem;
    std::string method;
    int n = 0;
    int steps = 0;
    std::string out;
    std::string format;
    std::string sweep;
    bool polish = false;
    bool timing = false;
    int jobs = 0;
    int periods = 0;
    int points = 0;
    std::string branch;
    std::string gauge;
    std::string summary;
};

std::string readAll(std::istream& in)
{
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// "name" or "name:key=value,key=value"
json problemFromShorthand(const std::string& spec)
{
    const auto colon = spec.find(':');
    json problem = {{"catalog", spec.substr(0, colon)}, {"params", json::object()}};
    if (colon == std::string::npos) return problem;
    std::stringstream rest(spec.substr(colon + 1));
    for (std::string item; std::getline(rest, item, ',');) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("--problem: expected key=value, got '" + item + "'");
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item.substr(eq + 1), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() - eq - 1) throw ConfigError("--problem: bad number in '" + item + "'");
        problem["params"][item.substr(0, eq)] = value;
    }
    return problem;
}

json loadConfigJson(const Overrides& o)
{
    json j = json::object();
    const bool fromStdin = o.configPath == "-" || (o.configPath.empty() && o.problem.empty());
    std::string textIn;
    if (fromStdin) {
        textIn = readAll(std::cin);
    } else if (!o.configPath.empty()) {
        std::ifstream file(o.configPath, std::ios::binary);
        if (!file) throw IoError("cannot open config '" + o.configPath + "'");
        textIn = readAll(file);
    }
    if (!textIn.empty()) {
        try {
            j = json::parse(textIn);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
    }
    if (!o.problem.empty()) j["problem"] = problemFromShorthand(o.problem);
    return j;
}

JobConfig buildConfig(const Overrides& o)
{
    JobConfig cfg = parseConfig(loadConfigJson(o));
    if (!o.method.empty()) cfg.method = parseMethod(o.method);
    if (o.n != 0) cfg.n = o.n;
    if (o.steps != 0) cfg.steps = o.steps;
    if (!o.out.empty()) cfg.output.path = o.out;
    if (!o.format.empty()) cfg.output.format = parseFormat(o.format);
    if (o.polish) cfg.polish = true;
    cfg.timing = o.timing;
    if (!o.sweep.empty()) {
        const auto eq = o.sweep.find('=');
        if (eq == std::string::npos) throw ConfigError("--sweep: expected param=from:to:count or param=v1,v2,...");
        cfg.sweep = parseSweep(o.sweep.substr(0, eq), o.sweep.substr(eq + 1));
    }
    if (o.periods != 0) cfg.exportSpec.periods = o.periods;
    if (o.points != 0) cfg.exportSpec.pointsPerPeriod = o.points;
    if (!o.branch.empty()) cfg.exportSpec.branch = parseBranch(o.branch);
    if (!o.gauge.empty()) cfg.exportSpec.gauge = parseGauge(o.gauge);
    validate(cfg);
    return cfg;
}

void addCommon(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("config", o.configPath, "JSON job file ('-' for stdin; stdin is read when neither a file nor "
                                            "--problem is given)");
    cmd->add_option("--problem", o.problem, "Catalog problem, e.g. mathieu:alpha=0.5 (replaces the config problem)");
    cmd->add_option("--method", o.method, "hb, monodromy, commuting or all");
    cmd->add_option("--n", o.n, "Harmonic-balance order")->check(CLI::Range(1, 64));
    cmd->add_option("--steps", o.steps, "RK4 steps per period")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "Output file (default: stdout)");
    cmd->add_flag("--polish", o.polish, "Minimize E locally around each root");
    cmd->add_flag("--timing", o.timing, "Include per-row wall time in the report");
}

std::string render(const Report& report)
{
    if (report.config.output.format == Format::Csv) return toCsv(report);
    return toJson(report).dump(2) + "\n";
}

int runReport(const Report& report)
{
    writeOutput(report.config.output.path, render(report));
    if (report.ok()) return kOk;
    for (const auto& row : report.rows)
        for (const auto& e : row.errors) std::cerr << "floquet: " << e << "\n";
    return kSolverError;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Floquet exponents of periodic linear second-order equations and planar systems"};
    app.require_subcommand(1);
    Overrides o;

    auto* solve = app.add_subcommand("solve", "Solve one problem with the selected methods");
    addCommon(solve, o);
    solve->add_option("--format", o.format, "json or csv");

    auto* sweep = app.add_subcommand("sweep", "Solve over a grid of one catalog parameter");
    addCommon(sweep, o);
    sweep->add_option("--format", o.format, "json or csv");
    sweep->add_option("--sweep", o.sweep, "param=from:to:count or param=v1,v2,...");
    sweep->add_option("--jobs", o.jobs, "Worker threads (default: all cores)")->check(CLI::NonNegativeNumber);

    auto* exportCmd = app.add_subcommand("export", "Sample the HB solution next to a matched reference trajectory");
    addCommon(exportCmd, o);
    exportCmd->add_option("--periods", o.periods, "Number of periods to sample")->check(CLI::PositiveNumber);
    exportCmd->add_option("--points", o.points, "Samples per period")->check(CLI::Range(3, 10000000));
    exportCmd->add_option("--branch", o.branch, "decaying or growing");
    exportCmd->add_option("--gauge", o.gauge, "unit_cosine or max_coefficient");
    exportCmd->add_option("--summary", o.summary, "Write a JSON summary (S2, deviations) to this file");

    auto* catalogCmd = app.add_subcommand("catalog", "List the built-in problems");
    std::string catalogFormat = "text";
    catalogCmd->add_option("--format", catalogFormat, "text or json")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParseError;
    }

    try {
        if (catalogCmd->parsed()) {
            if (catalogFormat == "json") {
                writeOutput("", catalogJson().dump(2) + "\n");
            } else {
                std::ostringstream out;
                for (const auto& e : catalogEntries()) {
                    out << e.name << "\n    " << e.description << "\n";
                    for (const auto& [name, value] : e.parameters) out << "    " << name << " = " << value << "\n";
                }
                writeOutput("", out.str());
            }
            return kOk;
        }

        const JobConfig cfg = buildConfig(o);
        if (solve->parsed()) {
            if (cfg.sweep) throw ConfigError("the configuration has a sweep block; use the sweep subcommand");
            return runReport(runJob(cfg));
        }
        if (sweep->parsed()) {
            if (!cfg.sweep) throw ConfigError("sweep: give --sweep param=from:to:count or a sweep block");
            return runReport(runSweep(cfg, o.jobs));
        }
        // export
        const ExportResult result = exportSolution(cfg);
        writeOutput(cfg.output.path, exportCsv(result));
        const json summary = exportSummary(result, cfg);
        if (!o.summary.empty()) writeOutput(o.summary, summary.dump(2) + "\n");
        std::cerr << "S2 = " << result.s2 << ", max relative deviation = " << result.maxRelative
                  << ", rms relative deviation = " << result.rmsRelative << "\n";
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "floquet: " << e.what() << "\n";
        return kParseError;
    } catch (const IoError& e) {
        std::cerr << "floquet: " << e.what() << "\n";
        return kIoError;
    } catch (const InvalidArgument& e) {
        std::cerr << "floquet: " << e.what() << "\n";
        return kParseError;
    } catch (const std::exception& e) {
        std::cerr << "floquet: " << e.what() << "\n";
        return kSolverError;
    }
}

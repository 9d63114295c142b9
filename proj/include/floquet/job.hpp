#pragma once

// Job configuration and the runners behind the command-line tool.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "floquet/commuting.hpp"
#include "floquet/harmonic_balance.hpp"
#include "floquet/monodromy.hpp"
#include "floquet/problems.hpp"

namespace floquet::app {

enum class Method { Hb, Monodromy, Commuting, All };
enum class Format { Json, Csv };
enum class Branch { Decaying, Growing };
enum class Gauge { UnitCosine, MaxCoefficient };

std::string_view toString(Method m);
std::string_view toString(Format f);
std::string_view toString(Branch b);
std::string_view toString(Gauge g);
Method parseMethod(std::string_view s);
Format parseFormat(std::string_view s);
Branch parseBranch(std::string_view s);
Gauge parseGauge(std::string_view s);

struct ProblemSource {
    /// Catalog problem name; empty for inline problems.
    std::string catalogName;
    ParameterMap params;
    std::optional<Problem> inlineProblem;
};

struct SweepSpec {
    std::string param;
    /// Grid values, ascending.
    std::vector<double> values;
};

/// {omega, a0, a: [...], b: [...]} with each coefficient a number or [re, im];
/// a bare number c stands for the constant function c. Throws ConfigError.
TrigPoly trigPolyFromJson(const nlohmann::json& j);
/// Inverse of trigPolyFromJson (object form; complex entries as [re, im]).
nlohmann::json toJson(const TrigPoly& p);

/// "from:to:count" (inclusive, evenly spaced) or "v1,v2,...".
SweepSpec parseSweep(std::string_view param, std::string_view range);

struct OutputSpec {
    std::string path;  // empty: standard output
    Format format = Format::Json;
};

struct ExportSpec {
    int periods = 1;
    int pointsPerPeriod = 1024;
    Branch branch = Branch::Decaying;
    Gauge gauge = Gauge::UnitCosine;
};

struct JobConfig {
    ProblemSource problem;
    Method method = Method::All;
    int n = 3;
    int steps = 10000;
    bool polish = false;
    std::optional<SweepSpec> sweep;
    OutputSpec output;
    ExportSpec exportSpec;
    bool timing = false;
};

/// Throws ConfigError on schema violations.
JobConfig parseConfig(const nlohmann::json& j);
nlohmann::json toJson(const JobConfig& cfg);

/// Throws ConfigError for an invalid problem definition or parameter.
Problem resolveProblem(const ProblemSource& source);
void validate(const JobConfig& cfg);

struct HbOutcome {
    ExponentPair pair;
    /// Branch used for S2 and E in the unit-cosine gauge (falls back to the
    /// max-coefficient gauge when the cos(wt) coefficient vanishes).
    FloquetSolution gaugeSolution;
    Gauge gauge = Gauge::UnitCosine;
    std::optional<double> s2;
};

struct CommutingOutcome {
    CommutingSystem system;
    std::array<Complex, 2> exponents;
    std::array<Complex, 2> averageExponents;
    CommutingClass classification;
    double commutatorNorm = 0.0;
};

struct Row {
    std::optional<double> paramValue;
    std::vector<std::string> errors;  // requested methods that failed
    std::vector<std::string> notes;   // auxiliary computations that failed
    std::optional<HbOutcome> hb;
    std::optional<MonodromyResult> monodromy;
    /// Monodromy at ten times the configured steps: the "exact" column.
    std::optional<MonodromyResult> reference;
    std::optional<CommutingOutcome> commuting;
    std::optional<Boundedness> boundedness;
    std::optional<double> elapsedMs;

    bool ok() const { return errors.empty(); }
    /// Larger-real-part exponent of each method (the columns of a sweep table).
    std::optional<Complex> lambdaExact() const;
    std::optional<Complex> lambdaHb() const;
    std::optional<Complex> lambdaNum() const;
};

struct Report {
    JobConfig config;
    std::vector<Row> rows;
    bool ok() const;
};

/// One solve of the configured problem.
Row solveRow(const JobConfig& cfg, const Problem& problem, std::optional<double> paramValue = std::nullopt);
Report runJob(const JobConfig& cfg);
/// One row per sweep value, computed on up to `jobs` threads and merged in grid order.
Report runSweep(const JobConfig& cfg, int jobs = 0);

struct ExportSample {
    double t;
    Complex approx;
    Complex reference;
};

struct ExportResult {
    FloquetSolution solution;
    Gauge gauge = Gauge::UnitCosine;
    std::vector<ExportSample> samples;
    /// Over the first period: (1/T) int |x_A - x_ref|^2.
    double s2 = 0.0;
    /// Over the first period: max |x_A - x_ref| / max |x_ref|.
    double maxRelative = 0.0;
    /// Over the first period: sqrt(mean |x_A - x_ref|^2 / mean |x_ref|^2).
    double rmsRelative = 0.0;
};

/// HB solution on [0, periods T] next to a reference trajectory started
/// from the same value and derivative at t = 0. Systems are reduced to the
/// scalar equation for their first component.
ExportResult exportSolution(const JobConfig& cfg);

}  // namespace floquet::app

#include "floquet/job.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <charconv>
#include <limits>
#include <numeric>
#include <set>
#include <thread>

#include "floquet/error.hpp"

namespace floquet::app {

using nlohmann::json;

std::string_view toString(Method m)
{
    switch (m) {
        case Method::Hb: return "hb";
        case Method::Monodromy: return "monodromy";
        case Method::Commuting: return "commuting";
        case Method::All: return "all";
    }
    return "all";
}

std::string_view toString(Format f) { return f == Format::Csv ? "csv" : "json"; }
std::string_view toString(Branch b) { return b == Branch::Growing ? "growing" : "decaying"; }
std::string_view toString(Gauge g) { return g == Gauge::MaxCoefficient ? "max_coefficient" : "unit_cosine"; }

Method parseMethod(std::string_view s)
{
    for (Method m : {Method::Hb, Method::Monodromy, Method::Commuting, Method::All})
        if (toString(m) == s) return m;
    throw ConfigError("unknown method '" + std::string(s) + "' (expected hb, monodromy, commuting or all)");
}

Format parseFormat(std::string_view s)
{
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    throw ConfigError("unknown format '" + std::string(s) + "' (expected json or csv)");
}

Branch parseBranch(std::string_view s)
{
    if (s == "decaying") return Branch::Decaying;
    if (s == "growing") return Branch::Growing;
    throw ConfigError("unknown branch '" + std::string(s) + "' (expected decaying or growing)");
}

Gauge parseGauge(std::string_view s)
{
    if (s == "unit_cosine") return Gauge::UnitCosine;
    if (s == "max_coefficient") return Gauge::MaxCoefficient;
    throw ConfigError("unknown gauge '" + std::string(s) + "' (expected unit_cosine or max_coefficient)");
}

namespace {

void allowOnly(const json& obj, std::initializer_list<std::string_view> keys, std::string_view where)
{
    if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
}

double number(const json& j, std::string_view where)
{
    if (!j.is_number()) throw ConfigError(std::string(where) + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(std::string(where) + ": value must be finite");
    return v;
}

int integer(const json& j, std::string_view where)
{
    if (!j.is_number_integer()) throw ConfigError(std::string(where) + ": expected an integer");
    return j.get<int>();
}

std::string text(const json& j, std::string_view where)
{
    if (!j.is_string()) throw ConfigError(std::string(where) + ": expected a string");
    return j.get<std::string>();
}

Complex coefficient(const json& j, std::string_view where)
{
    if (j.is_number()) return number(j, where);
    if (j.is_array() && j.size() == 2) return {number(j[0], where), number(j[1], where)};
    throw ConfigError(std::string(where) + ": coefficient must be a number or [re, im]");
}

json coefficientJson(Complex c)
{
    if (c.imag() == 0.0) return c.real();
    return json::array({c.real(), c.imag()});
}

std::vector<Complex> coefficientList(const json& j, std::string_view where)
{
    if (!j.is_array()) throw ConfigError(std::string(where) + ": expected an array");
    std::vector<Complex> out;
    for (const auto& c : j) out.push_back(coefficient(c, where));
    return out;
}

double parseDouble(std::string_view s, std::string_view where)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError(std::string(where) + ": cannot parse '" + std::string(s) + "' as a number");
    return v;
}

SweepSpec sweepFromRange(std::string param, double from, double to, int count)
{
    if (count < 1) throw ConfigError("sweep: count must be >= 1");
    SweepSpec s{std::move(param), {}};
    for (int i = 0; i < count; ++i)
        s.values.push_back(count == 1 ? from : from + (to - from) * i / (count - 1));
    std::sort(s.values.begin(), s.values.end());
    return s;
}

ProblemSource parseProblem(const json& j)
{
    allowOnly(j, {"catalog", "params", "scalar", "system"}, "problem");
    const int sources = static_cast<int>(j.contains("catalog")) + static_cast<int>(j.contains("scalar")) +
                        static_cast<int>(j.contains("system"));
    if (sources != 1) throw ConfigError("problem: exactly one of catalog, scalar or system is required");
    ProblemSource src;
    if (j.contains("catalog")) {
        src.catalogName = text(j["catalog"], "problem.catalog");
        if (j.contains("params")) {
            if (!j["params"].is_object()) throw ConfigError("problem.params: expected an object");
            for (const auto& [key, value] : j["params"].items())
                src.params[key] = number(value, "problem.params." + key);
        }
        return src;
    }
    if (j.contains("params")) throw ConfigError("problem.params: only valid with a catalog problem");
    try {
        if (j.contains("scalar")) {
            const json& s = j["scalar"];
            allowOnly(s, {"p", "q", "r"}, "problem.scalar");
            for (const char* key : {"p", "q", "r"})
                if (!s.contains(key)) throw ConfigError(std::string("problem.scalar: missing '") + key + "'");
            src.inlineProblem = ScalarODE(trigPolyFromJson(s["p"]), trigPolyFromJson(s["q"]), trigPolyFromJson(s["r"]));
        } else {
            const json& s = j["system"];
            allowOnly(s, {"a11", "a12", "a21", "a22"}, "problem.system");
            for (const char* key : {"a11", "a12", "a21", "a22"})
                if (!s.contains(key)) throw ConfigError(std::string("problem.system: missing '") + key + "'");
            src.inlineProblem = PlanarSystem(trigPolyFromJson(s["a11"]), trigPolyFromJson(s["a12"]),
                                             trigPolyFromJson(s["a21"]), trigPolyFromJson(s["a22"]));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("problem: ") + e.what());
    }
    return src;
}

json problemJson(const ProblemSource& src)
{
    if (!src.inlineProblem) {
        json params = json::object();
        for (const auto& [k, v] : src.params) params[k] = v;
        return {{"catalog", src.catalogName}, {"params", params}};
    }
    if (const auto* ode = std::get_if<ScalarODE>(&*src.inlineProblem))
        return {{"scalar", {{"p", toJson(ode->p())}, {"q", toJson(ode->q())}, {"r", toJson(ode->r())}}}};
    const auto& sys = std::get<PlanarSystem>(*src.inlineProblem);
    return {{"system",
             {{"a11", toJson(sys.a11())}, {"a12", toJson(sys.a12())}, {"a21", toJson(sys.a21())},
              {"a22", toJson(sys.a22())}}}};
}

}  // namespace

TrigPoly trigPolyFromJson(const json& j)
{
    if (j.is_number()) return TrigPoly::constant(1.0, number(j, "trigpoly"));
    allowOnly(j, {"omega", "a0", "a", "b"}, "trigpoly");
    const double omega = j.contains("omega") ? number(j["omega"], "trigpoly.omega") : 1.0;
    const Complex a0 = j.contains("a0") ? coefficient(j["a0"], "trigpoly.a0") : Complex(0.0);
    std::vector<Complex> a = j.contains("a") ? coefficientList(j["a"], "trigpoly.a") : std::vector<Complex>{};
    std::vector<Complex> b = j.contains("b") ? coefficientList(j["b"], "trigpoly.b") : std::vector<Complex>{};
    try {
        return TrigPoly(omega, a0, std::move(a), std::move(b));
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

json toJson(const TrigPoly& p)
{
    json a = json::array();
    json b = json::array();
    for (const auto& c : p.cosCoefficients()) a.push_back(coefficientJson(c));
    for (const auto& c : p.sinCoefficients()) b.push_back(coefficientJson(c));
    return {{"omega", p.omega()}, {"a0", coefficientJson(p.a0())}, {"a", a}, {"b", b}};
}

SweepSpec parseSweep(std::string_view param, std::string_view range)
{
    if (param.empty()) throw ConfigError("sweep: parameter name is empty");
    const std::string where = "sweep " + std::string(param);
    if (range.find(':') != std::string_view::npos) {
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        for (std::size_t pos; (pos = range.find(':', start)) != std::string_view::npos; start = pos + 1)
            parts.push_back(range.substr(start, pos - start));
        parts.push_back(range.substr(start));
        if (parts.size() != 3) throw ConfigError(where + ": expected from:to:count");
        const double count = parseDouble(parts[2], where);
        if (count != std::floor(count) || count < 1 || count > 1e6)
            throw ConfigError(where + ": count must be a positive integer");
        return sweepFromRange(std::string(param), parseDouble(parts[0], where), parseDouble(parts[1], where),
                              static_cast<int>(count));
    }
    SweepSpec s{std::string(param), {}};
    std::size_t start = 0;
    while (start <= range.size()) {
        const std::size_t pos = std::min(range.find(',', start), range.size());
        s.values.push_back(parseDouble(range.substr(start, pos - start), where));
        start = pos + 1;
    }
    std::sort(s.values.begin(), s.values.end());
    return s;
}

JobConfig parseConfig(const json& j)
{
    allowOnly(j, {"problem", "method", "n", "steps", "polish", "sweep", "output", "export"}, "config");
    JobConfig cfg;
    if (!j.contains("problem")) throw ConfigError("config: 'problem' is required");
    cfg.problem = parseProblem(j["problem"]);
    if (j.contains("method")) cfg.method = parseMethod(text(j["method"], "method"));
    if (j.contains("n")) cfg.n = integer(j["n"], "n");
    if (j.contains("steps")) cfg.steps = integer(j["steps"], "steps");
    if (j.contains("polish")) {
        if (!j["polish"].is_boolean()) throw ConfigError("polish: expected true or false");
        cfg.polish = j["polish"].get<bool>();
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        allowOnly(s, {"param", "from", "to", "count", "values"}, "sweep");
        if (!s.contains("param")) throw ConfigError("sweep: 'param' is required");
        const std::string param = text(s["param"], "sweep.param");
        if (s.contains("values")) {
            if (s.contains("from") || s.contains("to") || s.contains("count"))
                throw ConfigError("sweep: give either values or from/to/count");
            if (!s["values"].is_array() || s["values"].empty())
                throw ConfigError("sweep.values: expected a non-empty array");
            SweepSpec spec{param, {}};
            for (const auto& v : s["values"]) spec.values.push_back(number(v, "sweep.values"));
            std::sort(spec.values.begin(), spec.values.end());
            cfg.sweep = spec;
        } else {
            for (const char* key : {"from", "to", "count"})
                if (!s.contains(key)) throw ConfigError(std::string("sweep: missing '") + key + "'");
            cfg.sweep = sweepFromRange(param, number(s["from"], "sweep.from"), number(s["to"], "sweep.to"),
                                       integer(s["count"], "sweep.count"));
        }
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        allowOnly(o, {"path", "format"}, "output");
        if (o.contains("path")) cfg.output.path = text(o["path"], "output.path");
        if (o.contains("format")) cfg.output.format = parseFormat(text(o["format"], "output.format"));
    }
    if (j.contains("export")) {
        const json& e = j["export"];
        allowOnly(e, {"periods", "points_per_period", "branch", "gauge"}, "export");
        if (e.contains("periods")) cfg.exportSpec.periods = integer(e["periods"], "export.periods");
        if (e.contains("points_per_period"))
            cfg.exportSpec.pointsPerPeriod = integer(e["points_per_period"], "export.points_per_period");
        if (e.contains("branch")) cfg.exportSpec.branch = parseBranch(text(e["branch"], "export.branch"));
        if (e.contains("gauge")) cfg.exportSpec.gauge = parseGauge(text(e["gauge"], "export.gauge"));
    }
    validate(cfg);
    return cfg;
}

json toJson(const JobConfig& cfg)
{
    json j = {{"problem", problemJson(cfg.problem)},
              {"method", toString(cfg.method)},
              {"n", cfg.n},
              {"steps", cfg.steps},
              {"polish", cfg.polish}};
    if (cfg.sweep) j["sweep"] = {{"param", cfg.sweep->param}, {"values", cfg.sweep->values}};
    j["output"] = {{"format", toString(cfg.output.format)}};
    if (!cfg.output.path.empty()) j["output"]["path"] = cfg.output.path;
    j["export"] = {{"periods", cfg.exportSpec.periods},
                   {"points_per_period", cfg.exportSpec.pointsPerPeriod},
                   {"branch", toString(cfg.exportSpec.branch)},
                   {"gauge", toString(cfg.exportSpec.gauge)}};
    return j;
}

Problem resolveProblem(const ProblemSource& source)
{
    if (source.inlineProblem) return *source.inlineProblem;
    try {
        return catalog(source.catalogName, source.params);
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

void validate(const JobConfig& cfg)
{
    if (cfg.n < 1 || cfg.n > 64) throw ConfigError("n must be between 1 and 64");
    if (cfg.steps < 16) throw ConfigError("steps must be >= 16");
    if (cfg.steps > 100000000) throw ConfigError("steps must be <= 1e8");
    if (cfg.exportSpec.periods < 1) throw ConfigError("export.periods must be >= 1");
    if (cfg.exportSpec.pointsPerPeriod < 3) throw ConfigError("export.points_per_period must be >= 3");
    if (cfg.problem.inlineProblem && cfg.problem.catalogName.size())
        throw ConfigError("problem: exactly one source is allowed");
    if (cfg.sweep) {
        if (cfg.problem.inlineProblem) throw ConfigError("sweep: only catalog problems have parameters");
        const auto entries = catalogEntries();
        auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const CatalogEntry& e) { return e.name == cfg.problem.catalogName; });
        if (it == entries.end())
            throw ConfigError("unknown catalog problem '" + cfg.problem.catalogName + "'");
        const bool known = std::any_of(it->parameters.begin(), it->parameters.end(),
                                       [&](const auto& p) { return p.first == cfg.sweep->param; });
        if (!known) throw ConfigError("sweep: problem '" + it->name + "' has no parameter '" + cfg.sweep->param + "'");
        if (cfg.sweep->values.empty()) throw ConfigError("sweep: no grid values");
    }
    // catalog names and parameter values are checked eagerly
    (void)resolveProblem(cfg.problem);
}

namespace {

Complex larger(const std::array<Complex, 2>& x) { return x[0].real() >= x[1].real() ? x[0] : x[1]; }

/// The scalar equation the HB solver works on.
ScalarODE scalarFor(const Problem& problem)
{
    if (const auto* ode = std::get_if<ScalarODE>(&problem)) return *ode;
    return systemToScalar(std::get<PlanarSystem>(problem));
}

PeriodicField fieldFor(const Problem& problem)
{
    if (const auto* ode = std::get_if<ScalarODE>(&problem)) return fieldOf(*ode);
    return fieldOf(std::get<PlanarSystem>(problem));
}

std::optional<PlanarSystem> systemFor(const Problem& problem)
{
    if (const auto* sys = std::get_if<PlanarSystem>(&problem)) return *sys;
    const auto& ode = std::get<ScalarODE>(problem);
    if (!ode.hasConstantLeading()) return std::nullopt;
    return scalarToSystem(ode);
}

void requireNonVanishingLead(const ScalarODE& ode)
{
    constexpr int kSamples = 4096;
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kSamples; ++i) lo = std::min(lo, std::abs(ode.p().evaluate(ode.period() * i / kSamples)));
    if (!(lo > 1e-8 * ode.p().maxAbsCoefficient()))
        throw DegenerateProblem("the leading coefficient vanishes; no reference trajectory");
}

struct Comparison {
    std::vector<double> grid;
    std::vector<Complex> approx;
    std::vector<Complex> reference;
};

// x_A next to the trajectory with the same x(0) and x'(0)
Comparison compareWithReference(const ScalarODE& ode, const FloquetSolution& sol, int periods, int pointsPerPeriod,
                                 int stepsPerPeriod)
{
    requireNonVanishingLead(ode);
    const double period = ode.period();
    Comparison c;
    const int count = periods * pointsPerPeriod + 1;
    c.grid.resize(count);
    for (int i = 0; i < count; ++i) c.grid[i] = period * i / pointsPerPeriod;
    c.approx = reconstruct(sol, c.grid);

    const Complex x0 = sol.valueAt(0.0);
    const Complex v0 = sol.derivativeAt(0.0);
    const PeriodicField field = fieldOf(ode);
    const auto re = referenceSolution(field, Vec2(x0.real(), v0.real()), c.grid, stepsPerPeriod);
    const auto im = referenceSolution(field, Vec2(x0.imag(), v0.imag()), c.grid, stepsPerPeriod);
    c.reference.resize(count);
    for (int i = 0; i < count; ++i) c.reference[i] = {re[i][0], im[i][0]};
    return c;
}

const FloquetSolution& branchOf(const ExponentPair& pair, Branch branch)
{
    const bool firstDecays = pair.first.lambda.real() <= pair.second.lambda.real();
    if (branch == Branch::Decaying) return firstDecays ? pair.first : pair.second;
    return firstDecays ? pair.second : pair.first;
}

std::pair<FloquetSolution, Gauge> inGauge(const FloquetSolution& sol, Gauge gauge)
{
    if (gauge == Gauge::UnitCosine) {
        try {
            return {rescaledToUnitCosine(sol), Gauge::UnitCosine};
        } catch (const DegenerateProblem&) {
            // cos(wt) absent from the periodic factor: keep the solver's gauge
        }
    }
    return {sol, Gauge::MaxCoefficient};
}

double firstPeriodS2(const Comparison& c, int pointsPerPeriod, double period)
{
    SampledFunction xa{{c.grid.begin(), c.grid.begin() + pointsPerPeriod + 1},
                       {c.approx.begin(), c.approx.begin() + pointsPerPeriod + 1}};
    SampledFunction xe{xa.t, {c.reference.begin(), c.reference.begin() + pointsPerPeriod + 1}};
    return secondMoment(xa, xe, period);
}

constexpr int kRowPointsPerPeriod = 1024;

}  // namespace

std::optional<Complex> Row::lambdaExact() const
{
    if (!reference) return std::nullopt;
    return larger(reference->exponents);
}

std::optional<Complex> Row::lambdaHb() const
{
    if (!hb) return std::nullopt;
    return larger({hb->pair.first.lambda, hb->pair.second.lambda});
}

std::optional<Complex> Row::lambdaNum() const
{
    if (!monodromy) return std::nullopt;
    return larger(monodromy->exponents);
}

bool Report::ok() const
{
    return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.ok(); });
}

Row solveRow(const JobConfig& cfg, const Problem& problem, std::optional<double> paramValue)
{
    const auto start = std::chrono::steady_clock::now();
    Row row;
    row.paramValue = paramValue;
    const bool wantHb = cfg.method == Method::Hb || cfg.method == Method::All;
    const bool wantMonodromy = cfg.method == Method::Monodromy || cfg.method == Method::All;
    const int referenceSteps = 10 * cfg.steps;

    std::optional<ScalarODE> ode;
    try {
        ode = scalarFor(problem);
    } catch (const Error& e) {
        if (wantHb) row.errors.push_back(std::string("hb: ") + e.what());
        else row.notes.push_back(std::string("scalar form: ") + e.what());
    }

    if (wantHb && ode) {
        try {
            HbOutcome hb;
            hb.pair = selectExponents(*ode, cfg.n, SelectOptions{cfg.polish});
            std::tie(hb.gaugeSolution, hb.gauge) = inGauge(branchOf(hb.pair, Branch::Decaying), Gauge::UnitCosine);
            try {
                const Comparison c =
                    compareWithReference(*ode, hb.gaugeSolution, 1, kRowPointsPerPeriod, referenceSteps);
                hb.s2 = firstPeriodS2(c, kRowPointsPerPeriod, ode->period());
            } catch (const Error& e) {
                row.notes.push_back(std::string("S2: ") + e.what());
            }
            row.hb = std::move(hb);
        } catch (const Error& e) {
            row.errors.push_back(std::string("hb: ") + e.what());
        }
    }

    try {
        row.reference = monodromyMatrix(fieldFor(problem), referenceSteps);
    } catch (const Error& e) {
        row.notes.push_back(std::string("reference: ") + e.what());
    }

    if (wantMonodromy) {
        try {
            row.monodromy = monodromyMatrix(fieldFor(problem), cfg.steps);
        } catch (const Error& e) {
            row.errors.push_back(std::string("monodromy: ") + e.what());
        }
    }

    const std::optional<PlanarSystem> sys = systemFor(problem);
    std::optional<CommutingSystem> cs;
    if (sys) cs = detectStructure(*sys);
    if (cs) {
        if (cfg.method == Method::Commuting || cfg.method == Method::All) {
            row.commuting = CommutingOutcome{*cs, closedFormExponents(*cs), averageMatrixExponents(*sys),
                                             classify(*cs), verifyCommutation(*sys)};
        }
    } else if (cfg.method == Method::Commuting) {
        row.errors.push_back("commuting: the system does not commute with its integral");
    }

    if (ode && ode->hasConstantLeading()) {
        try {
            const HillForm hill = hillTransform(*ode);
            row.boundedness = boundednessCriterion(hill.f);
        } catch (const Error& e) {
            row.notes.push_back(std::string("boundedness: ") + e.what());
        }
    }

    if (cfg.timing) {
        const auto stop = std::chrono::steady_clock::now();
        row.elapsedMs = std::chrono::duration<double, std::milli>(stop - start).count();
    }
    return row;
}

Report runJob(const JobConfig& cfg)
{
    validate(cfg);
    Report report{cfg, {}};
    report.rows.push_back(solveRow(cfg, resolveProblem(cfg.problem)));
    return report;
}

Report runSweep(const JobConfig& cfg, int jobs)
{
    validate(cfg);
    if (!cfg.sweep) throw ConfigError("sweep: no sweep block in the configuration");
    const std::vector<double>& values = cfg.sweep->values;
    Report report{cfg, std::vector<Row>(values.size())};

    auto solveAt = [&](std::size_t i) {
        ParameterMap params = cfg.problem.params;
        params[cfg.sweep->param] = values[i];
        try {
            report.rows[i] = solveRow(cfg, catalog(cfg.problem.catalogName, params), values[i]);
        } catch (const std::exception& e) {
            Row failed;
            failed.paramValue = values[i];
            failed.errors.push_back(e.what());
            report.rows[i] = std::move(failed);
        }
    };

    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    jobs = std::min<int>(jobs, static_cast<int>(values.size()));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < values.size(); ++i) solveAt(i);
        return report;
    }
    // each worker writes only its own rows, so the merge is already ordered
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < values.size();) solveAt(i);
        });
    for (auto& t : workers) t.join();
    return report;
}

ExportResult exportSolution(const JobConfig& cfg)
{
    validate(cfg);
    const Problem problem = resolveProblem(cfg.problem);
    const ScalarODE ode = scalarFor(problem);
    const ExponentPair pair = selectExponents(ode, cfg.n, SelectOptions{cfg.polish});

    ExportResult out;
    std::tie(out.solution, out.gauge) = inGauge(branchOf(pair, cfg.exportSpec.branch), cfg.exportSpec.gauge);
    const int ppp = cfg.exportSpec.pointsPerPeriod;
    const Comparison c = compareWithReference(ode, out.solution, cfg.exportSpec.periods, ppp, 10 * cfg.steps);

    out.samples.reserve(c.grid.size());
    for (std::size_t i = 0; i < c.grid.size(); ++i) out.samples.push_back({c.grid[i], c.approx[i], c.reference[i]});

    out.s2 = firstPeriodS2(c, ppp, ode.period());
    double maxDiff = 0.0, maxRef = 0.0, sumDiff = 0.0, sumRef = 0.0;
    for (int i = 0; i <= ppp; ++i) {
        const double d = std::abs(c.approx[i] - c.reference[i]);
        const double r = std::abs(c.reference[i]);
        maxDiff = std::max(maxDiff, d);
        maxRef = std::max(maxRef, r);
        // the closing sample repeats t = 0 up to one period of evolution; leave it out of the mean
        if (i < ppp) {
            sumDiff += d * d;
            sumRef += r * r;
        }
    }
    out.maxRelative = maxRef > 0.0 ? maxDiff / maxRef : 0.0;
    out.rmsRelative = sumRef > 0.0 ? std::sqrt(sumDiff / sumRef) : 0.0;
    return out;
}

}  // namespace floquet::app

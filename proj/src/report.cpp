#include "floquet/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "floquet/error.hpp"

namespace floquet::app {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csvField(const std::optional<double>& v) { return v ? g17(*v) : std::string(); }

std::string csvQuoted(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json optionalComplex(const std::optional<Complex>& c) { return c ? toJson(*c) : json(nullptr); }

json pairJson(const std::array<Complex, 2>& p) { return json::array({toJson(p[0]), toJson(p[1])}); }

}  // namespace

json toJson(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

json toJson(const FloquetSolution& sol)
{
    return {{"lambda_re", sol.lambda.real()},
            {"lambda_im", sol.lambda.imag()},
            {"hb_root", toJson(sol.hbLambda)},
            {"E", sol.residual},
            {"n", sol.order},
            {"multiplicity", sol.multiplicity},
            {"degenerate_null_space", sol.degenerateNullSpace},
            {"eta", toJson(sol.eta)}};
}

json toJson(const MonodromyResult& m)
{
    return {{"C", {{m.C(0, 0), m.C(0, 1)}, {m.C(1, 0), m.C(1, 1)}}},
            {"multipliers", pairJson(m.multipliers)},
            {"exponents", pairJson(m.exponents)},
            {"steps", m.steps},
            {"defective", m.defective}};
}

json toJson(const Row& row, const std::string& paramName)
{
    json j;
    if (row.paramValue) j["param"] = {{"name", paramName}, {"value", *row.paramValue}};
    j["status"] = row.ok() ? "ok" : "failed";
    j["errors"] = row.errors;
    j["notes"] = row.notes;
    j["lambda_e"] = optionalComplex(row.lambdaExact());
    j["lambda_A"] = optionalComplex(row.lambdaHb());
    j["lambda_num"] = optionalComplex(row.lambdaNum());
    j["S2"] = row.hb && row.hb->s2 ? json(*row.hb->s2) : json(nullptr);
    j["E"] = row.hb ? json(row.hb->gaugeSolution.residual) : json(nullptr);
    if (row.hb) {
        const auto& hb = *row.hb;
        j["hb"] = {{"n", hb.pair.first.order},
                   {"exponents", json::array({toJson(hb.pair.first), toJson(hb.pair.second)})},
                   {"double_exponent", hb.pair.doubleExponent},
                   {"expected_sum", toJson(hb.pair.expectedSum)},
                   {"gauge", toString(hb.gauge)},
                   {"gauge_solution", toJson(hb.gaugeSolution)},
                   {"candidates", hb.pair.candidates.size()}};
    }
    if (row.monodromy) j["monodromy"] = toJson(*row.monodromy);
    if (row.reference) j["reference"] = toJson(*row.reference);
    if (row.commuting) {
        const auto& c = *row.commuting;
        j["commuting"] = {{"alpha", c.system.alpha},
                          {"beta", c.system.beta},
                          {"gamma", toJson(c.system.gamma)},
                          {"exponents", pairJson(c.exponents)},
                          {"average_exponents", pairJson(c.averageExponents)},
                          {"classification", toString(c.classification)},
                          {"commutator_norm", c.commutatorNorm}};
    }
    j["boundedness"] = row.boundedness ? json(toString(*row.boundedness)) : json(nullptr);
    if (row.elapsedMs) j["timing_ms"] = *row.elapsedMs;
    return j;
}

json toJson(const Report& report)
{
    const std::string param = report.config.sweep ? report.config.sweep->param : std::string();
    json rows = json::array();
    for (const auto& r : report.rows) rows.push_back(toJson(r, param));
    return {{"config", toJson(report.config)},
            {"rows", rows},
            {"meta", {{"program", "floquet"}, {"version", kVersion}, {"ok", report.ok()}}}};
}

std::string toCsv(const Report& report)
{
    const std::string param = report.config.sweep ? report.config.sweep->param : "param";
    std::string out = param +
                      ",status,lambda_e_re,lambda_e_im,lambda_A_re,lambda_A_im,lambda_num_re,lambda_num_im,S2,E,"
                      "hb1_re,hb1_im,hb2_re,hb2_im,boundedness,message\n";
    for (const auto& r : report.rows) {
        auto re = [](const std::optional<Complex>& c) { return c ? g17(c->real()) : std::string(); };
        auto im = [](const std::optional<Complex>& c) { return c ? g17(c->imag()) : std::string(); };
        const auto e = r.lambdaExact();
        const auto a = r.lambdaHb();
        const auto m = r.lambdaNum();
        std::optional<Complex> h1, h2;
        std::optional<double> s2, energy;
        if (r.hb) {
            h1 = r.hb->pair.first.lambda;
            h2 = r.hb->pair.second.lambda;
            s2 = r.hb->s2;
            energy = r.hb->gaugeSolution.residual;
        }
        std::string message;
        for (const auto& err : r.errors) message += (message.empty() ? "" : "; ") + err;
        out += csvField(r.paramValue) + "," + (r.ok() ? "ok" : "failed") + "," + re(e) + "," + im(e) + "," +
               re(a) + "," + im(a) + "," + re(m) + "," + im(m) + "," + csvField(s2) + "," + csvField(energy) + "," +
               re(h1) + "," + im(h1) + "," + re(h2) + "," + im(h2) + "," +
               (r.boundedness ? std::string(toString(*r.boundedness)) : std::string()) + "," + csvQuoted(message) +
               "\n";
    }
    return out;
}

std::string exportCsv(const ExportResult& result)
{
    std::string out = "t,re_x_A,im_x_A,re_x_ref,im_x_ref,abs_diff\n";
    for (const auto& s : result.samples) {
        out += g17(s.t) + "," + g17(s.approx.real()) + "," + g17(s.approx.imag()) + "," + g17(s.reference.real()) +
               "," + g17(s.reference.imag()) + "," + g17(std::abs(s.approx - s.reference)) + "\n";
    }
    return out;
}

json exportSummary(const ExportResult& result, const JobConfig& cfg)
{
    return {{"config", toJson(cfg)},
            {"solution", toJson(result.solution)},
            {"gauge", toString(result.gauge)},
            {"x0", toJson(result.solution.valueAt(0.0))},
            {"dx0", toJson(result.solution.derivativeAt(0.0))},
            {"S2", result.s2},
            {"max_relative_deviation", result.maxRelative},
            {"rms_relative_deviation", result.rmsRelative},
            {"samples", result.samples.size()}};
}

json catalogJson()
{
    json list = json::array();
    for (const auto& e : catalogEntries()) {
        json params = json::object();
        for (const auto& [name, value] : e.parameters) params[name] = value;
        list.push_back({{"name", e.name}, {"description", e.description}, {"parameters", params}});
    }
    return list;
}

void writeOutput(const std::string& path, const std::string& content)
{
    if (path.empty()) {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to standard output");
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    file << content;
    file.close();
    if (!file) throw IoError("error while writing '" + path + "'");
}

}  // namespace floquet::app

#include "cyclone/json_io.hpp"

#include "cyclone/format.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cyclone {

using nlohmann::json;

namespace {

double require_number(const json& j, const std::string& ctx, const char* field) {
    if (!j.contains(field))
        throw std::invalid_argument("spec: missing field '" + ctx + field + "'");
    const auto& v = j.at(field);
    if (!v.is_number())
        throw std::invalid_argument("spec: field '" + ctx + field + "' must be a number");
    return v.get<double>();
}

RegulationFunction parse_function(const json& j, int index) {
    const std::string ctx = "functions[" + std::to_string(index + 1) + "].";
    if (!j.is_object())
        throw std::invalid_argument("spec: functions[" + std::to_string(index + 1) +
                                    "] must be an object");
    if (!j.contains("kind"))
        throw std::invalid_argument("spec: missing field '" + ctx + "kind'");
    const std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "hill")
            return RegulationFunction::hill(require_number(j, ctx, "lambda"),
                                            require_number(j, ctx, "r"));
        if (kind == "affine")
            return RegulationFunction::affine(require_number(j, ctx, "a"),
                                              require_number(j, ctx, "b"));
        if (kind == "shifted_hill")
            return RegulationFunction::shifted_hill(require_number(j, ctx, "lambda"),
                                                    require_number(j, ctx, "r"),
                                                    require_number(j, ctx, "shift"));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("spec: functions[" + std::to_string(index + 1) +
                                    "]: " + e.what());
    }
    throw std::invalid_argument("spec: field '" + ctx +
                                "kind' must be one of hill, affine, shifted_hill");
}

json number_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

json to_json_obj(const RegimeThresholds& th) {
    json j;
    j["t_odd"] = number_or_null(th.t_odd);
    j["t_even"] = th.t_even ? json(*th.t_even) : json(nullptr);
    j["non_hyperbolic_p"] = th.non_hyperbolic_p;
    return j;
}

json to_json_obj(const ReportDefaults& defaults) {
    return json{{"tol", defaults.tol},
                {"rel_tol", defaults.rel_tol},
                {"t_end", defaults.t_end},
                {"transient", defaults.transient}};
}

json to_json_obj(const RegulationFunction& f) {
    json j;
    switch (f.kind()) {
    case RegulationKind::Hill:
        j["kind"] = "hill";
        j["lambda"] = f.lambda();
        j["r"] = f.r();
        break;
    case RegulationKind::ShiftedHill:
        j["kind"] = "shifted_hill";
        j["lambda"] = f.lambda();
        j["r"] = f.r();
        j["shift"] = f.shift();
        break;
    case RegulationKind::Affine:
        j["kind"] = "affine";
        j["a"] = f.a();
        j["b"] = f.b();
        break;
    }
    return j;
}

const char* convexity_name(ConvexityClass c) {
    switch (c) {
    case ConvexityClass::StrictlyConvex: return "StrictlyConvex";
    case ConvexityClass::Convex: return "Convex";
    case ConvexityClass::Violated: return "Violated";
    }
    return "Violated";
}

json to_json_obj(const Equilibrium& eq, const SpectrumReport& sp) {
    json eigen = json::array();
    for (const auto& lam : sp.eigenvalues) eigen.push_back({lam.real(), lam.imag()});
    return json{{"x_bar", eq.x_bar},
                {"p", eq.p},
                {"g", eq.g},
                {"residual", eq.residual},
                {"degenerate", eq.degenerate},
                {"spectrum",
                 {{"eigenvalues", eigen},
                  {"n_negative", sp.n_negative},
                  {"n_positive", sp.n_positive},
                  {"n_zero", sp.n_zero},
                  {"hyperbolic", sp.hyperbolic},
                  {"stable_dim", sp.stable_dim}}}};
}

} // namespace

ParsedSpec parse_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("spec: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("spec: top level must be an object");
    if (!j.contains("d")) throw std::invalid_argument("spec: missing field 'd'");
    if (!j.at("d").is_number_integer())
        throw std::invalid_argument("spec: field 'd' must be an integer");
    ParsedSpec spec;
    spec.d = j.at("d").get<int>();
    if (spec.d < 2) throw std::invalid_argument("spec: field 'd' must be >= 2");

    if (!j.contains("functions") || !j.at("functions").is_array())
        throw std::invalid_argument("spec: field 'functions' must be an array");
    if (!j.contains("alpha") || !j.at("alpha").is_array())
        throw std::invalid_argument("spec: field 'alpha' must be an array");
    const auto& funcs = j.at("functions");
    const auto& alpha = j.at("alpha");
    if (static_cast<int>(funcs.size()) != spec.d)
        throw std::invalid_argument("spec: 'functions' length must equal 'd'");
    if (static_cast<int>(alpha.size()) != spec.d)
        throw std::invalid_argument("spec: 'alpha' length must equal 'd'");

    for (int i = 0; i < spec.d; ++i)
        spec.functions.push_back(parse_function(funcs[static_cast<size_t>(i)], i));
    for (int i = 0; i < spec.d; ++i) {
        const auto& v = alpha[static_cast<size_t>(i)];
        if (!v.is_number())
            throw std::invalid_argument("spec: alpha[" + std::to_string(i + 1) +
                                        "] must be a number");
        const double a = v.get<double>();
        if (!(a > 0.0))
            throw std::invalid_argument("spec: alpha[" + std::to_string(i + 1) +
                                        "] must be > 0");
        spec.alpha.push_back(a);
    }
    if (j.contains("hypotheses_check")) {
        if (!j.at("hypotheses_check").is_boolean())
            throw std::invalid_argument("spec: field 'hypotheses_check' must be a boolean");
        spec.hypotheses_check = j.at("hypotheses_check").get<bool>();
    }
    return spec;
}

CyclicNetwork parse_network(const std::string& json_text, bool* hypotheses_check) {
    ParsedSpec spec = parse_spec(json_text);
    if (hypotheses_check) *hypotheses_check = spec.hypotheses_check;
    return CyclicNetwork(std::move(spec.functions), std::move(spec.alpha));
}

SweepSpec parse_sweep(const std::string& json_text, int d) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("sweep: not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("axes") || !j.at("axes").is_array())
        throw std::invalid_argument("sweep: field 'axes' must be an array");
    SweepSpec spec;
    if (j.contains("tol")) spec.tol = j.at("tol").get<double>();
    for (const auto& ja : j.at("axes")) {
        SweepAxis axis;
        if (!ja.contains("indices") || !ja.at("indices").is_array())
            throw std::invalid_argument("sweep: axis field 'indices' must be an array");
        for (const auto& idx : ja.at("indices")) {
            const int i = idx.get<int>();
            if (i < 1 || i > d)
                throw std::invalid_argument("sweep: axis index " + std::to_string(i) +
                                            " out of range 1.." + std::to_string(d));
            axis.indices.push_back(i - 1);
        }
        axis.lo = require_number(ja, "axes[].", "lo");
        axis.hi = require_number(ja, "axes[].", "hi");
        if (!ja.contains("res") || !ja.at("res").is_number_integer())
            throw std::invalid_argument("sweep: axis field 'res' must be an integer");
        axis.resolution = ja.at("res").get<int>();
        spec.axes.push_back(std::move(axis));
    }
    return spec;
}

VerifyReport build_verify_report(const ParsedSpec& spec) {
    VerifyReport rep;
    rep.d = spec.d;
    rep.all_convex = true;
    double d_value = 1.0;
    for (const auto& f : spec.functions) {
        FunctionReport fr{f, check_gamma_half_convex(f)};
        rep.all_convex = rep.all_convex && fr.certificate.cls != ConvexityClass::Violated;
        rep.any_strictly_convex =
            rep.any_strictly_convex || fr.certificate.cls == ConvexityClass::StrictlyConvex;
        rep.any_bounded = rep.any_bounded || f.bounded();
        if (f.is_decreasing()) ++rep.n;
        d_value *= f.log_sensitivity_sup();
        rep.functions.push_back(std::move(fr));
    }
    rep.d_value = d_value;
    rep.thresholds = thresholds(spec.d);
    rep.certified = rep.all_convex && rep.any_strictly_convex && rep.any_bounded;

    const bool even = rep.n % 2 == 0;
    std::ostringstream assessment;
    if (even) {
        if (rep.d_value < 1.0)
            assessment << "unique equilibrium, globally asymptotically stable for every alpha";
        else if (rep.d >= 5 && rep.thresholds.t_even && rep.d_value > *rep.thresholds.t_even)
            assessment << "bistability possible; periodic solutions possible";
        else if (rep.d_value > 1.0)
            assessment << "bistability possible";
        else
            assessment << "boundary case: sensitivity product equals 1";
    } else {
        if (rep.d == 2 || rep.d_value < rep.thresholds.t_odd)
            assessment << "unique equilibrium, asymptotically stable for every alpha";
        else if (rep.d_value > rep.thresholds.t_odd)
            assessment << "oscillation possible";
        else
            assessment << "boundary case: sensitivity product equals the odd threshold";
    }
    if (!rep.certified) assessment << " (hypotheses not certified)";
    rep.assessment = assessment.str();
    return rep;
}

std::string to_json(const VerifyReport& rep, const ReportDefaults& defaults) {
    json j;
    j["certified"] = rep.certified;
    j["all_gamma_half_convex"] = rep.all_convex;
    j["any_strictly_convex"] = rep.any_strictly_convex;
    j["any_bounded"] = rep.any_bounded;
    j["d"] = rep.d;
    j["n"] = rep.n;
    j["parity"] = rep.n % 2 == 0 ? "even" : "odd";
    j["D"] = number_or_null(rep.d_value);
    j["thresholds"] = to_json_obj(rep.thresholds);
    j["assessment"] = rep.assessment;
    json funcs = json::array();
    for (size_t i = 0; i < rep.functions.size(); ++i) {
        const auto& fr = rep.functions[i];
        json jf = to_json_obj(fr.f);
        jf["index"] = i + 1;
        jf["monotone"] = fr.f.is_decreasing() ? "decreasing" : "increasing";
        jf["bounded"] = fr.f.bounded();
        jf["log_sensitivity_sup"] = fr.f.log_sensitivity_sup();
        json cert;
        cert["class"] = convexity_name(fr.certificate.cls);
        cert["grid_lo"] = fr.certificate.lo;
        cert["grid_hi"] = fr.certificate.hi;
        cert["grid_points"] = fr.certificate.grid_points;
        cert["tol"] = fr.certificate.tol;
        cert["max_schwarzian"] = fr.certificate.max_schwarzian;
        if (fr.certificate.cls == ConvexityClass::Violated)
            cert["witness"] = fr.certificate.witness;
        jf["convexity"] = cert;
        funcs.push_back(std::move(jf));
    }
    j["functions"] = funcs;
    j["defaults"] = to_json_obj(defaults);
    return j.dump(2) + "\n";
}

std::string to_json(const RegimeReport& rep, const ReportDefaults& defaults) {
    json j;
    j["branch"] = std::string(branch_name(rep.branch));
    j["d"] = rep.d;
    j["n"] = rep.n;
    j["parity"] = rep.n % 2 == 0 ? "even" : "odd";
    j["D"] = number_or_null(rep.d_value);
    j["thresholds"] = to_json_obj(rep.thresholds);
    json eqs = json::array();
    for (size_t i = 0; i < rep.equilibria.size(); ++i)
        eqs.push_back(to_json_obj(rep.equilibria[i], rep.spectra[i]));
    j["equilibria"] = eqs;
    j["search_bound"] = rep.search_bound;
    j["search_bound_amplified"] = rep.search_bound_amplified;
    j["defaults"] = to_json_obj(defaults);
    return j.dump(2) + "\n";
}

std::string attractor_to_json(const AttractorReport& rep, const std::vector<double>& x0,
                              const ReportDefaults& defaults) {
    json j;
    j["kind"] = std::string(attractor_kind_name(rep.kind));
    j["x0"] = x0;
    j["transient_time"] = rep.transient_time;
    j["t_end_used"] = rep.t_end_used;
    if (rep.kind == AttractorKind::ConvergedToEquilibrium)
        j["equilibrium_index"] = rep.equilibrium_index;
    if (rep.kind == AttractorKind::PeriodicOrbit) {
        j["period"] = rep.period;
        j["amplitude"] = rep.amplitude;
        j["poincare_residual"] = rep.poincare_residual;
    }
    j["defaults"] = to_json_obj(defaults);
    return j.dump(2) + "\n";
}

std::string brackets_to_json(const std::vector<TransitionBracket>& brackets) {
    json arr = json::array();
    for (const auto& b : brackets)
        arr.push_back({{"axis_low", b.axis_low},
                       {"axis_high", b.axis_high},
                       {"branch_low", b.branch_low},
                       {"branch_high", b.branch_high}});
    return json{{"brackets", arr}}.dump(2) + "\n";
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string csv = "t";
    for (int i = 1; i <= traj.dimension(); ++i) csv += ",x" + std::to_string(i);
    csv += '\n';
    for (std::size_t k = 0; k < traj.size(); ++k) {
        csv += format_double17(traj.time(k));
        const auto x = traj.state(k);
        for (int i = 0; i < traj.dimension(); ++i) {
            csv += ',';
            csv += format_double17(x[static_cast<size_t>(i)]);
        }
        csv += '\n';
    }
    return csv;
}

} // namespace cyclone

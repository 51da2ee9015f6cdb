#include "cyclone/cyclone.h"

#include "cyclone/atlas.hpp"
#include "cyclone/dynamics.hpp"
#include "cyclone/errors.hpp"
#include "cyclone/json_io.hpp"
#include "cyclone/network.hpp"
#include "cyclone/stability.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct cyclone_network {
    cyclone::CyclicNetwork net;
    bool hypotheses_check = false;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
cyclone_status guard(Fn&& fn) {
    try {
        fn();
        return CYCLONE_OK;
    } catch (const cyclone::HypothesisViolation& e) {
        g_last_error = e.what();
        return CYCLONE_ERROR_HYPOTHESIS;
    } catch (const cyclone::ConvergenceFailure& e) {
        g_last_error = e.what();
        return CYCLONE_ERROR_NUMERIC;
    } catch (const cyclone::SuspectCount& e) {
        g_last_error = e.what();
        return CYCLONE_ERROR_NUMERIC;
    } catch (const cyclone::StepSizeUnderflow& e) {
        g_last_error = e.what();
        return CYCLONE_ERROR_NUMERIC;
    } catch (const cyclone::SingularDerivative& e) {
        g_last_error = e.what();
        return CYCLONE_ERROR_NUMERIC;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return CYCLONE_ERROR_INVALID_INPUT;
    } catch (const std::domain_error& e) {
        g_last_error = e.what();
        return CYCLONE_ERROR_INVALID_INPUT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CYCLONE_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return CYCLONE_ERROR_INTERNAL;
    }
}

void run_hypotheses_check(const cyclone::CyclicNetwork& net) {
    for (const auto& f : net.functions()) {
        const auto cert = cyclone::check_gamma_half_convex(f);
        if (cert.cls == cyclone::ConvexityClass::Violated)
            throw cyclone::HypothesisViolation(
                "hypotheses_check: " + f.describe() +
                " violates gamma^{1/2}-convexity at x = " + std::to_string(cert.witness));
    }
}

} // namespace

extern "C" {

const char* cyclone_version(void) { return "cyclone 0.1.0"; }

const char* cyclone_last_error(void) { return g_last_error.c_str(); }

void cyclone_string_free(char* s) { std::free(s); }

cyclone_status cyclone_network_create(const char* spec_json, cyclone_network** out) {
    return guard([&] {
        if (!spec_json || !out) throw std::invalid_argument("network_create: null argument");
        *out = nullptr;
        bool check = false;
        cyclone::CyclicNetwork net = cyclone::parse_network(spec_json, &check);
        if (check) run_hypotheses_check(net);
        *out = new cyclone_network{std::move(net), check};
    });
}

void cyclone_network_destroy(cyclone_network* net) { delete net; }

int cyclone_network_dimension(const cyclone_network* net) {
    return net ? net->net.dimension() : 0;
}

int cyclone_network_decreasing_count(const cyclone_network* net) {
    return net ? net->net.decreasing_count() : 0;
}

double cyclone_network_sensitivity_product(const cyclone_network* net) {
    return net ? net->net.d_value() : 0.0;
}

cyclone_status cyclone_verify(const char* spec_json, int* certified, char** report_json) {
    return guard([&] {
        if (!spec_json) throw std::invalid_argument("verify: null spec");
        const cyclone::ParsedSpec spec = cyclone::parse_spec(spec_json);
        const cyclone::VerifyReport rep = cyclone::build_verify_report(spec);
        if (certified) *certified = rep.certified ? 1 : 0;
        if (report_json) *report_json = dup_string(cyclone::to_json(rep, {}));
    });
}

cyclone_status cyclone_analyze(const cyclone_network* net, double tol, char** report_json) {
    return guard([&] {
        if (!net || !report_json) throw std::invalid_argument("analyze: null argument");
        cyclone::ClassifyOptions opts;
        if (tol > 0.0) opts.tol = tol;
        const cyclone::RegimeReport rep = cyclone::classify_network(net->net, opts);
        cyclone::ReportDefaults defaults;
        defaults.tol = opts.tol;
        *report_json = dup_string(cyclone::to_json(rep, defaults));
    });
}

cyclone_status cyclone_simulate(const cyclone_network* net, const double* x0, size_t x0_len,
                                double t_end, double rel_tol, char** report_json,
                                char** trajectory_csv) {
    return guard([&] {
        if (!net || !x0) throw std::invalid_argument("simulate: null argument");
        if (x0_len != static_cast<size_t>(net->net.dimension()))
            throw std::invalid_argument("simulate: x0 length must equal the dimension");
        std::vector<double> start(x0, x0 + x0_len);
        for (double v : start)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("simulate: x0 must be nonnegative and finite");

        cyclone::IntegrateOptions iopts;
        if (rel_tol > 0.0) iopts.rel_tol = rel_tol;
        const double horizon = t_end > 0.0 ? t_end : 200.0;
        cyclone::Trajectory traj(net->net.dimension());
        const cyclone::AttractorReport rep = cyclone::simulate_and_detect(
            net->net, start, horizon, iopts, {}, nullptr, &traj);

        cyclone::ReportDefaults defaults;
        defaults.rel_tol = iopts.rel_tol;
        defaults.t_end = horizon;
        if (report_json)
            *report_json = dup_string(cyclone::attractor_to_json(rep, start, defaults));
        if (trajectory_csv) *trajectory_csv = dup_string(cyclone::trajectory_to_csv(traj));
    });
}

cyclone_status cyclone_sweep(const cyclone_network* net, const char* sweep_json,
                             char** table_csv, char** heatmap_svg, char** brackets_json) {
    return guard([&] {
        if (!net || !sweep_json) throw std::invalid_argument("sweep: null argument");
        if (table_csv) *table_csv = nullptr;
        if (heatmap_svg) *heatmap_svg = nullptr;
        if (brackets_json) *brackets_json = nullptr;
        const cyclone::SweepSpec spec =
            cyclone::parse_sweep(sweep_json, net->net.dimension());
        const cyclone::AtlasTable table = cyclone::run_sweep(net->net, spec);
        if (table_csv) *table_csv = dup_string(cyclone::emit_csv(table));
        if (spec.axes.size() == 2) {
            if (heatmap_svg) *heatmap_svg = dup_string(cyclone::emit_svg(table));
        } else if (brackets_json) {
            const auto brackets = cyclone::boundary_trace(net->net, spec, table);
            *brackets_json = dup_string(cyclone::brackets_to_json(brackets));
        }
    });
}

} // extern "C"

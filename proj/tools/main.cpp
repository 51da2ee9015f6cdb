// Command-line front end. Talks to the shared library exclusively through
// the C API in cyclone/cyclone.h; JSON is parsed here only for presentation.

#include <cyclone/cyclone.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

struct StringOut {
    char* ptr = nullptr;
    ~StringOut() { cyclone_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct NetworkHandle {
    cyclone_network* net = nullptr;
    ~NetworkHandle() { cyclone_network_destroy(net); }
};

int status_to_exit(cyclone_status s) {
    switch (s) {
    case CYCLONE_OK: return 0;
    case CYCLONE_ERROR_INVALID_INPUT: return 1;
    case CYCLONE_ERROR_HYPOTHESIS: return 2;
    case CYCLONE_ERROR_NUMERIC: return 3;
    case CYCLONE_ERROR_INTERNAL: return 3;
    }
    return 3;
}

int fail(cyclone_status s) {
    std::cerr << "cyclone: error: " << cyclone_last_error() << "\n";
    return status_to_exit(s);
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

bool write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << data;
    return out.good();
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("not a number: " + item);
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

bool parse_range(const std::string& text, double& lo, double& hi) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) return false;
    try {
        lo = std::stod(text.substr(0, colon));
        hi = std::stod(text.substr(colon + 1));
    } catch (...) {
        return false;
    }
    return true;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string fmt_vec(const json& arr) {
    std::string s = "(";
    for (size_t i = 0; i < arr.size(); ++i) {
        if (i) s += ", ";
        s += fmt(arr[i].get<double>());
    }
    return s + ")";
}

void render_analyze_table(const json& j, std::ostream& os) {
    os << "branch: " << j.at("branch").get<std::string>() << "\n";
    os << "d = " << j.at("d").get<int>() << ", n = " << j.at("n").get<int>() << " ("
       << j.at("parity").get<std::string>() << ")"
       << ", D = " << (j.at("D").is_null() ? "inf" : fmt(j.at("D").get<double>())) << "\n";
    const auto& th = j.at("thresholds");
    os << "t_odd = " << (th.at("t_odd").is_null() ? "inf" : fmt(th.at("t_odd").get<double>()));
    if (!th.at("t_even").is_null()) os << ", t_even = " << fmt(th.at("t_even").get<double>());
    os << "\n";
    const auto& eqs = j.at("equilibria");
    os << "equilibria (" << eqs.size() << "):\n";
    for (size_t i = 0; i < eqs.size(); ++i) {
        const auto& eq = eqs[i];
        const auto& sp = eq.at("spectrum");
        os << "  #" << i + 1 << "  x_bar = " << fmt_vec(eq.at("x_bar")) << "\n";
        os << "      p = " << fmt(eq.at("p").get<double>())
           << ", g = " << fmt(eq.at("g").get<double>())
           << ", residual = " << fmt(eq.at("residual").get<double>())
           << ", stable_dim = " << sp.at("stable_dim").get<int>();
        if (!sp.at("hyperbolic").get<bool>()) os << " [non-hyperbolic]";
        if (eq.at("degenerate").get<bool>()) os << " [degenerate]";
        os << "\n";
    }
}

int cmd_verify(const std::string& spec_path) {
    std::string spec;
    if (!read_file(spec_path, spec)) {
        std::cerr << "cyclone: cannot read " << spec_path << "\n";
        return 1;
    }
    int certified = 0;
    StringOut report;
    const cyclone_status s = cyclone_verify(spec.c_str(), &certified, &report.ptr);
    if (s != CYCLONE_OK) return fail(s);
    std::cout << report.str();
    return certified ? 0 : 2;
}

int cmd_analyze(const std::string& spec_path, double tol, bool as_json,
                const std::string& out_path) {
    std::string spec;
    if (!read_file(spec_path, spec)) {
        std::cerr << "cyclone: cannot read " << spec_path << "\n";
        return 1;
    }
    NetworkHandle h;
    cyclone_status s = cyclone_network_create(spec.c_str(), &h.net);
    if (s != CYCLONE_OK) return fail(s);
    StringOut report;
    s = cyclone_analyze(h.net, tol, &report.ptr);
    if (s != CYCLONE_OK) return fail(s);

    std::string rendered;
    if (as_json) {
        rendered = report.str();
    } else {
        std::ostringstream os;
        render_analyze_table(json::parse(report.str()), os);
        rendered = os.str();
    }
    if (!out_path.empty()) {
        if (!write_file(out_path, rendered)) {
            std::cerr << "cyclone: cannot write " << out_path << "\n";
            return 1;
        }
        std::cerr << "wrote " << out_path << "\n";
    } else {
        std::cout << rendered;
    }
    return 0;
}

int cmd_simulate(const std::string& spec_path, const std::string& x0_text, double t_end,
                 double rtol, const std::string& out_path) {
    std::string spec;
    if (!read_file(spec_path, spec)) {
        std::cerr << "cyclone: cannot read " << spec_path << "\n";
        return 1;
    }
    std::vector<double> x0;
    try {
        x0 = parse_double_list(x0_text);
    } catch (const std::exception& e) {
        std::cerr << "cyclone: bad --x0: " << e.what() << "\n";
        return 1;
    }
    NetworkHandle h;
    cyclone_status s = cyclone_network_create(spec.c_str(), &h.net);
    if (s != CYCLONE_OK) return fail(s);
    StringOut report, csv;
    s = cyclone_simulate(h.net, x0.data(), x0.size(), t_end, rtol, &report.ptr, &csv.ptr);
    if (s != CYCLONE_OK) return fail(s);
    if (!write_file(out_path, csv.str())) {
        std::cerr << "cyclone: cannot write " << out_path << "\n";
        return 1;
    }
    std::cerr << "wrote " << out_path << "\n";
    std::cout << report.str();
    return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& axis_text,
              const std::string& range_text, int res, const std::string& range2_text, int res2,
              const std::string& prefix, bool as_json) {
    std::string spec;
    if (!read_file(spec_path, spec)) {
        std::cerr << "cyclone: cannot read " << spec_path << "\n";
        return 1;
    }
    NetworkHandle h;
    cyclone_status s = cyclone_network_create(spec.c_str(), &h.net);
    if (s != CYCLONE_OK) return fail(s);
    const int d = cyclone_network_dimension(h.net);

    double lo = 0, hi = 0;
    if (!parse_range(range_text, lo, hi)) {
        std::cerr << "cyclone: bad --range, expected LO:HI\n";
        return 1;
    }

    json axes = json::array();
    if (axis_text == "diag" || axis_text == "all") {
        json idx = json::array();
        for (int i = 1; i <= d; ++i) idx.push_back(i);
        axes.push_back({{"indices", idx}, {"lo", lo}, {"hi", hi}, {"res", res}});
    } else {
        std::vector<double> parsed;
        try {
            parsed = parse_double_list(axis_text);
        } catch (const std::exception&) {
            std::cerr << "cyclone: bad --axis, expected diag, I or I,J\n";
            return 1;
        }
        if (parsed.size() > 2) {
            std::cerr << "cyclone: at most two sweep axes\n";
            return 1;
        }
        axes.push_back(
            {{"indices", {static_cast<int>(parsed[0])}}, {"lo", lo}, {"hi", hi}, {"res", res}});
        if (parsed.size() == 2) {
            double lo2 = lo, hi2 = hi;
            if (!range2_text.empty() && !parse_range(range2_text, lo2, hi2)) {
                std::cerr << "cyclone: bad --range2, expected LO:HI\n";
                return 1;
            }
            axes.push_back({{"indices", {static_cast<int>(parsed[1])}},
                            {"lo", lo2},
                            {"hi", hi2},
                            {"res", res2 > 0 ? res2 : res}});
        }
    }
    const std::string sweep_json = json{{"axes", axes}}.dump();

    StringOut csv, svg, brackets;
    s = cyclone_sweep(h.net, sweep_json.c_str(), &csv.ptr, &svg.ptr, &brackets.ptr);
    if (s != CYCLONE_OK) return fail(s);

    const std::string csv_path = prefix + ".csv";
    if (!write_file(csv_path, csv.str())) {
        std::cerr << "cyclone: cannot write " << csv_path << "\n";
        return 1;
    }
    std::cerr << "wrote " << csv_path << "\n";
    if (svg.ptr) {
        const std::string svg_path = prefix + ".svg";
        if (!write_file(svg_path, svg.str())) {
            std::cerr << "cyclone: cannot write " << svg_path << "\n";
            return 1;
        }
        std::cerr << "wrote " << svg_path << "\n";
    }
    if (brackets.ptr) {
        if (as_json) {
            std::cout << brackets.str();
        } else {
            const json jb = json::parse(brackets.str());
            for (const auto& b : jb.at("brackets")) {
                std::cout << "transition " << b.at("branch_low").get<std::string>() << " -> "
                          << b.at("branch_high").get<std::string>() << " in ["
                          << fmt(b.at("axis_low").get<double>()) << ", "
                          << fmt(b.at("axis_high").get<double>()) << "]\n";
            }
            if (jb.at("brackets").empty()) std::cout << "no transitions\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cyclone: equilibria, spectra, regimes and trajectories of cyclic "
                 "feedback loops"};
    app.require_subcommand(1);

    std::string spec_path, out_path, x0_text, axis_text, range_text, range2_text, prefix;
    double tol = 1e-12, t_end = 200.0, rtol = 1e-8;
    int res = 61, res2 = 0;
    bool as_json = false, as_table = false;

    auto* verify = app.add_subcommand("verify", "certify the analysis hypotheses of a spec");
    verify->add_option("spec", spec_path, "network spec JSON file")->required();

    auto* analyze =
        app.add_subcommand("analyze", "enumerate equilibria, spectra and the regime branch");
    analyze->add_option("spec", spec_path, "network spec JSON file")->required();
    analyze->add_option("--tol", tol, "fixed-point tolerance (default 1e-12)");
    auto* jflag = analyze->add_flag("--json", as_json, "emit the JSON report");
    analyze->add_flag("--table", as_table, "emit the human-readable table (default)")
        ->excludes(jflag);
    analyze->add_option("--out", out_path, "write the report to a file instead of stdout");

    auto* simulate =
        app.add_subcommand("simulate", "integrate a trajectory and detect its attractor");
    simulate->add_option("spec", spec_path, "network spec JSON file")->required();
    simulate->add_option("--x0", x0_text, "initial state, comma-separated")->required();
    simulate->add_option("--t-end", t_end, "time horizon (default 200)");
    simulate->add_option("--rtol", rtol, "integrator relative tolerance (default 1e-8)");
    simulate->add_option("--out", out_path, "trajectory CSV path (default trajectory.csv)");

    auto* sweep = app.add_subcommand("sweep", "classify the regime over a grid of alpha values");
    sweep->add_option("spec", spec_path, "network spec JSON file")->required();
    sweep->add_option("--axis", axis_text, "diag, I, or I,J (1-based alpha indices)")->required();
    sweep->add_option("--range", range_text, "LO:HI for the first axis")->required();
    sweep->add_option("--res", res, "grid resolution (default 61)");
    sweep->add_option("--range2", range2_text, "LO:HI for the second axis (default --range)");
    sweep->add_option("--res2", res2, "second-axis resolution (default --res)");
    sweep->add_option("--out", prefix, "output prefix for .csv/.svg (default sweep)");
    sweep->add_flag("--json", as_json, "emit transition brackets as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 1;
    }

    if (verify->parsed()) return cmd_verify(spec_path);
    if (analyze->parsed()) return cmd_analyze(spec_path, tol, as_json, out_path);
    if (simulate->parsed())
        return cmd_simulate(spec_path, x0_text, t_end, rtol,
                            out_path.empty() ? "trajectory.csv" : out_path);
    if (sweep->parsed())
        return cmd_sweep(spec_path, axis_text, range_text, res, range2_text, res2,
                         prefix.empty() ? "sweep" : prefix, as_json);
    return 1;
}

#pragma once

#include "cyclone/atlas.hpp"
#include "cyclone/dynamics.hpp"
#include "cyclone/network.hpp"
#include "cyclone/stability.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cyclone {

/// Solver/integrator defaults echoed into every report so published numbers
/// are reproducible.
struct ReportDefaults {
    double tol = 1e-12;
    double rel_tol = 1e-8;
    double t_end = 200.0;
    double transient = 50.0;
};

/// The raw contents of a network spec file, before network-level invariants
/// are enforced; `verify` reports on these even when the network constructor
/// would reject them (e.g. an all-affine loop).
struct ParsedSpec {
    int d = 0;
    std::vector<RegulationFunction> functions;
    std::vector<double> alpha;
    bool hypotheses_check = false;
};

/// Parse {"d": n, "functions": [...], "alpha": [...]} with per-field error
/// messages. Throws std::invalid_argument naming the offending field.
ParsedSpec parse_spec(const std::string& json_text);

/// parse_spec followed by network construction (full invariants).
CyclicNetwork parse_network(const std::string& json_text, bool* hypotheses_check = nullptr);

/// Sweep request: {"axes": [{"indices": [1,2], "lo": 1.0, "hi": 4.0,
/// "res": 61}], "tol": 1e-12} with 1-based alpha indices.
SweepSpec parse_sweep(const std::string& json_text, int d);

struct FunctionReport {
    RegulationFunction f;
    ConvexityCertificate certificate;
};

struct VerifyReport {
    bool certified = false;
    bool all_convex = false;
    bool any_strictly_convex = false;
    bool any_bounded = false;
    int d = 0;
    int n = 0;
    double d_value = 0.0;
    RegimeThresholds thresholds;
    std::vector<FunctionReport> functions;
    std::string assessment;
};

/// Run the theorem-hypothesis certificates over a parsed spec.
VerifyReport build_verify_report(const ParsedSpec& spec);

std::string to_json(const VerifyReport& rep, const ReportDefaults& defaults);
std::string to_json(const RegimeReport& rep, const ReportDefaults& defaults);
std::string attractor_to_json(const AttractorReport& rep, const std::vector<double>& x0,
                              const ReportDefaults& defaults);
std::string brackets_to_json(const std::vector<TransitionBracket>& brackets);

/// t,x1,...,xd rows at accepted steps, 17 significant digits.
std::string trajectory_to_csv(const Trajectory& traj);

} // namespace cyclone

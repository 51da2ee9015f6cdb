#pragma once

#include "cyclone/stability.hpp"

#include <string>
#include <vector>

namespace cyclone {

/// One swept axis: a log-spaced range applied in lockstep to every listed
/// alpha index (all indices = a diagonal sweep).
struct SweepAxis {
    std::vector<int> indices; // 0-based alpha indices
    double lo = 0.0;
    double hi = 0.0;
    int resolution = 2;
};

struct SweepSpec {
    std::vector<SweepAxis> axes; // 1 or 2
    double tol = 1e-12;
};

/// Grid value of an axis at position k (log-spaced endpoints included).
double axis_value(const SweepAxis& axis, int k);

struct AtlasRow {
    std::vector<double> alpha;
    Branch branch = Branch::Boundary;
    bool error = false;
    std::string error_message;
    double p_mid = 0.0; // p of the largest-|p| equilibrium; |p| for odd feedback
    int n_equilibria = 0;
};

struct AtlasTable {
    int d = 0;
    bool odd_feedback = false;
    std::vector<SweepAxis> axes;
    std::vector<AtlasRow> rows; // row-major: last axis fastest
};

/// Classify the regime at every grid alpha. Cells run in parallel and are
/// written by index, so the table is identical for any thread budget;
/// per-cell failures land in the row, never abort the sweep.
AtlasTable run_sweep(const CyclicNetwork& tmpl, const SweepSpec& spec);

struct TransitionBracket {
    double axis_low = 0.0;
    double axis_high = 0.0;
    std::string branch_low;
    std::string branch_high;
};

/// Refine every branch change of a 1-D sweep by bisection on the axis value
/// (in log space) down to the relative width. Branches are compared by
/// label, so Error cells participate like any other label.
std::vector<TransitionBracket> boundary_trace(const CyclicNetwork& tmpl, const SweepSpec& spec,
                                              const AtlasTable& table,
                                              double rel_width = 1e-6);

/// CSV with header alpha_1,...,alpha_d,branch,p_mid,n_equilibria; '.'
/// decimal separator, LF newlines, shortest round-trip numbers. Byte-stable
/// for a given table.
std::string emit_csv(const AtlasTable& table);

/// Deterministic SVG heatmap for 2-D sweeps: exactly one rect per grid cell,
/// log-scaled axes, legend. Throws std::invalid_argument for 1-D tables.
std::string emit_svg(const AtlasTable& table);

const char* branch_color(const AtlasRow& row);
std::string row_branch_label(const AtlasRow& row);

} // namespace cyclone

#include "cyclone/atlas.hpp"

#include "cyclone/format.hpp"
#include "cyclone/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace cyclone {

namespace {

void validate(const CyclicNetwork& tmpl, const SweepSpec& spec) {
    if (spec.axes.empty() || spec.axes.size() > 2)
        throw std::invalid_argument("sweep: need one or two axes");
    std::set<int> used;
    for (const auto& axis : spec.axes) {
        if (axis.indices.empty())
            throw std::invalid_argument("sweep: axis must bind at least one alpha index");
        for (int idx : axis.indices) {
            if (idx < 0 || idx >= tmpl.dimension())
                throw std::invalid_argument("sweep: alpha index out of range");
            if (!used.insert(idx).second)
                throw std::invalid_argument("sweep: alpha index bound by two axes");
        }
        if (!(axis.lo > 0.0) || !(axis.hi > axis.lo))
            throw std::invalid_argument("sweep: axis range must satisfy 0 < lo < hi");
        if (axis.resolution < 2)
            throw std::invalid_argument("sweep: axis resolution must be >= 2");
    }
}

AtlasRow classify_cell(const CyclicNetwork& tmpl, const SweepSpec& spec,
                       const std::vector<double>& axis_vals) {
    AtlasRow row;
    std::vector<double> alpha = tmpl.alpha();
    for (size_t a = 0; a < spec.axes.size(); ++a)
        for (int idx : spec.axes[a].indices) alpha[static_cast<size_t>(idx)] = axis_vals[a];
    row.alpha = alpha;
    try {
        ClassifyOptions copts;
        copts.tol = spec.tol;
        const RegimeReport rep = classify_network(tmpl.with_alpha(alpha), copts);
        row.branch = rep.branch;
        row.n_equilibria = static_cast<int>(rep.equilibria.size());
        double p_mid = 0.0;
        for (const auto& eq : rep.equilibria)
            if (std::abs(eq.p) >= std::abs(p_mid)) p_mid = eq.p;
        row.p_mid = rep.n % 2 == 1 ? std::abs(p_mid) : p_mid;
    } catch (const std::exception& e) {
        row.error = true;
        row.error_message = e.what();
        row.p_mid = std::nan("");
    }
    return row;
}

} // namespace

double axis_value(const SweepAxis& axis, int k) {
    const double llo = std::log(axis.lo), lhi = std::log(axis.hi);
    return std::exp(llo + (lhi - llo) * k / (axis.resolution - 1));
}

std::string row_branch_label(const AtlasRow& row) {
    return row.error ? "Error" : std::string(branch_name(row.branch));
}

AtlasTable run_sweep(const CyclicNetwork& tmpl, const SweepSpec& spec) {
    validate(tmpl, spec);
    AtlasTable table;
    table.d = tmpl.dimension();
    table.odd_feedback = !tmpl.even_feedback();
    table.axes = spec.axes;

    const int res0 = spec.axes[0].resolution;
    const int res1 = spec.axes.size() == 2 ? spec.axes[1].resolution : 1;
    const std::size_t cells = static_cast<std::size_t>(res0) * static_cast<std::size_t>(res1);
    table.rows.resize(cells);

    parallel_for(cells, [&](std::size_t cell) {
        const int k0 = static_cast<int>(cell) / res1;
        const int k1 = static_cast<int>(cell) % res1;
        std::vector<double> vals{axis_value(spec.axes[0], k0)};
        if (spec.axes.size() == 2) vals.push_back(axis_value(spec.axes[1], k1));
        table.rows[cell] = classify_cell(tmpl, spec, vals);
    });
    return table;
}

std::vector<TransitionBracket> boundary_trace(const CyclicNetwork& tmpl, const SweepSpec& spec,
                                              const AtlasTable& table, double rel_width) {
    if (spec.axes.size() != 1)
        throw std::invalid_argument("boundary_trace: requires a 1-D sweep");
    std::vector<TransitionBracket> out;
    const auto& axis = spec.axes[0];
    auto label_at = [&](double v) {
        return row_branch_label(classify_cell(tmpl, spec, {v}));
    };
    for (int k = 0; k + 1 < axis.resolution; ++k) {
        const std::string lo_label = row_branch_label(table.rows[static_cast<size_t>(k)]);
        std::string hi_label = row_branch_label(table.rows[static_cast<size_t>(k + 1)]);
        if (lo_label == hi_label) continue;
        double lo_v = axis_value(axis, k);
        double hi_v = axis_value(axis, k + 1);
        while (hi_v / lo_v - 1.0 > rel_width) {
            const double mid = std::sqrt(lo_v * hi_v);
            const std::string mid_label = label_at(mid);
            if (mid_label == lo_label) {
                lo_v = mid;
            } else {
                // Converge onto the first change from the left, even if a
                // third label (e.g. Boundary) shows up inside the bracket.
                hi_v = mid;
                hi_label = mid_label;
            }
        }
        out.push_back({lo_v, hi_v, lo_label, hi_label});
    }
    return out;
}

std::string emit_csv(const AtlasTable& table) {
    std::string csv;
    csv.reserve(64 * table.rows.size());
    for (int i = 1; i <= table.d; ++i) {
        csv += "alpha_" + std::to_string(i);
        csv += ',';
    }
    csv += "branch,p_mid,n_equilibria\n";
    for (const auto& row : table.rows) {
        for (double a : row.alpha) {
            csv += format_double(a);
            csv += ',';
        }
        csv += row_branch_label(row);
        csv += ',';
        csv += format_double(row.p_mid);
        csv += ',';
        csv += std::to_string(row.n_equilibria);
        csv += '\n';
    }
    return csv;
}

const char* branch_color(const AtlasRow& row) {
    if (row.error) return "#000000";
    switch (row.branch) {
    case Branch::EvenMonostableGAS: return "#4878cf";
    case Branch::EvenBistable: return "#e8603c";
    case Branch::EvenBistablePeriodicCandidate: return "#8e44ad";
    case Branch::OddStable: return "#3f9b54";
    case Branch::OddUnstableOscillatory: return "#d4a517";
    case Branch::Boundary: return "#888888";
    }
    return "#000000";
}

std::string emit_svg(const AtlasTable& table) {
    if (table.axes.size() != 2)
        throw std::invalid_argument("emit_svg: heatmap requires a 2-D sweep");
    const auto& ax = table.axes[0];
    const auto& ay = table.axes[1];

    constexpr double W = 760.0, H = 600.0;
    constexpr double ml = 90.0, mr = 210.0, mt = 40.0, mb = 70.0;
    const double pw = W - ml - mr, ph = H - mt - mb;

    // Cell edges at half-steps of the log grid.
    const double gx = (std::log(ax.hi) - std::log(ax.lo)) / (ax.resolution - 1);
    const double gy = (std::log(ay.hi) - std::log(ay.lo)) / (ay.resolution - 1);
    const double x_min = std::log(ax.lo) - 0.5 * gx, x_max = std::log(ax.hi) + 0.5 * gx;
    const double y_min = std::log(ay.lo) - 0.5 * gy, y_max = std::log(ay.hi) + 0.5 * gy;
    auto px = [&](double logv) { return ml + (logv - x_min) / (x_max - x_min) * pw; };
    auto py = [&](double logv) { return mt + (y_max - logv) / (y_max - y_min) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_fixed(W, 0) +
           "\" height=\"" + format_fixed(H, 0) + "\" viewBox=\"0 0 " + format_fixed(W, 0) + " " +
           format_fixed(H, 0) + "\">\n";
    svg += "<text x=\"" + format_fixed(ml, 1) + "\" y=\"24\" font-family=\"sans-serif\" "
           "font-size=\"15\">regime atlas (log-log)</text>\n";

    std::map<std::string, const char*> seen; // label -> color, sorted for determinism
    for (int k0 = 0; k0 < ax.resolution; ++k0) {
        for (int k1 = 0; k1 < ay.resolution; ++k1) {
            const auto& row =
                table.rows[static_cast<size_t>(k0) * static_cast<size_t>(ay.resolution) +
                           static_cast<size_t>(k1)];
            const double lx = std::log(axis_value(ax, k0));
            const double ly = std::log(axis_value(ay, k1));
            const double x0 = px(lx - 0.5 * gx), x1 = px(lx + 0.5 * gx);
            const double y0 = py(ly + 0.5 * gy), y1 = py(ly - 0.5 * gy);
            svg += "<rect x=\"" + format_fixed(x0, 2) + "\" y=\"" + format_fixed(y0, 2) +
                   "\" width=\"" + format_fixed(x1 - x0, 2) + "\" height=\"" +
                   format_fixed(y1 - y0, 2) + "\" fill=\"" + branch_color(row) + "\"/>\n";
            seen.emplace(row_branch_label(row), branch_color(row));
        }
    }

    // Axis frame and end labels.
    svg += "<path d=\"M " + format_fixed(ml, 1) + " " + format_fixed(mt, 1) + " V " +
           format_fixed(mt + ph, 1) + " H " + format_fixed(ml + pw, 1) +
           "\" fill=\"none\" stroke=\"#222222\"/>\n";
    auto axis_label = [](const SweepAxis& a) {
        std::string s;
        for (size_t i = 0; i < a.indices.size(); ++i) {
            if (i) s += ",";
            s += "alpha_" + std::to_string(a.indices[i] + 1);
        }
        return s;
    };
    svg += "<text x=\"" + format_fixed(ml, 1) + "\" y=\"" + format_fixed(H - 28, 1) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + format_double(ax.lo) + "</text>\n";
    svg += "<text x=\"" + format_fixed(ml + pw - 30, 1) + "\" y=\"" + format_fixed(H - 28, 1) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + format_double(ax.hi) + "</text>\n";
    svg += "<text x=\"" + format_fixed(ml + 0.5 * pw - 30, 1) + "\" y=\"" +
           format_fixed(H - 10, 1) + "\" font-family=\"sans-serif\" font-size=\"13\">" +
           axis_label(ax) + "</text>\n";
    svg += "<text x=\"" + format_fixed(ml - 66, 1) + "\" y=\"" + format_fixed(mt + ph, 1) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + format_double(ay.lo) + "</text>\n";
    svg += "<text x=\"" + format_fixed(ml - 66, 1) + "\" y=\"" + format_fixed(mt + 12, 1) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + format_double(ay.hi) + "</text>\n";
    svg += "<text x=\"14\" y=\"" + format_fixed(mt + 0.5 * ph, 1) +
           "\" font-family=\"sans-serif\" font-size=\"13\">" + axis_label(ay) + "</text>\n";

    // Legend swatches are paths, not rects, so the rect count stays equal to
    // the cell count.
    double ly0 = mt + 8.0;
    const double lx0 = ml + pw + 18.0;
    for (const auto& [label, color] : seen) {
        svg += "<path d=\"M " + format_fixed(lx0, 1) + " " + format_fixed(ly0, 1) +
               " h 14 v 14 h -14 z\" fill=\"" + std::string(color) + "\"/>\n";
        svg += "<text x=\"" + format_fixed(lx0 + 20, 1) + "\" y=\"" + format_fixed(ly0 + 12, 1) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + label + "</text>\n";
        ly0 += 22.0;
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace cyclone

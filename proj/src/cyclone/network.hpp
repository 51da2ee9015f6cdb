#pragma once

#include "cyclone/regulation.hpp"

#include <span>
#include <vector>

namespace cyclone {

/// The cyclic feedback loop  x_i' = alpha_i f_i(x_{i-1}) - x_i  with the
/// cyclic convention x_0 = x_d (0-based internally: stage i reads
/// x[predecessor(i)], predecessor(0) = d-1).
///
/// Immutable after construction; every member is a pure function, so a
/// network can be shared freely across threads.
class CyclicNetwork {
public:
    CyclicNetwork(std::vector<RegulationFunction> functions, std::vector<double> alpha);

    int dimension() const { return static_cast<int>(functions_.size()); }
    const std::vector<RegulationFunction>& functions() const { return functions_; }
    const RegulationFunction& function(int i) const { return functions_[static_cast<size_t>(i)]; }
    const std::vector<double>& alpha() const { return alpha_; }

    /// Count of decreasing stages; its parity selects the analysis branch.
    int decreasing_count() const { return n_decreasing_; }
    bool even_feedback() const { return n_decreasing_ % 2 == 0; }

    /// Same stages, different parameter vector (used by sweeps).
    CyclicNetwork with_alpha(std::vector<double> alpha) const;

    static int predecessor(int i, int d) { return i == 0 ? d - 1 : i - 1; }

    /// One full trip around the loop: alpha_d f_d(... alpha_1 f_1(t) ...).
    double composed_map(double t) const;
    /// Chain-rule derivative of composed_map; equals the p-value at fixed points.
    double composed_map_derivative(double t) const;

    /// Cascade a candidate last coordinate t into a full state vector:
    /// x_1 = alpha_1 f_1(t), x_i = alpha_i f_i(x_{i-1}), x_d = t. Only the
    /// last fixed-point equation carries a residual, |composed_map(t) - t|.
    std::vector<double> lift(double t) const;

    /// prod_i alpha_i f_i'(x_{i-1}).
    double p_value(std::span<const double> x) const;
    /// prod_i x_{i-1} f_i'(x_{i-1}) / f_i(x_{i-1}); equals the p-value when
    /// alpha = gamma_map(x).
    double g_value(std::span<const double> x) const;
    /// The unique alpha making x an equilibrium: alpha_i = x_i / f_i(x_{i-1}).
    std::vector<double> gamma_map(std::span<const double> x) const;
    /// prod_i sup_x |x f_i'/f_i|; bounds the attainable |p| over all alpha.
    double d_value() const;

    /// Upper bound B for the fixed-point search bracket [0, B], obtained by
    /// propagating per-stage bounds around the loop once (bounded stages cap,
    /// affine stages map a bound to a bound), plus a 1% margin. `amplified`
    /// is set when an affine stage follows the first bounded one, i.e. when
    /// the bound may be loose.
    double fixed_point_bound(bool* amplified = nullptr) const;

private:
    std::vector<RegulationFunction> functions_;
    std::vector<double> alpha_;
    int n_decreasing_ = 0;
};

struct Equilibrium {
    std::vector<double> x_bar;
    double p = 0.0;
    double g = 0.0;
    double residual = 0.0;
    bool degenerate = false;
};

struct FindOptions {
    double tol = 1e-12;
    int grid_points = 4096;
};

/// All fixed points of the composed map on [0, B], each lifted to a full
/// equilibrium, sorted by the last coordinate. Returns 1-3 equilibria;
/// roots closer than 10*tol are merged and flagged degenerate. Throws
/// SuspectCount if more than three crossings show up and ConvergenceFailure
/// if bisection can satisfy neither the residual nor the width criterion.
std::vector<Equilibrium> find_equilibria(const CyclicNetwork& net, const FindOptions& opts);
std::vector<Equilibrium> find_equilibria(const CyclicNetwork& net, double tol = 1e-12);

} // namespace cyclone

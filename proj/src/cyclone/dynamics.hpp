#pragma once

#include "cyclone/network.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace cyclone {

/// Right-hand side of the loop ODE: component i is
/// alpha_i f_i(x_{i-1}) - x_i. Throws std::domain_error for negative input.
std::vector<double> vector_field(const CyclicNetwork& net, std::span<const double> x);

struct IntegrateOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 2.0;
    double initial_step = 0.0; // 0 = heuristic
    double fixed_step = 0.0;   // > 0 disables step control (convergence studies)
};

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    /// Most negative component seen before clamping; roundoff only, so it
    /// stays above -abs_tol.
    double min_component = 0.0;
};

/// Accepted-step samples of one solution, with the state derivative stored
/// per sample so cubic Hermite interpolation is available between steps.
class Trajectory {
public:
    Trajectory(int dim) : d_(dim) {}

    int dimension() const { return d_; }
    std::size_t size() const { return times_.size(); }
    double time(std::size_t k) const { return times_[k]; }
    double t_begin() const { return times_.front(); }
    double t_end() const { return times_.back(); }
    std::span<const double> state(std::size_t k) const {
        return {states_.data() + k * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
    }
    std::span<const double> derivative(std::size_t k) const {
        return {derivs_.data() + k * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
    }

    void append(double t, std::span<const double> x, std::span<const double> dx);

    /// Cubic Hermite interpolation at any t inside the recorded span.
    std::vector<double> interpolate(double t) const;
    double interpolate_component(double t, int i) const;

    StepStats& stats() { return stats_; }
    const StepStats& stats() const { return stats_; }

private:
    std::size_t locate(double t) const;

    int d_;
    std::vector<double> times_;
    std::vector<double> states_;
    std::vector<double> derivs_;
    StepStats stats_;
};

/// Dormand-Prince 5(4) with a PI controller (safety 0.9, step-change factors
/// clamped to [0.2, 5]). States are clamped to [0, inf) after acceptance;
/// only roundoff-scale negativity can occur because the field points inward
/// at the boundary. Throws StepSizeUnderflow when the controller stalls.
Trajectory integrate(const CyclicNetwork& net, std::span<const double> x0, double t_end,
                     const IntegrateOptions& opts = {});

namespace detail {
using Rhs = std::function<void(double, std::span<const double>, std::span<double>)>;
/// Generic driver behind integrate(); exposed for integrator-order tests.
Trajectory rk45(const Rhs& rhs, int dim, std::span<const double> x0, double t_end,
                const IntegrateOptions& opts, bool clamp_nonnegative);
} // namespace detail

enum class AttractorKind { ConvergedToEquilibrium, PeriodicOrbit, Undetermined };

std::string_view attractor_kind_name(AttractorKind k);

struct DetectOptions {
    double transient = 50.0;
    double eq_radius = 1e-6;
    double period_rtol = 1e-3;
    double min_amplitude = 1e-4;
    int min_return_times = 5;
    /// Poincare level as a fraction of the tail range of x_1 (0.5 = midrange).
    double section_level_fraction = 0.5;
};

struct AttractorReport {
    AttractorKind kind = AttractorKind::Undetermined;
    int equilibrium_index = -1;       // valid for ConvergedToEquilibrium
    double period = 0.0;              // valid for PeriodicOrbit
    std::vector<double> amplitude;    // per-coordinate max - min over the tail
    double poincare_residual = 0.0;   // state recurrence at the section
    double transient_time = 0.0;
    double t_end_used = 0.0;
};

/// Classify the long-time behaviour of a recorded trajectory:
/// ConvergedToEquilibrium when the last 10% of the span stays within
/// eq_radius of a known equilibrium; else PeriodicOrbit when upward
/// crossings of the x_1 section level yield at least min_return_times
/// return times agreeing to period_rtol; else Undetermined.
AttractorReport detect_attractor(const Trajectory& traj,
                                 const std::vector<Equilibrium>& equilibria,
                                 const DetectOptions& opts = {});

/// integrate + detect, with one automatic re-integration at doubled t_end
/// before settling for Undetermined. Pass precomputed equilibria to avoid
/// re-solving per initial condition; pass out_traj to keep the samples.
AttractorReport simulate_and_detect(const CyclicNetwork& net, std::span<const double> x0,
                                    double t_end, const IntegrateOptions& iopts = {},
                                    const DetectOptions& dopts = {},
                                    const std::vector<Equilibrium>* equilibria = nullptr,
                                    Trajectory* out_traj = nullptr);

struct BasinStats {
    std::vector<long> equilibrium_hits; // indexed like find_equilibria order
    long periodic = 0;
    long undetermined = 0;
    long total = 0;
};

/// Integrate from `count` Halton points in the box [lo, hi]^d (deterministic
/// for a given seed) and tally the detected attractors. Work is distributed
/// across the thread budget and merged by index, so the result does not
/// depend on the worker count.
BasinStats sample_basins(const CyclicNetwork& net, std::span<const double> lo,
                         std::span<const double> hi, int count, std::uint64_t seed,
                         double t_end = 200.0, const IntegrateOptions& iopts = {},
                         const DetectOptions& dopts = {});

namespace detail {
/// Radical-inverse Halton value, index >= 1.
double halton(std::uint64_t index, std::uint32_t base);
} // namespace detail

} // namespace cyclone

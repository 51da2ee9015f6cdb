#pragma once

#include "cyclone/network.hpp"

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

namespace cyclone {

/// Jacobian eigenvalues at a point with loop gain p: the d-th roots of p
/// shifted by -1. For p > 0 the angles are 2k*pi/d, for p < 0 they are
/// (2k+1)*pi/d with |p|^{1/d} modulus; p = 0 gives -1 with multiplicity d.
/// The returned list is exactly closed under conjugation.
std::vector<std::complex<double>> spectrum(double p, int d);

/// Dense d x d Jacobian (row-major) at x: diagonal -1, entry (i, i-1 mod d)
/// equal to alpha_i f_i'(x_{i-1}). Used for oracle cross-checks.
std::vector<double> jacobian(const CyclicNetwork& net, std::span<const double> x);

struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;
    int n_negative = 0;
    int n_positive = 0;
    int n_zero = 0;
    bool hyperbolic = false;
    int stable_dim = 0; // = n_negative, the basin dimension when hyperbolic
};

/// Width of the "zero real part" band: 1e-9 * (1 + |p|^{1/d}).
double default_spectral_eps(double p, int d);

/// Spectrum plus sign counts for one equilibrium. eps <= 0 selects the
/// default band.
SpectrumReport classify_point(const Equilibrium& eq, int d, double eps = 0.0);

struct RegimeThresholds {
    /// sec(pi/d)^d, the |p| bound for odd feedback stability; +inf for d = 2
    /// where the conjugate pair -1 +- i sqrt(|p|) is always stable.
    double t_odd = 0.0;
    /// sec(2*pi/d)^d for d >= 5; absent otherwise.
    std::optional<double> t_even;
    /// p values above t_even where the spectrum is non-hyperbolic
    /// (sec(2*pi*k/d)^d for k = 2..floor((d-1)/4)), ascending. Empty for
    /// d <= 8.
    std::vector<double> non_hyperbolic_p;
};

/// Evaluated in long double so that the exactly-representable cases
/// (d = 3, 4, 6) round to their true values. Cross-validates the
/// non-hyperbolic set against direct root counting and throws
/// std::logic_error on disagreement.
RegimeThresholds thresholds(int d);

enum class Branch {
    EvenMonostableGAS,
    EvenBistable,
    EvenBistablePeriodicCandidate,
    OddStable,
    OddUnstableOscillatory,
    Boundary,
};

std::string_view branch_name(Branch b);

struct RegimeReport {
    Branch branch = Branch::Boundary;
    int d = 0;
    int n = 0;          // decreasing stage count
    double d_value = 0; // sensitivity product bound
    RegimeThresholds thresholds;
    std::vector<Equilibrium> equilibria;
    std::vector<SpectrumReport> spectra; // parallel to equilibria
    double search_bound = 0.0;
    bool search_bound_amplified = false;
};

struct ClassifyOptions {
    double tol = 1e-12;
    double eps = 0.0; // <= 0: default band per equilibrium
};

/// The network-level regime decision. Non-hyperbolic or degenerate
/// equilibria yield Boundary; otherwise the branch follows the parity of
/// the decreasing-stage count, the equilibrium count, and the middle
/// p-value against the thresholds.
RegimeReport classify_network(const CyclicNetwork& net, const ClassifyOptions& opts = {});

} // namespace cyclone

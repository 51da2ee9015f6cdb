// Test-side oracles, independent of the implementation paths they check:
// finite differences for derivative stacks, brute-force sign-change scans
// for fixed-point counts, golden-section search for suprema, scalar
// bisection for frozen constants, and a dense eigensolver for spectra.
#pragma once

#include "cyclone/network.hpp"
#include "cyclone/stability.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using Scalar = std::function<double(double)>;

inline double fd1(const Scalar& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double fd2(const Scalar& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// Scalar root by bisection; f(lo) and f(hi) must straddle zero.
inline double bisect(const Scalar& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(f(hi)))
        throw std::invalid_argument("oracle::bisect: root not bracketed");
    for (int k = 0; k < iters; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Max of f over [lo, hi] by dense log-grid scan plus golden-section polish.
inline double golden_max(const Scalar& f, double lo, double hi, int coarse = 4096) {
    const double llo = std::log(lo), lhi = std::log(hi);
    double best = -1e300, best_l = llo;
    for (int k = 0; k <= coarse; ++k) {
        const double l = llo + (lhi - llo) * k / coarse;
        const double v = f(std::exp(l));
        if (v > best) {
            best = v;
            best_l = l;
        }
    }
    const double step = (lhi - llo) / coarse;
    double a = best_l - step, b = best_l + step;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(std::exp(x1)), f2 = f(std::exp(x2));
    while (b - a > 1e-12) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(std::exp(x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(std::exp(x1));
        }
    }
    return std::max({best, f1, f2});
}

/// Count sign changes of composed_map(t) - t on a dense grid over [0, B].
inline int brute_force_crossings(const cyclone::CyclicNetwork& net, long points) {
    const double B = net.fixed_point_bound();
    int count = 0;
    double g_prev = net.composed_map(0.0);
    for (long k = 1; k <= points; ++k) {
        const double t = B * static_cast<double>(k) / static_cast<double>(points);
        const double g = net.composed_map(t) - t;
        if (g == 0.0) {
            ++count;
            g_prev = g;
            continue;
        }
        if (g_prev != 0.0 && std::signbit(g) != std::signbit(g_prev)) ++count;
        g_prev = g;
    }
    return count;
}

/// Parlett-Reinsch balancing (diagonal similarity with power-of-two scales),
/// the step LAPACK's geev applies before QR. Eigen's EigenSolver omits it,
/// and loop Jacobians with strongly varying couplings lose ~10 digits
/// without it.
inline void balance_in_place(Eigen::MatrixXd& M) {
    const int n = static_cast<int>(M.rows());
    bool converged = false;
    while (!converged) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(M(j, i));
                r += std::abs(M(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r < 0.95 * s && f != 1.0) {
                converged = false;
                M.col(i) *= f;
                M.row(i) /= f;
            }
        }
    }
}

/// Eigenvalues of a row-major dense matrix via balancing + Eigen's QR (the
/// general-purpose route the closed form is checked against).
inline std::vector<std::complex<double>> dense_eigenvalues(const std::vector<double>& m, int d) {
    Eigen::MatrixXd M(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) M(i, j) = m[static_cast<size_t>(i * d + j)];
    balance_in_place(M);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(M, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> out(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) out[static_cast<size_t>(i)] = solver.eigenvalues()(i);
    return out;
}

/// Greedy multiset matching distance: max over one list of the distance to
/// its nearest unused partner in the other.
inline double multiset_distance(std::vector<std::complex<double>> a,
                                std::vector<std::complex<double>> b) {
    if (a.size() != b.size()) return 1e300;
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (const auto& va : a) {
        double best = 1e300;
        size_t best_j = 0;
        for (size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(va - b[j]);
            if (dist < best) {
                best = dist;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

struct NetGenOptions {
    int d_min = 2;
    int d_max = 6;
    bool force_even = false;
    bool force_odd = false;
    double alpha_min = 0.2;
    double alpha_max = 5.0;
    double affine_prob = 0.2;
    /// With probability 1/2, rebuild alpha from a point with loop gain above
    /// one so the sample also covers the multi-equilibrium regime.
    bool bias_bistable = false;
};

/// Input value at which one stage's |x f'/f| is near its supremum.
inline double stage_sensitivity_peak(const cyclone::RegulationFunction& f) {
    using cyclone::RegulationKind;
    switch (f.kind()) {
    case RegulationKind::Hill:
        return f.lambda() > 0.0 ? std::pow(f.lambda(), -0.5 / f.r())
                                : std::pow(10.0, 1.0 / f.r());
    case RegulationKind::ShiftedHill: {
        const double y = f.lambda() > 0.0 ? std::pow(f.lambda(), -0.5 / f.r())
                                          : std::pow(10.0, 1.0 / f.r());
        return std::max(y - f.shift(), 0.05);
    }
    case RegulationKind::Affine:
        return 10.0 * f.b() / f.a();
    }
    return 1.0;
}

inline cyclone::RegulationFunction random_stage(std::mt19937_64& rng, bool allow_affine,
                                                double affine_prob) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (allow_affine && u01(rng) < affine_prob) {
        std::uniform_real_distribution<double> ua(0.3, 2.0), ub(0.2, 2.0);
        return cyclone::RegulationFunction::affine(ua(rng), ub(rng));
    }
    std::uniform_int_distribution<int> ur(1, 4);
    const double r = static_cast<double>(ur(rng));
    double lambda;
    if (u01(rng) < 0.5) {
        lambda = u01(rng) < 0.3 ? 0.0 : 0.1 + 0.7 * u01(rng); // decreasing
    } else {
        lambda = 1.5 + 4.5 * u01(rng); // increasing
    }
    return cyclone::RegulationFunction::hill(lambda, r);
}

inline cyclone::CyclicNetwork random_network(std::mt19937_64& rng,
                                             const NetGenOptions& opts = {}) {
    std::uniform_int_distribution<int> ud(opts.d_min, opts.d_max);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int d = ud(rng);
    std::vector<cyclone::RegulationFunction> fs;
    fs.push_back(random_stage(rng, false, 0.0)); // keep at least one bounded stage
    for (int i = 1; i < d; ++i) fs.push_back(random_stage(rng, true, opts.affine_prob));

    if (opts.force_even || opts.force_odd) {
        const auto decreasing = [&fs] {
            int n = 0;
            for (const auto& f : fs) n += f.is_decreasing() ? 1 : 0;
            return n;
        };
        const int want = opts.force_even ? 0 : 1;
        if (decreasing() % 2 != want) {
            // Flip the direction of the first hill stage.
            const auto& f = fs[0];
            fs[0] = f.is_decreasing() ? cyclone::RegulationFunction::hill(2.0 + u01(rng), f.r())
                                      : cyclone::RegulationFunction::hill(0.4 * u01(rng), f.r());
        }
    }
    std::vector<double> alpha(static_cast<size_t>(d));
    const double llo = std::log(opts.alpha_min), lhi = std::log(opts.alpha_max);
    for (auto& a : alpha) a = std::exp(llo + (lhi - llo) * u01(rng));
    cyclone::CyclicNetwork net(std::move(fs), std::move(alpha));

    if (opts.bias_bistable && u01(rng) < 0.5) {
        // alpha = Gamma(x) makes x an equilibrium with p = G(x); placing each
        // coordinate near the peak of the stage it feeds pushes |G| toward
        // the sensitivity product.
        for (int attempt = 0; attempt < 8; ++attempt) {
            std::vector<double> x(static_cast<size_t>(d));
            for (int i = 0; i < d; ++i) {
                const int coord = cyclone::CyclicNetwork::predecessor(i, d);
                x[static_cast<size_t>(coord)] =
                    stage_sensitivity_peak(net.function(i)) * std::exp(u01(rng) - 0.5);
            }
            if (std::abs(net.g_value(x)) > 1.05) return net.with_alpha(net.gamma_map(x));
        }
    }
    return net;
}

/// Networks guaranteed to be in the small-sensitivity regime (D < 1) with
/// even feedback: every stage is a Moebius hill whose factor stays <= 1/3.
inline cyclone::CyclicNetwork random_small_sensitivity_network(std::mt19937_64& rng, int d_min = 2,
                                                               int d_max = 6) {
    std::uniform_int_distribution<int> ud(d_min, d_max);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int d = ud(rng);
    std::vector<cyclone::RegulationFunction> fs;
    int n_dec = 0;
    for (int i = 0; i < d; ++i) {
        const bool dec = u01(rng) < 0.5;
        const double lambda = dec ? 0.25 + 0.4 * u01(rng) : 1.8 + 2.2 * u01(rng);
        fs.push_back(cyclone::RegulationFunction::hill(lambda, 1.0));
        n_dec += dec ? 1 : 0;
    }
    if (n_dec % 2 != 0)
        fs[0] = fs[0].is_decreasing() ? cyclone::RegulationFunction::hill(2.5, 1.0)
                                      : cyclone::RegulationFunction::hill(0.4, 1.0);
    std::vector<double> alpha(static_cast<size_t>(d));
    for (auto& a : alpha) a = std::exp(std::log(0.3) + (std::log(3.0) - std::log(0.3)) * u01(rng));
    return cyclone::CyclicNetwork(std::move(fs), std::move(alpha));
}

inline std::vector<double> random_positive_vector(std::mt19937_64& rng, int d, double lo = 0.05,
                                                  double hi = 3.0) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<double> x(static_cast<size_t>(d));
    for (auto& v : x) v = lo + (hi - lo) * u01(rng);
    return x;
}

} // namespace oracle

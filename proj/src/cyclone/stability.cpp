#include "cyclone/stability.hpp"

#include "cyclone/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cyclone {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long double kPiL = 3.14159265358979323846264338327950288L;
} // namespace

std::vector<std::complex<double>> spectrum(double p, int d) {
    if (d < 2) throw std::invalid_argument("spectrum: d must be >= 2");
    std::vector<std::complex<double>> eig(static_cast<size_t>(d));
    if (p == 0.0) {
        std::fill(eig.begin(), eig.end(), std::complex<double>(-1.0, 0.0));
        return eig;
    }
    const double rho = std::pow(std::abs(p), 1.0 / d);
    // Fill conjugate pairs from mirrored indices so closure is exact.
    if (p > 0.0) {
        eig[0] = {rho - 1.0, 0.0};
        if (d % 2 == 0) eig[static_cast<size_t>(d / 2)] = {-rho - 1.0, 0.0};
        for (int k = 1; 2 * k < d; ++k) {
            const double th = 2.0 * M_PI * k / d;
            const std::complex<double> lam(rho * std::cos(th) - 1.0, rho * std::sin(th));
            eig[static_cast<size_t>(k)] = lam;
            eig[static_cast<size_t>(d - k)] = std::conj(lam);
        }
    } else {
        if (d % 2 == 1) eig[static_cast<size_t>((d - 1) / 2)] = {-rho - 1.0, 0.0};
        for (int k = 0; 2 * k + 1 < d; ++k) {
            const double th = (2.0 * k + 1.0) * M_PI / d;
            const std::complex<double> lam(rho * std::cos(th) - 1.0, rho * std::sin(th));
            eig[static_cast<size_t>(k)] = lam;
            eig[static_cast<size_t>(d - 1 - k)] = std::conj(lam);
        }
    }
    return eig;
}

std::vector<double> jacobian(const CyclicNetwork& net, std::span<const double> x) {
    const int d = net.dimension();
    std::vector<double> J(static_cast<size_t>(d) * static_cast<size_t>(d), 0.0);
    for (int i = 0; i < d; ++i) {
        const int j = CyclicNetwork::predecessor(i, d);
        J[static_cast<size_t>(i * d + i)] = -1.0;
        J[static_cast<size_t>(i * d + j)] =
            net.alpha()[static_cast<size_t>(i)] *
            net.function(i).derivatives(x[static_cast<size_t>(j)]).d1;
    }
    return J;
}

double default_spectral_eps(double p, int d) {
    return 1e-9 * (1.0 + std::pow(std::abs(p), 1.0 / d));
}

SpectrumReport classify_point(const Equilibrium& eq, int d, double eps) {
    if (eps <= 0.0) eps = default_spectral_eps(eq.p, d);
    SpectrumReport rep;
    rep.eigenvalues = spectrum(eq.p, d);
    for (const auto& lam : rep.eigenvalues) {
        if (std::abs(lam.real()) <= eps)
            ++rep.n_zero;
        else if (lam.real() < 0.0)
            ++rep.n_negative;
        else
            ++rep.n_positive;
    }
    rep.hyperbolic = rep.n_zero == 0;
    rep.stable_dim = rep.n_negative;
    return rep;
}

RegimeThresholds thresholds(int d) {
    if (d < 2) throw std::invalid_argument("thresholds: d must be >= 2");
    RegimeThresholds th;
    const long double dl = static_cast<long double>(d);
    auto sec_pow = [dl](long double angle) {
        return static_cast<double>(1.0L / std::pow(std::cos(angle), dl));
    };
    th.t_odd = d == 2 ? kInf : sec_pow(kPiL / dl);
    if (d >= 5) th.t_even = sec_pow(2.0L * kPiL / dl);

    // Formula route: k in [2, floor((d-1)/4)], keeping cos(2 pi k / d) > 0.
    const int j = (d - 1) / 4;
    for (int k = 2; k <= j; ++k) {
        const long double c = std::cos(2.0L * kPiL * k / dl);
        if (c > 0.0L) th.non_hyperbolic_p.push_back(static_cast<double>(1.0L / std::pow(c, dl)));
    }
    std::sort(th.non_hyperbolic_p.begin(), th.non_hyperbolic_p.end());

    // Direct route: every k in [2, d/2] whose eigenvalue direction can cross
    // the imaginary axis beyond t_even. 4k = d means the angle is exactly
    // pi/2 (real part -1 for every p, never a crossing); the rounded cosine
    // there is a subnormal positive number, so exclude it algebraically.
    std::vector<double> direct;
    for (int k = 2; 2 * k <= d; ++k) {
        if (4 * k == d) continue;
        const long double c = std::cos(2.0L * kPiL * k / dl);
        if (c > 0.0L) direct.push_back(static_cast<double>(1.0L / std::pow(c, dl)));
    }
    std::sort(direct.begin(), direct.end());
    bool same = direct.size() == th.non_hyperbolic_p.size();
    for (size_t i = 0; same && i < direct.size(); ++i)
        same = direct[i] == th.non_hyperbolic_p[i] ||
               std::abs(direct[i] - th.non_hyperbolic_p[i]) <=
                   1e-12 * (1.0 + std::abs(direct[i]));
    if (!same)
        throw std::logic_error("thresholds: non-hyperbolic set formula disagrees with direct "
                               "root counting for d = " + std::to_string(d));
    return th;
}

std::string_view branch_name(Branch b) {
    switch (b) {
    case Branch::EvenMonostableGAS: return "EvenMonostableGAS";
    case Branch::EvenBistable: return "EvenBistable";
    case Branch::EvenBistablePeriodicCandidate: return "EvenBistablePeriodicCandidate";
    case Branch::OddStable: return "OddStable";
    case Branch::OddUnstableOscillatory: return "OddUnstableOscillatory";
    case Branch::Boundary: return "Boundary";
    }
    return "Boundary";
}

RegimeReport classify_network(const CyclicNetwork& net, const ClassifyOptions& opts) {
    RegimeReport rep;
    rep.d = net.dimension();
    rep.n = net.decreasing_count();
    rep.d_value = net.d_value();
    rep.thresholds = thresholds(rep.d);
    rep.search_bound = net.fixed_point_bound(&rep.search_bound_amplified);

    FindOptions fopts;
    fopts.tol = opts.tol;
    rep.equilibria = find_equilibria(net, fopts);
    rep.spectra.reserve(rep.equilibria.size());
    bool boundary = false;
    for (const auto& eq : rep.equilibria) {
        rep.spectra.push_back(classify_point(eq, rep.d, opts.eps));
        boundary = boundary || eq.degenerate || !rep.spectra.back().hyperbolic;
    }
    if (boundary) {
        rep.branch = Branch::Boundary;
        return rep;
    }

    if (net.even_feedback()) {
        if (rep.equilibria.size() == 1 && rep.equilibria[0].p < 1.0) {
            rep.branch = Branch::EvenMonostableGAS;
        } else if (rep.equilibria.size() == 3) {
            const double p_mid = rep.equilibria[1].p;
            const bool shape = p_mid > 1.0 && rep.equilibria[0].p < 1.0 &&
                               rep.equilibria[2].p < 1.0;
            if (!shape) {
                rep.branch = Branch::Boundary;
            } else if (rep.d >= 5 && rep.thresholds.t_even && p_mid > *rep.thresholds.t_even) {
                rep.branch = Branch::EvenBistablePeriodicCandidate;
            } else {
                rep.branch = Branch::EvenBistable;
            }
        } else {
            // One equilibrium with p > 1, or two: numerically degenerate.
            rep.branch = Branch::Boundary;
        }
    } else {
        const double p_abs = std::abs(rep.equilibria[0].p);
        rep.branch =
            p_abs < rep.thresholds.t_odd ? Branch::OddStable : Branch::OddUnstableOscillatory;
    }
    return rep;
}

} // namespace cyclone

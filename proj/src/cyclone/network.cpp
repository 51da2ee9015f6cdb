#include "cyclone/network.hpp"

#include "cyclone/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cyclone {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CyclicNetwork::CyclicNetwork(std::vector<RegulationFunction> functions,
                             std::vector<double> alpha)
    : functions_(std::move(functions)), alpha_(std::move(alpha)) {
    const size_t d = functions_.size();
    if (d < 2)
        throw std::invalid_argument("network: dimension must be >= 2");
    if (alpha_.size() != d)
        throw std::invalid_argument("network: alpha length must equal the number of functions");
    for (size_t i = 0; i < d; ++i) {
        if (!(alpha_[i] > 0.0) || !std::isfinite(alpha_[i]))
            throw std::invalid_argument("network: alpha[" + std::to_string(i + 1) +
                                        "] must be a positive finite number");
    }
    bool any_bounded = false;
    for (const auto& f : functions_) {
        any_bounded = any_bounded || f.bounded();
        if (f.is_decreasing()) ++n_decreasing_;
    }
    if (!any_bounded)
        throw std::invalid_argument(
            "network: at least one regulation function must be bounded (all-affine rejected)");
}

CyclicNetwork CyclicNetwork::with_alpha(std::vector<double> alpha) const {
    return CyclicNetwork(functions_, std::move(alpha));
}

double CyclicNetwork::composed_map(double t) const {
    double v = t;
    const int d = dimension();
    for (int i = 0; i < d; ++i) v = alpha_[i] * functions_[i](v);
    return v;
}

double CyclicNetwork::composed_map_derivative(double t) const {
    double v = t;
    double deriv = 1.0;
    const int d = dimension();
    for (int i = 0; i < d; ++i) {
        deriv *= alpha_[i] * functions_[i].derivatives(v).d1;
        v = alpha_[i] * functions_[i](v);
    }
    return deriv;
}

std::vector<double> CyclicNetwork::lift(double t) const {
    const int d = dimension();
    std::vector<double> x(static_cast<size_t>(d));
    double v = t;
    for (int i = 0; i < d - 1; ++i) {
        v = alpha_[i] * functions_[i](v);
        x[static_cast<size_t>(i)] = v;
    }
    x[static_cast<size_t>(d - 1)] = t;
    return x;
}

double CyclicNetwork::p_value(std::span<const double> x) const {
    const int d = dimension();
    double p = 1.0;
    for (int i = 0; i < d; ++i)
        p *= alpha_[i] * functions_[i].derivatives(x[static_cast<size_t>(predecessor(i, d))]).d1;
    return p;
}

double CyclicNetwork::g_value(std::span<const double> x) const {
    const int d = dimension();
    double g = 1.0;
    for (int i = 0; i < d; ++i) {
        const double xp = x[static_cast<size_t>(predecessor(i, d))];
        g *= xp * functions_[i].derivatives(xp).d1 / functions_[i](xp);
    }
    return g;
}

std::vector<double> CyclicNetwork::gamma_map(std::span<const double> x) const {
    const int d = dimension();
    std::vector<double> alpha(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i)
        alpha[static_cast<size_t>(i)] =
            x[static_cast<size_t>(i)] / functions_[i](x[static_cast<size_t>(predecessor(i, d))]);
    return alpha;
}

double CyclicNetwork::d_value() const {
    double prod = 1.0;
    for (const auto& f : functions_) prod *= f.log_sensitivity_sup();
    return prod;
}

double CyclicNetwork::fixed_point_bound(bool* amplified) const {
    const int d = dimension();
    double u = kInf;
    bool seen_bounded = false;
    bool amp = false;
    for (int i = 0; i < d; ++i) {
        const auto& f = functions_[i];
        if (f.bounded()) {
            // Tighten with the incoming bound when available: a monotone
            // stage attains its max on [0, u] at an endpoint.
            double fmax;
            if (std::isfinite(u))
                fmax = std::max(f(0.0), f(u));
            else
                fmax = f.sup_value();
            u = alpha_[i] * fmax;
            seen_bounded = true;
        } else {
            if (seen_bounded) amp = true;
            u = std::isfinite(u) ? alpha_[i] * (f.a() * u + f.b()) : kInf;
        }
    }
    if (amplified) *amplified = amp;
    return 1.01 * u;
}

std::vector<Equilibrium> find_equilibria(const CyclicNetwork& net, double tol) {
    FindOptions opts;
    opts.tol = tol;
    return find_equilibria(net, opts);
}

std::vector<Equilibrium> find_equilibria(const CyclicNetwork& net, const FindOptions& opts) {
    const double tol = opts.tol;
    const double B = net.fixed_point_bound();
    const int N = opts.grid_points;
    auto g = [&net](double t) { return net.composed_map(t) - t; };

    // Sign-change scan. The composed map is monotone and gamma^{1/2}-convex,
    // so at most three crossings exist; more means the hypotheses failed.
    std::vector<double> roots;
    std::vector<std::pair<double, double>> brackets;
    double t_prev = 0.0, g_prev = g(0.0);
    if (g_prev == 0.0) roots.push_back(0.0);
    for (int k = 1; k <= N; ++k) {
        const double t = B * k / N;
        const double gv = g(t);
        if (gv == 0.0)
            roots.push_back(t);
        else if (g_prev != 0.0 && std::signbit(gv) != std::signbit(g_prev))
            brackets.emplace_back(t_prev, t);
        t_prev = t;
        g_prev = gv;
    }
    if (roots.size() + brackets.size() > 3)
        throw SuspectCount("find_equilibria: more than three sign changes on the search grid; "
                           "network hypotheses are suspect");

    for (auto [a, b] : brackets) {
        double ga = g(a);
        double m = 0.5 * (a + b), gm = 0.0;
        bool accepted = false;
        for (int it = 0; it < 200; ++it) {
            m = 0.5 * (a + b);
            gm = g(m);
            if (std::abs(gm) <= tol) {
                accepted = true;
                break;
            }
            if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(m))) {
                // Steep maps amplify the residual floor to ~eps*|f'|*t; the
                // bracket itself is converged to a few ulps.
                const double slope = std::abs(net.composed_map_derivative(m));
                if (std::abs(gm) <= tol * (1.0 + slope) * (1.0 + std::abs(m)))
                    accepted = true;
                else
                    throw ConvergenceFailure(
                        "find_equilibria: bisection stalled with residual " +
                        std::to_string(gm) + " at t = " + std::to_string(m));
                break;
            }
            if (std::signbit(gm) == std::signbit(ga)) {
                a = m;
                ga = gm;
            } else {
                b = m;
            }
        }
        if (!accepted)
            throw ConvergenceFailure("find_equilibria: bisection did not converge");
        // One Newton polish step with the chain-rule derivative.
        const double slope = net.composed_map_derivative(m) - 1.0;
        if (std::abs(slope) > 1e-300) {
            const double t_newton = m - gm / slope;
            if (t_newton > 0.0 && t_newton < B && std::abs(g(t_newton)) <= std::abs(gm))
                m = t_newton;
        }
        roots.push_back(m);
    }
    std::sort(roots.begin(), roots.end());

    // Merge near-coincident roots (tangency) and flag them.
    std::vector<std::pair<double, bool>> merged;
    for (double t : roots) {
        if (!merged.empty() && t - merged.back().first < 10.0 * tol) {
            merged.back().first = 0.5 * (merged.back().first + t);
            merged.back().second = true;
        } else {
            merged.emplace_back(t, false);
        }
    }

    if (!net.even_feedback() && merged.size() != 1)
        throw SuspectCount("find_equilibria: odd feedback network must have exactly one "
                           "equilibrium, found " + std::to_string(merged.size()));

    std::vector<Equilibrium> out;
    out.reserve(merged.size());
    const int d = net.dimension();
    for (auto [t, degenerate] : merged) {
        Equilibrium eq;
        eq.x_bar = net.lift(t);
        eq.p = net.p_value(eq.x_bar);
        eq.g = net.g_value(eq.x_bar);
        eq.degenerate = degenerate;
        double res = 0.0;
        for (int i = 0; i < d; ++i) {
            const double xp = eq.x_bar[static_cast<size_t>(CyclicNetwork::predecessor(i, d))];
            res = std::max(res, std::abs(net.alpha()[static_cast<size_t>(i)] *
                                             net.function(i)(xp) -
                                         eq.x_bar[static_cast<size_t>(i)]));
        }
        eq.residual = res;
        out.push_back(std::move(eq));
    }
    return out;
}

} // namespace cyclone

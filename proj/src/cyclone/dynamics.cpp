#include "cyclone/dynamics.hpp"

#include "cyclone/errors.hpp"
#include "cyclone/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cyclone {

std::vector<double> vector_field(const CyclicNetwork& net, std::span<const double> x) {
    const int d = net.dimension();
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("vector_field: state length must equal the dimension");
    std::vector<double> w(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double xp = x[static_cast<size_t>(CyclicNetwork::predecessor(i, d))];
        w[static_cast<size_t>(i)] =
            net.alpha()[static_cast<size_t>(i)] * net.function(i)(xp) - x[static_cast<size_t>(i)];
    }
    return w;
}

void Trajectory::append(double t, std::span<const double> x, std::span<const double> dx) {
    times_.push_back(t);
    states_.insert(states_.end(), x.begin(), x.end());
    derivs_.insert(derivs_.end(), dx.begin(), dx.end());
}

std::size_t Trajectory::locate(double t) const {
    // Index of the segment [t_k, t_{k+1}] containing t.
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times_.begin());
    if (k > 0) --k;
    if (k + 1 >= times_.size()) k = times_.size() - 2;
    return k;
}

std::vector<double> Trajectory::interpolate(double t) const {
    std::vector<double> out(static_cast<size_t>(d_));
    for (int i = 0; i < d_; ++i) out[static_cast<size_t>(i)] = interpolate_component(t, i);
    return out;
}

double Trajectory::interpolate_component(double t, int i) const {
    if (times_.size() < 2) return state(0)[static_cast<size_t>(i)];
    const std::size_t k = locate(t);
    const double t0 = times_[k], t1 = times_[k + 1];
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double y0 = state(k)[static_cast<size_t>(i)], y1 = state(k + 1)[static_cast<size_t>(i)];
    const double m0 = derivative(k)[static_cast<size_t>(i)] * h;
    const double m1 = derivative(k + 1)[static_cast<size_t>(i)] * h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * m1;
}

namespace detail {

namespace {
// Dormand-Prince RK5(4) tableau. The last stage row equals the 5th-order
// weights (FSAL), e[] is the difference to the embedded 4th-order solution.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
} // namespace

Trajectory rk45(const Rhs& rhs, int dim, std::span<const double> x0, double t_end,
                const IntegrateOptions& opts, bool clamp_nonnegative) {
    if (!(t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be > 0");
    const std::size_t n = static_cast<std::size_t>(dim);
    std::vector<double> y(x0.begin(), x0.end());
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

    Trajectory traj(dim);
    double t = 0.0;
    rhs(t, y, k1);
    traj.append(t, y, k1);

    double h;
    if (opts.fixed_step > 0.0) {
        h = opts.fixed_step;
    } else if (opts.initial_step > 0.0) {
        h = opts.initial_step;
    } else {
        double ynorm = 0.0, fnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ynorm = std::max(ynorm, std::abs(y[i]));
            fnorm = std::max(fnorm, std::abs(k1[i]));
        }
        h = std::min(opts.max_step, 0.01 * (1.0 + ynorm) / (1.0 + fnorm));
    }

    double err_prev = 1.0;
    const double h_min_floor = 1e-14;
    while (t < t_end) {
        if (opts.fixed_step <= 0.0) h = std::min(h, opts.max_step);
        h = std::min(h, t_end - t);
        if (h < h_min_floor * std::max(1.0, std::abs(t)))
            throw StepSizeUnderflow("integrate: step size underflow at t = " + std::to_string(t));

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] =
                y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale =
                opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double q = ei / scale;
            err += q * q;
        }
        err = std::sqrt(err / static_cast<double>(n));

        const bool accept = opts.fixed_step > 0.0 || err <= 1.0;
        if (accept) {
            t += h;
            bool clamped = false;
            if (clamp_nonnegative) {
                for (std::size_t i = 0; i < n; ++i) {
                    if (ynew[i] < 0.0) {
                        traj.stats().min_component = std::min(traj.stats().min_component, ynew[i]);
                        ynew[i] = 0.0;
                        clamped = true;
                    }
                }
            }
            y = ynew;
            if (clamped)
                rhs(t, y, k7); // stored derivative must match the stored state
            k1 = k7;           // FSAL
            traj.append(t, y, k1);
            ++traj.stats().accepted;
            if (opts.fixed_step <= 0.0) {
                const double safe = err <= std::numeric_limits<double>::min()
                                        ? 5.0
                                        : 0.9 * std::pow(err, -0.14) * std::pow(err_prev, 0.08);
                h *= std::clamp(safe, 0.2, 5.0);
                err_prev = std::max(err, 1e-10);
            }
        } else {
            ++traj.stats().rejected;
            const double safe = 0.9 * std::pow(err, -0.2);
            h *= std::clamp(safe, 0.2, 1.0);
        }
    }
    return traj;
}

double halton(std::uint64_t index, std::uint32_t base) {
    double f = 1.0, v = 0.0;
    while (index > 0) {
        f /= base;
        v += f * static_cast<double>(index % base);
        index /= base;
    }
    return v;
}

} // namespace detail

Trajectory integrate(const CyclicNetwork& net, std::span<const double> x0, double t_end,
                     const IntegrateOptions& opts) {
    const int d = net.dimension();
    if (static_cast<int>(x0.size()) != d)
        throw std::invalid_argument("integrate: x0 length must equal the dimension");
    for (double v : x0)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("integrate: x0 must be nonnegative and finite");

    // Internal RK stage points can dip a hair below zero; evaluate the
    // regulation input clamped so the field stays defined.
    auto rhs = [&net, d](double, std::span<const double> x, std::span<double> w) {
        for (int i = 0; i < d; ++i) {
            const double xp = x[static_cast<size_t>(CyclicNetwork::predecessor(i, d))];
            w[static_cast<size_t>(i)] =
                net.alpha()[static_cast<size_t>(i)] * net.function(i)(xp < 0.0 ? 0.0 : xp) -
                x[static_cast<size_t>(i)];
        }
    };
    return detail::rk45(rhs, d, x0, t_end, opts, /*clamp_nonnegative=*/true);
}

std::string_view attractor_kind_name(AttractorKind k) {
    switch (k) {
    case AttractorKind::ConvergedToEquilibrium: return "ConvergedToEquilibrium";
    case AttractorKind::PeriodicOrbit: return "PeriodicOrbit";
    case AttractorKind::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

namespace {

// Time of the upward crossing of `level` by coordinate `coord` inside the
// segment [time(k), time(k+1)], located by bisecting the cubic Hermite
// interpolant.
double crossing_time(const Trajectory& traj, std::size_t k, int coord, double level) {
    double lo = traj.time(k), hi = traj.time(k + 1);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (traj.interpolate_component(mid, coord) < level)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

AttractorReport detect_attractor(const Trajectory& traj,
                                 const std::vector<Equilibrium>& equilibria,
                                 const DetectOptions& opts) {
    AttractorReport rep;
    rep.t_end_used = traj.t_end();
    const int d = traj.dimension();
    const std::size_t m = traj.size();
    if (m < 2) return rep;
    const double t0 = traj.t_begin(), t1 = traj.t_end();
    const double tail_start = t1 - 0.10 * (t1 - t0);

    // Equilibrium match: the tail must stay inside the radius.
    for (std::size_t e = 0; e < equilibria.size(); ++e) {
        const auto& xbar = equilibria[e].x_bar;
        bool inside = true;
        for (std::size_t k = m; k-- > 0;) {
            if (traj.time(k) < tail_start) break;
            const auto x = traj.state(k);
            for (int i = 0; i < d; ++i) {
                if (std::abs(x[static_cast<size_t>(i)] - xbar[static_cast<size_t>(i)]) >
                    opts.eq_radius) {
                    inside = false;
                    break;
                }
            }
            if (!inside) break;
        }
        if (!inside) continue;
        rep.kind = AttractorKind::ConvergedToEquilibrium;
        rep.equilibrium_index = static_cast<int>(e);
        // Earliest time after which the trajectory never leaves the radius.
        double transient = t0;
        for (std::size_t k = m; k-- > 0;) {
            const auto x = traj.state(k);
            bool in = true;
            for (int i = 0; i < d; ++i)
                in = in && std::abs(x[static_cast<size_t>(i)] - xbar[static_cast<size_t>(i)]) <=
                               opts.eq_radius;
            if (!in) {
                transient = k + 1 < m ? traj.time(k + 1) : t1;
                break;
            }
        }
        rep.transient_time = transient - t0;
        return rep;
    }

    // Periodic orbit: upward crossings of the section level on x_1.
    const double window_start = std::min(t0 + opts.transient, tail_start);
    std::size_t first = 0;
    while (first < m && traj.time(first) < window_start) ++first;
    if (first + 1 >= m) return rep;

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::vector<double> amp_lo(static_cast<size_t>(d), lo), amp_hi(static_cast<size_t>(d), hi);
    for (std::size_t k = first; k < m; ++k) {
        const auto x = traj.state(k);
        for (int i = 0; i < d; ++i) {
            amp_lo[static_cast<size_t>(i)] =
                std::min(amp_lo[static_cast<size_t>(i)], x[static_cast<size_t>(i)]);
            amp_hi[static_cast<size_t>(i)] =
                std::max(amp_hi[static_cast<size_t>(i)], x[static_cast<size_t>(i)]);
        }
    }
    rep.amplitude.resize(static_cast<size_t>(d));
    double max_amp = 0.0;
    for (int i = 0; i < d; ++i) {
        rep.amplitude[static_cast<size_t>(i)] =
            amp_hi[static_cast<size_t>(i)] - amp_lo[static_cast<size_t>(i)];
        max_amp = std::max(max_amp, rep.amplitude[static_cast<size_t>(i)]);
    }
    if (max_amp <= opts.min_amplitude) return rep;

    const double level = amp_lo[0] + opts.section_level_fraction * (amp_hi[0] - amp_lo[0]);
    std::vector<double> crossings;
    for (std::size_t k = first; k + 1 < m; ++k) {
        const double x0v = traj.state(k)[0], x1v = traj.state(k + 1)[0];
        if (x0v < level && x1v >= level) crossings.push_back(crossing_time(traj, k, 0, level));
    }
    if (crossings.size() < static_cast<std::size_t>(opts.min_return_times) + 1) return rep;

    std::vector<double> returns(crossings.size() - 1);
    for (std::size_t k = 0; k + 1 < crossings.size(); ++k)
        returns[k] = crossings[k + 1] - crossings[k];

    auto agreeing = [&](std::span<const double> r) {
        const double mn = *std::min_element(r.begin(), r.end());
        const double mx = *std::max_element(r.begin(), r.end());
        const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
        return mx - mn <= opts.period_rtol * mean;
    };
    std::span<const double> used(returns);
    if (!agreeing(used)) {
        // Early returns may still carry transient; retry with the tail ones.
        const std::size_t keep = std::min<std::size_t>(returns.size(), 8);
        if (keep < static_cast<std::size_t>(opts.min_return_times)) return rep;
        used = std::span<const double>(returns).last(keep);
        if (!agreeing(used)) return rep;
    }
    if (used.size() < static_cast<std::size_t>(opts.min_return_times)) return rep;

    rep.kind = AttractorKind::PeriodicOrbit;
    rep.period = std::accumulate(used.begin(), used.end(), 0.0) / static_cast<double>(used.size());
    const auto s_prev = traj.interpolate(crossings[crossings.size() - 2]);
    const auto s_last = traj.interpolate(crossings.back());
    double res = 0.0;
    for (int i = 0; i < d; ++i)
        res = std::max(res, std::abs(s_last[static_cast<size_t>(i)] -
                                     s_prev[static_cast<size_t>(i)]));
    rep.poincare_residual = res;
    rep.transient_time = crossings.front() - t0;
    return rep;
}

AttractorReport simulate_and_detect(const CyclicNetwork& net, std::span<const double> x0,
                                    double t_end, const IntegrateOptions& iopts,
                                    const DetectOptions& dopts,
                                    const std::vector<Equilibrium>* equilibria,
                                    Trajectory* out_traj) {
    std::vector<Equilibrium> local;
    if (!equilibria) {
        local = find_equilibria(net);
        equilibria = &local;
    }
    Trajectory traj = integrate(net, x0, t_end, iopts);
    AttractorReport rep = detect_attractor(traj, *equilibria, dopts);
    if (rep.kind == AttractorKind::Undetermined) {
        traj = integrate(net, x0, 2.0 * t_end, iopts);
        rep = detect_attractor(traj, *equilibria, dopts);
    }
    if (out_traj) *out_traj = std::move(traj);
    return rep;
}

BasinStats sample_basins(const CyclicNetwork& net, std::span<const double> lo,
                         std::span<const double> hi, int count, std::uint64_t seed, double t_end,
                         const IntegrateOptions& iopts, const DetectOptions& dopts) {
    const int d = net.dimension();
    if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d)
        throw std::invalid_argument("sample_basins: box bounds must have length d");
    for (int i = 0; i < d; ++i)
        if (!(lo[static_cast<size_t>(i)] >= 0.0) ||
            !(hi[static_cast<size_t>(i)] >= lo[static_cast<size_t>(i)]))
            throw std::invalid_argument("sample_basins: box must satisfy 0 <= lo <= hi");
    if (count < 1) throw std::invalid_argument("sample_basins: count must be >= 1");

    static constexpr std::uint32_t primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                               23, 29, 31, 37, 41, 43, 47, 53};
    if (d > static_cast<int>(std::size(primes)))
        throw std::invalid_argument("sample_basins: dimension too large for the Halton bases");

    const std::vector<Equilibrium> eqs = find_equilibria(net);
    const std::uint64_t offset = (seed % 65536) + 1;

    std::vector<AttractorKind> kinds(static_cast<size_t>(count));
    std::vector<int> eq_index(static_cast<size_t>(count), -1);
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t j) {
        std::vector<double> x0(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) {
            const double u = detail::halton(offset + j, primes[i]);
            x0[static_cast<size_t>(i)] =
                lo[static_cast<size_t>(i)] +
                u * (hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)]);
        }
        const AttractorReport rep = simulate_and_detect(net, x0, t_end, iopts, dopts, &eqs);
        kinds[j] = rep.kind;
        eq_index[j] = rep.equilibrium_index;
    });

    BasinStats stats;
    stats.equilibrium_hits.assign(eqs.size(), 0);
    stats.total = count;
    for (std::size_t j = 0; j < static_cast<size_t>(count); ++j) {
        switch (kinds[j]) {
        case AttractorKind::ConvergedToEquilibrium:
            ++stats.equilibrium_hits[static_cast<size_t>(eq_index[j])];
            break;
        case AttractorKind::PeriodicOrbit: ++stats.periodic; break;
        case AttractorKind::Undetermined: ++stats.undetermined; break;
        }
    }
    return stats;
}

} // namespace cyclone

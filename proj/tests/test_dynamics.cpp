#include "cyclone/dynamics.hpp"

#include "cyclone/errors.hpp"
#include "cyclone/stability.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

using namespace cyclone;

namespace {

CyclicNetwork toggle(double a) {
    return CyclicNetwork({RegulationFunction::hill(0.0, 2.0), RegulationFunction::hill(0.0, 2.0)},
                         {a, a});
}

CyclicNetwork repressilator(double a) {
    return CyclicNetwork({RegulationFunction::hill(0.0, 4.0), RegulationFunction::hill(0.0, 4.0),
                          RegulationFunction::hill(0.0, 4.0)},
                         {a, a, a});
}

} // namespace

TEST_CASE("vector field closed forms") {
    const auto rep = repressilator(3.0);
    const std::vector<double> ones{1.0, 1.0, 1.0};
    const auto w = vector_field(rep, ones);
    for (double v : w) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));

    const CyclicNetwork moebius(
        {RegulationFunction::hill(0.0, 1.0), RegulationFunction::hill(0.0, 1.0)}, {1.0, 1.0});
    const std::vector<double> zero{0.0, 0.0};
    const auto w2 = vector_field(moebius, zero);
    CHECK(w2[0] == 1.0);
    CHECK(w2[1] == 1.0);

    // The field vanishes at an equilibrium up to the solver residual.
    const auto eqs = find_equilibria(rep);
    const auto weq = vector_field(rep, eqs[0].x_bar);
    for (double v : weq) CHECK(std::abs(v) <= 1e-10);
}

TEST_CASE("integration reaches the attracting point of the moebius toggle") {
    const CyclicNetwork net(
        {RegulationFunction::hill(0.0, 1.0), RegulationFunction::hill(0.0, 1.0)}, {1.0, 1.0});
    const std::vector<double> x0{0.0, 0.0};
    const auto traj = integrate(net, x0, 30.0);
    const double phi = oracle::bisect([](double x) { return x * x + x - 1.0; }, 0.0, 1.0);
    const auto final_state = traj.state(traj.size() - 1);
    CHECK(std::abs(final_state[0] - phi) < 1e-6);
    CHECK(std::abs(final_state[1] - phi) < 1e-6);
}

TEST_CASE("the repressilator keeps oscillating at alpha = 3") {
    const auto net = repressilator(3.0);
    const std::vector<double> x0{0.9, 1.3, 0.7};
    const auto traj = integrate(net, x0, 200.0);
    std::vector<double> lo(3, 1e300), hi(3, -1e300);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.time(k) < 150.0) continue;
        const auto x = traj.state(k);
        for (int i = 0; i < 3; ++i) {
            lo[static_cast<size_t>(i)] = std::min(lo[static_cast<size_t>(i)], x[static_cast<size_t>(i)]);
            hi[static_cast<size_t>(i)] = std::max(hi[static_cast<size_t>(i)], x[static_cast<size_t>(i)]);
        }
    }
    for (int i = 0; i < 3; ++i)
        CHECK(hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)] > 0.5);
}

TEST_CASE("a mixed hill/affine loop with odd feedback settles") {
    const CyclicNetwork net(
        {RegulationFunction::hill(0.0, 1.0), RegulationFunction::affine(1.0, 1.0)}, {1.0, 1.0});
    REQUIRE(net.decreasing_count() == 1);
    const std::vector<double> x0{5.0, 5.0};
    const auto eqs = find_equilibria(net);
    REQUIRE(eqs.size() == 1);
    const auto rep = simulate_and_detect(net, x0, 100.0, {}, {}, &eqs);
    CHECK(rep.kind == AttractorKind::ConvergedToEquilibrium);
    CHECK(rep.equilibrium_index == 0);
}

TEST_CASE("states stay inside the physical cone and the absorbing box") {
    const auto net = repressilator(3.0);
    IntegrateOptions opts;
    const std::vector<std::vector<double>> starts{{0.0, 0.0, 0.0}, {8.0, 0.0, 3.0}, {0.01, 4.0, 0.0}};
    for (const auto& x0 : starts) {
        const auto traj = integrate(net, x0, 120.0, opts);
        CHECK(traj.stats().min_component >= -opts.abs_tol);
        double bound = net.fixed_point_bound();
        bool absorbed = false;
        double absorbed_at = 0.0;
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const auto x = traj.state(k);
            bool inside = true;
            for (int i = 0; i < 3; ++i) {
                CHECK(x[static_cast<size_t>(i)] >= 0.0);
                inside = inside && x[static_cast<size_t>(i)] <= bound + 1e-6;
            }
            if (inside && !absorbed) {
                absorbed = true;
                absorbed_at = traj.time(k);
            }
            if (!inside && absorbed) absorbed = false; // must hold from some time onward
        }
        CHECK(absorbed);
        CHECK(absorbed_at < 60.0);
    }
}

TEST_CASE("step-halving shows at least fourth order on the linear testbed") {
    // x' = -x + c with exact solution c + (x0 - c) e^{-t}.
    const double c = 2.0, x0v = 5.0, T = 2.0;
    const auto rhs = [c](double, std::span<const double> x, std::span<double> w) {
        w[0] = -x[0] + c;
    };
    auto error_at = [&](double h) {
        IntegrateOptions opts;
        opts.fixed_step = h;
        const std::vector<double> x0{x0v};
        const auto traj = detail::rk45(rhs, 1, x0, T, opts, false);
        const double exact = c + (x0v - c) * std::exp(-T);
        return std::abs(traj.state(traj.size() - 1)[0] - exact);
    };
    const double e1 = error_at(0.1);
    const double e2 = error_at(0.05);
    const double order = std::log2(e1 / e2);
    CHECK(order >= 4.0);
}

TEST_CASE("the controller gives up on a pathological field") {
    const auto rhs = [](double t, std::span<const double>, std::span<double> w) {
        w[0] = 1e12 * std::cos(1e12 * t); // unresolvable oscillation
    };
    IntegrateOptions opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-12;
    const std::vector<double> x0{0.0};
    CHECK_THROWS_AS(detail::rk45(rhs, 1, x0, 10.0, opts, false), StepSizeUnderflow);
}

TEST_CASE("input validation") {
    const auto net = toggle(3.0);
    const std::vector<double> bad{-0.1, 1.0};
    CHECK_THROWS_AS(integrate(net, bad, 10.0), std::invalid_argument);
    const std::vector<double> short_vec{1.0};
    CHECK_THROWS_AS(integrate(net, short_vec, 10.0), std::invalid_argument);
    const std::vector<double> ok{1.0, 1.0};
    CHECK_THROWS_AS(integrate(net, ok, -1.0), std::invalid_argument);
}

TEST_CASE("attractor detection on the toggle") {
    const auto net = toggle(3.0);
    const auto eqs = find_equilibria(net);
    REQUIRE(eqs.size() == 3);

    SUBCASE("a generic start lands on the nearby stable point") {
        const std::vector<double> x0{0.1, 3.0};
        Trajectory traj(2);
        const auto rep = simulate_and_detect(net, x0, 200.0, {}, {}, &eqs, &traj);
        REQUIRE(rep.kind == AttractorKind::ConvergedToEquilibrium);
        const auto& hit = eqs[static_cast<size_t>(rep.equilibrium_index)];
        CHECK(std::abs(hit.p) < 1.0);
        CHECK(hit.x_bar[1] > hit.x_bar[0]); // the high-x2 well
    }
    SUBCASE("starting exactly at an equilibrium has zero transient") {
        const auto rep0 = simulate_and_detect(net, eqs[0].x_bar, 120.0, {}, {}, &eqs);
        CHECK(rep0.kind == AttractorKind::ConvergedToEquilibrium);
        CHECK(rep0.equilibrium_index == 0);
        CHECK(rep0.transient_time == 0.0);
    }
}

TEST_CASE("repressilator period is robust to tolerance and section phase") {
    const auto net = repressilator(3.0);
    const auto eqs = find_equilibria(net);
    const std::vector<double> x0{0.9, 1.3, 0.7};

    IntegrateOptions tight;
    tight.rel_tol = 1e-8;
    Trajectory traj(3);
    const auto rep8 = simulate_and_detect(net, x0, 200.0, tight, {}, &eqs, &traj);
    REQUIRE(rep8.kind == AttractorKind::PeriodicOrbit);
    CHECK(rep8.period > 0.0);
    CHECK(rep8.poincare_residual < 1e-4);

    tight.rel_tol = 1e-10;
    const auto rep10 = simulate_and_detect(net, x0, 200.0, tight, {}, &eqs);
    REQUIRE(rep10.kind == AttractorKind::PeriodicOrbit);
    CHECK(std::abs(rep8.period - rep10.period) <= 1e-3 * rep8.period);

    DetectOptions phase;
    phase.section_level_fraction = 0.35;
    const auto rep_lo = detect_attractor(traj, eqs, phase);
    phase.section_level_fraction = 0.65;
    const auto rep_hi = detect_attractor(traj, eqs, phase);
    REQUIRE(rep_lo.kind == AttractorKind::PeriodicOrbit);
    REQUIRE(rep_hi.kind == AttractorKind::PeriodicOrbit);
    CHECK(std::abs(rep_lo.period - rep8.period) <= 1e-3 * rep8.period);
    CHECK(std::abs(rep_hi.period - rep8.period) <= 1e-3 * rep8.period);
}

TEST_CASE("even feedback loops do not read as periodic") {
    std::mt19937_64 rng(909);
    oracle::NetGenOptions opts;
    opts.force_even = true;
    opts.d_max = 4;
    for (int k = 0; k < 10; ++k) {
        const auto net = oracle::random_network(rng, opts);
        const auto eqs = find_equilibria(net);
        for (int j = 0; j < 4; ++j) {
            const auto x0 = oracle::random_positive_vector(rng, net.dimension(), 0.0, 4.0);
            const auto rep = simulate_and_detect(net, x0, 400.0, {}, {}, &eqs);
            CHECK(rep.kind != AttractorKind::PeriodicOrbit);
        }
    }
}

TEST_CASE("basin sampling on the reference instances") {
    SUBCASE("bistable toggle: both wells reached, the ridge never") {
        const auto net = toggle(3.0);
        const std::vector<double> lo{0.0, 0.0}, hi{4.0, 4.0};
        const auto stats = sample_basins(net, lo, hi, 120, 7);
        REQUIRE(stats.equilibrium_hits.size() == 3);
        CHECK(stats.equilibrium_hits[0] > 0);
        CHECK(stats.equilibrium_hits[1] == 0);
        CHECK(stats.equilibrium_hits[2] > 0);
        CHECK(stats.periodic == 0);
        CHECK(stats.undetermined == 0);
    }
    SUBCASE("monostable toggle: everything converges to the unique point") {
        const auto net = toggle(1.0);
        const std::vector<double> lo{0.0, 0.0}, hi{4.0, 4.0};
        const auto stats = sample_basins(net, lo, hi, 60, 3);
        REQUIRE(stats.equilibrium_hits.size() == 1);
        CHECK(stats.equilibrium_hits[0] == 60);
    }
    SUBCASE("repressilator: the periodic orbit dominates") {
        const auto net = repressilator(3.0);
        const std::vector<double> lo{0.0, 0.0, 0.0}, hi{3.0, 3.0, 3.0};
        const auto stats = sample_basins(net, lo, hi, 40, 11);
        CHECK(stats.periodic >= 39);
    }
}

TEST_CASE("basin sampling is reproducible and thread-invariant") {
    const auto net = toggle(3.0);
    const std::vector<double> lo{0.0, 0.0}, hi{4.0, 4.0};
    const auto a = sample_basins(net, lo, hi, 50, 123);
    const auto b = sample_basins(net, lo, hi, 50, 123);
    CHECK(a.equilibrium_hits == b.equilibrium_hits);

    setenv("CYCLONE_THREADS", "1", 1);
    const auto serial = sample_basins(net, lo, hi, 50, 123);
    setenv("CYCLONE_THREADS", "4", 1);
    const auto wide = sample_basins(net, lo, hi, 50, 123);
    unsetenv("CYCLONE_THREADS");
    CHECK(serial.equilibrium_hits == wide.equilibrium_hits);
    CHECK(serial.periodic == wide.periodic);

    // A different seed reads different points.
    const auto c = sample_basins(net, lo, hi, 50, 124);
    CHECK(c.total == 50);
}

TEST_CASE("halton sequences are low-discrepancy-ish and deterministic") {
    CHECK(detail::halton(1, 2) == 0.5);
    CHECK(detail::halton(2, 2) == 0.25);
    CHECK(detail::halton(3, 2) == 0.75);
    CHECK(detail::halton(1, 3) == doctest::Approx(1.0 / 3.0));
    // Every value stays inside (0, 1).
    for (std::uint64_t i = 1; i <= 1000; ++i) {
        for (std::uint32_t base : {2u, 3u, 5u}) {
            const double v = detail::halton(i, base);
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
    }
}

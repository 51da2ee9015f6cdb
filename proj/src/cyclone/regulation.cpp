#include "cyclone/regulation.hpp"

#include "cyclone/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cyclone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x^r for x >= 0 with a fast path for small integer exponents; these
// dominate the sweep and brute-force scan workloads.
double pow_pos(double x, double r) {
    if (r == 1.0) return x;
    if (r == 2.0) return x * x;
    if (r == 3.0) return x * x * x;
    if (r == 4.0) {
        const double s = x * x;
        return s * s;
    }
    double ri;
    if (std::modf(r, &ri) == 0.0 && r > 0.0 && r <= 32.0) {
        double acc = 1.0, base = x;
        int e = static_cast<int>(r);
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }
    return std::pow(x, r);
}

// Limit at x -> 0+ of sum_k coeff_k * x^{exp_k}: the term with the smallest
// exponent and nonzero coefficient decides.
double power_series_limit(const double* coeff, const double* expo, int n) {
    double best_exp = kInf;
    double best_coeff = 0.0;
    for (int k = 0; k < n; ++k) {
        if (coeff[k] == 0.0) continue;
        if (expo[k] < best_exp) {
            best_exp = expo[k];
            best_coeff = coeff[k];
        }
    }
    if (best_coeff == 0.0) return 0.0;
    if (best_exp > 0.0) return 0.0;
    if (best_exp == 0.0) return best_coeff;
    return std::copysign(kInf, best_coeff);
}

double hill_eval(double lambda, double r, double x) {
    const double u = pow_pos(x, r);
    // lambda + (1 - lambda)/(1 + u) is exact in the u -> inf limit.
    return lambda + (1.0 - lambda) / (1.0 + u);
}

// Derivatives of (1 + lambda x^r)/(1 + x^r):
//   f'   = r(l-1) x^{r-1} / (1+u)^2
//   f''  = r(l-1) x^{r-2} [(r-1) - (r+1)u] / (1+u)^3
//   f''' = r(l-1) x^{r-3} [(r-1)(r-2) - 4(r^2-1)u + (r+1)(r+2)u^2] / (1+u)^4
Derivatives hill_derivatives(double lambda, double r, double x) {
    Derivatives d;
    const double c = r * (lambda - 1.0);
    if (x == 0.0) {
        // One-sided limits; the constant terms of the bracketed factors
        // survive, everything else scales like a positive power of x.
        {
            const double coeff[] = {c};
            const double expo[] = {r - 1.0};
            d.d1 = power_series_limit(coeff, expo, 1);
        }
        {
            const double coeff[] = {c * (r - 1.0), -c * (r + 1.0)};
            const double expo[] = {r - 2.0, 2.0 * r - 2.0};
            d.d2 = power_series_limit(coeff, expo, 2);
        }
        {
            const double coeff[] = {c * (r - 1.0) * (r - 2.0),
                                    -4.0 * c * (r * r - 1.0),
                                    c * (r + 1.0) * (r + 2.0)};
            const double expo[] = {r - 3.0, 2.0 * r - 3.0, 3.0 * r - 3.0};
            d.d3 = power_series_limit(coeff, expo, 3);
        }
        return d;
    }
    const double u = pow_pos(x, r);
    const double base = 1.0 + u;
    const double xr1 = u / x;
    const double xr2 = xr1 / x;
    const double xr3 = xr2 / x;
    const double b2 = base * base;
    d.d1 = c * xr1 / b2;
    d.d2 = c * xr2 * ((r - 1.0) - (r + 1.0) * u) / (b2 * base);
    d.d3 = c * xr3 *
           ((r - 1.0) * (r - 2.0) - 4.0 * (r * r - 1.0) * u +
            (r + 1.0) * (r + 2.0) * u * u) /
           (b2 * b2);
    return d;
}

} // namespace

RegulationFunction RegulationFunction::hill(double lambda, double r) {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("hill: lambda must be >= 0");
    if (lambda == 1.0)
        throw std::invalid_argument("hill: lambda = 1 gives f' == 0 and is rejected");
    if (!(r >= 1.0))
        throw std::invalid_argument("hill: r must be >= 1");
    RegulationFunction f;
    f.kind_ = RegulationKind::Hill;
    f.lambda_ = lambda;
    f.r_ = r;
    f.monotone_sign_ = lambda > 1.0 ? +1 : -1;
    return f;
}

RegulationFunction RegulationFunction::affine(double a, double b) {
    if (!(b > 0.0))
        throw std::invalid_argument("affine: b must be > 0");
    if (a == 0.0)
        throw std::invalid_argument("affine: a must be nonzero");
    if (a < 0.0)
        throw std::invalid_argument(
            "affine: a < 0 would make f negative on [0,inf); use a decreasing hill instead");
    RegulationFunction f;
    f.kind_ = RegulationKind::Affine;
    f.a_ = a;
    f.b_ = b;
    f.monotone_sign_ = +1;
    return f;
}

RegulationFunction RegulationFunction::shifted_hill(double lambda, double r, double shift) {
    if (!(shift >= 0.0))
        throw std::invalid_argument("shifted_hill: shift must be >= 0");
    RegulationFunction f = hill(lambda, r);
    f.kind_ = RegulationKind::ShiftedHill;
    f.shift_ = shift;
    return f;
}

double RegulationFunction::sup_value() const {
    switch (kind_) {
    case RegulationKind::Hill:
        return std::max(1.0, lambda_);
    case RegulationKind::ShiftedHill:
        return std::max(hill_eval(lambda_, r_, shift_), lambda_);
    case RegulationKind::Affine:
        return kInf;
    }
    return kInf;
}

double RegulationFunction::operator()(double x) const {
    if (!(x >= 0.0))
        throw std::domain_error("regulation function evaluated at x < 0");
    switch (kind_) {
    case RegulationKind::Hill:
        return hill_eval(lambda_, r_, x);
    case RegulationKind::ShiftedHill:
        return hill_eval(lambda_, r_, x + shift_);
    case RegulationKind::Affine:
        return a_ * x + b_;
    }
    return 0.0;
}

Derivatives RegulationFunction::derivatives(double x) const {
    if (!(x >= 0.0))
        throw std::domain_error("regulation function derivatives at x < 0");
    switch (kind_) {
    case RegulationKind::Hill:
        return hill_derivatives(lambda_, r_, x);
    case RegulationKind::ShiftedHill:
        return hill_derivatives(lambda_, r_, x + shift_);
    case RegulationKind::Affine:
        return Derivatives{a_, 0.0, 0.0};
    }
    return {};
}

double RegulationFunction::schwarzian(double x) const {
    const Derivatives d = derivatives(x);
    if (std::abs(d.d1) < 1e-300)
        throw SingularDerivative("schwarzian: |f'| below machine threshold at x = " +
                                 std::to_string(x));
    const double q = d.d2 / d.d1;
    return d.d3 / d.d1 - 1.5 * q * q;
}

double RegulationFunction::log_sensitivity_sup() const {
    switch (kind_) {
    case RegulationKind::Hill:
        // |x f'/f| = r|l-1| u / ((1+u)(1+l u)), u = x^r, maximized at
        // u = 1/sqrt(l) with value r|l-1|/(1+sqrt(l))^2; the l = 0 case
        // increases to the limit r.
        if (lambda_ == 0.0) return r_;
        return r_ * std::abs(lambda_ - 1.0) /
               ((1.0 + std::sqrt(lambda_)) * (1.0 + std::sqrt(lambda_)));
    case RegulationKind::Affine:
        // a x / (a x + b) increases to 1, never attained.
        return 1.0;
    case RegulationKind::ShiftedHill: {
        if (shift_ == 0.0) return RegulationFunction::hill(lambda_, r_).log_sensitivity_sup();
        // No closed form; the target vanishes at both ends when lambda > 0
        // and increases to r when lambda = 0.
        auto target = [this](double x) {
            const Derivatives d = derivatives(x);
            return std::abs(x * d.d1 / (*this)(x));
        };
        const double tail = lambda_ == 0.0 ? r_ : 0.0;
        const int coarse = 2048;
        const double llo = std::log(1e-9), lhi = std::log(1e9);
        double best = 0.0, best_l = llo;
        for (int k = 0; k <= coarse; ++k) {
            const double l = llo + (lhi - llo) * k / coarse;
            const double v = target(std::exp(l));
            if (v > best) {
                best = v;
                best_l = l;
            }
        }
        // Golden-section refinement on log-x around the coarse argmax.
        const double step = (lhi - llo) / coarse;
        double a = best_l - step, b = best_l + step;
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
        double f1 = target(std::exp(x1)), f2 = target(std::exp(x2));
        while (b - a > 1e-10) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + phi * (b - a);
                f2 = target(std::exp(x2));
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - phi * (b - a);
                f1 = target(std::exp(x1));
            }
        }
        return std::max({best, f1, f2, tail});
    }
    }
    return 0.0;
}

std::string RegulationFunction::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case RegulationKind::Hill:
        os << "hill(lambda=" << lambda_ << ", r=" << r_ << ")";
        break;
    case RegulationKind::ShiftedHill:
        os << "shifted_hill(lambda=" << lambda_ << ", r=" << r_ << ", shift=" << shift_ << ")";
        break;
    case RegulationKind::Affine:
        os << "affine(a=" << a_ << ", b=" << b_ << ")";
        break;
    }
    return os.str();
}

namespace detail {

ConvexityCertificate scan_schwarzian(const std::function<double(double)>& schwarzian_at,
                                     double lo, double hi, int grid_points, double tol) {
    if (!(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("convexity scan: interval must satisfy 0 < lo < hi");
    if (grid_points < 16)
        throw std::invalid_argument("convexity scan: need at least 16 grid points");

    ConvexityCertificate cert;
    cert.lo = lo;
    cert.hi = hi;
    cert.grid_points = grid_points;
    cert.tol = tol;
    cert.max_schwarzian = -kInf;

    const double llo = std::log(lo), lhi = std::log(hi);
    bool all_strict = true;
    for (int k = 0; k < grid_points; ++k) {
        const double x = std::exp(llo + (lhi - llo) * k / (grid_points - 1));
        const double s = schwarzian_at(x);
        cert.max_schwarzian = std::max(cert.max_schwarzian, s);
        if (s > tol) {
            cert.cls = ConvexityClass::Violated;
            cert.witness = x;
            return cert;
        }
        if (s >= -tol) all_strict = false;
    }
    cert.cls = all_strict ? ConvexityClass::StrictlyConvex : ConvexityClass::Convex;
    return cert;
}

} // namespace detail

ConvexityCertificate check_gamma_half_convex(const RegulationFunction& f, double lo, double hi,
                                             int grid_points, double tol) {
    return detail::scan_schwarzian([&f](double x) { return f.schwarzian(x); }, lo, hi,
                                   grid_points, tol);
}

} // namespace cyclone

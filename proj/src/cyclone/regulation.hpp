#pragma once

#include <functional>
#include <string>

namespace cyclone {

enum class RegulationKind { Hill, Affine, ShiftedHill };

struct Derivatives {
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

/// One monotone C^3 regulation stage f: [0,inf) -> (0,inf).
///
/// Admissible families:
///   hill(lambda, r)          f(x) = (1 + lambda x^r) / (1 + x^r), lambda >= 0,
///                            lambda != 1, r >= 1
///   affine(a, b)             f(x) = a x + b, a > 0, b > 0
///   shifted_hill(l, r, s)    f(x) = hill(x + s), s >= 0
///
/// All of them have nonvanishing derivative on (0, inf) and nonpositive
/// Schwarzian derivative, i.e. 1/sqrt(|f'|) is convex.
class RegulationFunction {
public:
    static RegulationFunction hill(double lambda, double r);
    static RegulationFunction affine(double a, double b);
    static RegulationFunction shifted_hill(double lambda, double r, double shift);

    RegulationKind kind() const { return kind_; }
    double lambda() const { return lambda_; }
    double r() const { return r_; }
    double shift() const { return shift_; }
    double a() const { return a_; }
    double b() const { return b_; }

    /// +1 increasing, -1 decreasing.
    int monotone_sign() const { return monotone_sign_; }
    bool is_decreasing() const { return monotone_sign_ < 0; }

    /// True when sup_{x>=0} f(x) is finite (Hill families; affine is not).
    bool bounded() const { return kind_ != RegulationKind::Affine; }
    /// sup_{x>=0} f(x); +inf for affine.
    double sup_value() const;

    /// f(x). Throws std::domain_error for x < 0.
    double operator()(double x) const;

    /// Closed-form (f', f'', f''') at x >= 0. At x = 0 the one-sided limits
    /// are returned; they can be infinite for non-integer r < 3.
    Derivatives derivatives(double x) const;

    /// S(f)(x) = f'''/f' - (3/2)(f''/f')^2.
    /// Throws SingularDerivative when |f'(x)| vanishes (e.g. x = 0, r > 1).
    double schwarzian(double x) const;

    /// sup_{x>0} |x f'(x) / f(x)|; the per-stage factor of the network
    /// sensitivity product. Closed form for hill/affine, numeric
    /// maximization for shifted hill.
    double log_sensitivity_sup() const;

    std::string describe() const;

private:
    RegulationFunction() = default;

    RegulationKind kind_ = RegulationKind::Hill;
    double lambda_ = 0.0, r_ = 1.0, shift_ = 0.0; // hill families
    double a_ = 0.0, b_ = 0.0;                    // affine
    int monotone_sign_ = 0;
};

enum class ConvexityClass { StrictlyConvex, Convex, Violated };

struct ConvexityCertificate {
    ConvexityClass cls = ConvexityClass::Convex;
    double witness = 0.0;        // x with S(f)(x) > tol, valid when Violated
    double max_schwarzian = 0.0; // max over the scanned grid
    double lo = 0.0, hi = 0.0;
    int grid_points = 0;
    double tol = 0.0;
};

/// Grid certificate for convexity of 1/sqrt(|f'|): StrictlyConvex iff
/// S(f) < -tol at every scan point, Violated (with witness) iff S(f) > tol
/// somewhere, Convex otherwise.
ConvexityCertificate check_gamma_half_convex(const RegulationFunction& f,
                                             double lo = 1e-3, double hi = 1e3,
                                             int grid_points = 512,
                                             double tol = 1e-9);

namespace detail {
/// Scan an arbitrary Schwarzian evaluation on a log-spaced grid.
ConvexityCertificate scan_schwarzian(const std::function<double(double)>& schwarzian_at,
                                     double lo, double hi, int grid_points, double tol);
} // namespace detail

} // namespace cyclone

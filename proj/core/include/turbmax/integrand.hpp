#pragma once

#include <functional>
#include <span>
#include <string>

#include "turbmax/growth.hpp"

namespace turbmax {

/// A continuous integrand f on phase space together with its recession
/// function on the growth structure's surface.  The recession function is the
/// limit of f(dilation(s, theta)) / (1 + recession_normalizer(s)) as s grows;
/// callers are responsible for supplying the matching pair.
///
/// Convexity is advertised, not enforced: the pairing and the functional
/// evaluate any integrand, while the selector's line search and the equality
/// characterization of the defect lean on the strictly_convex and
/// quadratic_along_lines flags.
class ConvexIntegrand {
public:
    using EvalFn = std::function<double(std::span<const double>)>;
    using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

    ConvexIntegrand(std::string name, GrowthStructure growth, EvalFn eval, EvalFn recession,
                    GradFn gradient, bool strictly_convex, bool quadratic_along_lines);

    /// f(z) = |z|^2 under quadratic growth; recession is identically 1.
    static ConvexIntegrand squared_norm();
    /// f(z) = |z|^2 / 2 under quadratic growth; recession is identically 1/2.
    static ConvexIntegrand kinetic_energy();
    /// f(a1, a') = |a'|^2/2 + a1^gamma/(gamma-1) under isentropic growth;
    /// recession (b1, b') -> |b'|^2/2 + b1^gamma/(gamma-1).
    static ConvexIntegrand isentropic_energy(double gamma);

    double operator()(std::span<const double> z) const { return eval_(z); }
    double eval(std::span<const double> z) const { return eval_(z); }
    double recession(std::span<const double> theta) const { return recession_(theta); }

    bool has_gradient() const noexcept { return static_cast<bool>(gradient_); }
    void gradient(std::span<const double> z, std::span<double> out) const;

    const GrowthStructure& growth() const noexcept { return growth_; }
    bool strictly_convex() const noexcept { return strictly_convex_; }
    /// True when t -> f(a + t*b) is a polynomial of degree <= 2 for all a, b;
    /// enables the exact three-point line search.
    bool quadratic_along_lines() const noexcept { return quadratic_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
    GrowthStructure growth_;
    EvalFn eval_;
    EvalFn recession_;
    GradFn gradient_;
    bool strictly_convex_;
    bool quadratic_;
};

} // namespace turbmax

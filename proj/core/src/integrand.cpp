#include "turbmax/integrand.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace turbmax {

namespace {

double sq_norm(std::span<const double> z) {
    double s = 0.0;
    for (const double v : z) {
        s += v * v;
    }
    return s;
}

} // namespace

ConvexIntegrand::ConvexIntegrand(std::string name, GrowthStructure growth, EvalFn eval,
                                 EvalFn recession, GradFn gradient, bool strictly_convex,
                                 bool quadratic_along_lines)
    : name_(std::move(name)),
      growth_(growth),
      eval_(std::move(eval)),
      recession_(std::move(recession)),
      gradient_(std::move(gradient)),
      strictly_convex_(strictly_convex),
      quadratic_(quadratic_along_lines) {
    if (!eval_ || !recession_) {
        throw std::invalid_argument("ConvexIntegrand: eval and recession are required");
    }
}

void ConvexIntegrand::gradient(std::span<const double> z, std::span<double> out) const {
    if (!gradient_) {
        throw std::logic_error("ConvexIntegrand::gradient: integrand '" + name_ +
                               "' has no gradient");
    }
    if (out.size() != z.size()) {
        throw std::invalid_argument("ConvexIntegrand::gradient: output span size mismatch");
    }
    gradient_(z, out);
}

ConvexIntegrand ConvexIntegrand::squared_norm() {
    return ConvexIntegrand(
        "squared_norm", GrowthStructure::quadratic(),
        [](std::span<const double> z) { return sq_norm(z); },
        [](std::span<const double>) { return 1.0; },
        [](std::span<const double> z, std::span<double> g) {
            for (std::size_t i = 0; i < z.size(); ++i) {
                g[i] = 2.0 * z[i];
            }
        },
        /*strictly_convex=*/true, /*quadratic_along_lines=*/true);
}

ConvexIntegrand ConvexIntegrand::kinetic_energy() {
    return ConvexIntegrand(
        "kinetic_energy", GrowthStructure::quadratic(),
        [](std::span<const double> z) { return 0.5 * sq_norm(z); },
        [](std::span<const double>) { return 0.5; },
        [](std::span<const double> z, std::span<double> g) {
            for (std::size_t i = 0; i < z.size(); ++i) {
                g[i] = z[i];
            }
        },
        /*strictly_convex=*/true, /*quadratic_along_lines=*/true);
}

ConvexIntegrand ConvexIntegrand::isentropic_energy(double gamma) {
    const GrowthStructure growth = GrowthStructure::isentropic(gamma);
    const double gm1 = gamma - 1.0;
    auto energy = [gamma, gm1](std::span<const double> z) {
        if (z.size() < 2) {
            throw std::invalid_argument("isentropic_energy: phase point needs a density and momentum block");
        }
        return 0.5 * sq_norm(z.subspan(1)) + std::pow(z[0], gamma) / gm1;
    };
    // The recession has the same shape as the energy itself: both pressure
    // and kinetic part grow exactly like the weight normalizer s^(2*gamma).
    auto grad = [gamma, gm1](std::span<const double> z, std::span<double> g) {
        g[0] = gamma * std::pow(z[0], gm1) / gm1;
        for (std::size_t i = 1; i < z.size(); ++i) {
            g[i] = z[i];
        }
    };
    return ConvexIntegrand("isentropic_energy", growth, energy, energy, grad,
                           /*strictly_convex=*/true,
                           /*quadratic_along_lines=*/gamma == 2.0);
}

} // namespace turbmax

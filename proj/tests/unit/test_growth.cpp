#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "turbmax/growth.hpp"
#include "turbmax/integrand.hpp"

using namespace turbmax;

TEST_CASE("quadratic growth: weight, projection, dilation") {
    const GrowthStructure g = GrowthStructure::quadratic();
    CHECK(g.kind() == GrowthKind::PowerP);
    CHECK(g.exponent() == 2.0);
    CHECK(g.is_quadratic());

    const std::vector<double> z{3.0, 4.0};
    CHECK(g.weight(z) == doctest::Approx(26.0));

    const SurfaceProjection p = g.project(z);
    CHECK(p.s == doctest::Approx(5.0));
    CHECK(p.theta[0] == doctest::Approx(0.6));
    CHECK(p.theta[1] == doctest::Approx(0.8));
    CHECK(g.surface_residual(p.theta) == doctest::Approx(0.0));

    std::vector<double> out(2);
    g.dilation(p.s, p.theta, out);
    CHECK(out[0] == doctest::Approx(3.0));
    CHECK(out[1] == doctest::Approx(4.0));

    CHECK(g.recession_normalizer(10.0) == doctest::Approx(100.0));
    CHECK_THROWS_AS(g.project(std::vector<double>{0.0, 0.0}), std::domain_error);
}

TEST_CASE("power growth with general exponent") {
    const GrowthStructure g = GrowthStructure::power(3.0);
    CHECK_FALSE(g.is_quadratic());
    const std::vector<double> z{2.0, 0.0};
    CHECK(g.weight(z) == doctest::Approx(1.0 + 8.0));
    CHECK(g.recession_normalizer(2.0) == doctest::Approx(8.0));
    CHECK_THROWS_AS(GrowthStructure::power(0.5), std::invalid_argument);
}

TEST_CASE("isentropic growth projection matches the closed form") {
    const GrowthStructure g = GrowthStructure::isentropic(2.0);

    // z = (2, (2, 0)): s = (a1^(2 gamma) + |a'|^4)^(1/(4 gamma)) = 32^(1/8) = 2^(5/8)
    const std::vector<double> z{2.0, 2.0, 0.0};
    const SurfaceProjection p = g.project(z);
    CHECK(p.s == doctest::Approx(std::pow(2.0, 5.0 / 8.0)));
    CHECK(g.surface_residual(p.theta) == doctest::Approx(0.0).epsilon(1e-12));

    // dilation reproduces z: (s^2 b1, s^gamma b')
    std::vector<double> out(3);
    g.dilation(p.s, p.theta, out);
    CHECK(out[0] == doctest::Approx(2.0));
    CHECK(out[1] == doctest::Approx(2.0));
    CHECK(out[2] == doctest::Approx(0.0));

    CHECK(g.weight(z) == doctest::Approx(1.0 + std::sqrt(16.0 + 16.0)));
    CHECK(g.recession_normalizer(2.0) == doctest::Approx(16.0));

    CHECK_THROWS_AS(g.project(std::vector<double>{-1.0, 0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(GrowthStructure::isentropic(1.0), std::invalid_argument);
}

TEST_CASE("surface residual flags off-surface and negative-density points") {
    const GrowthStructure g = GrowthStructure::isentropic(1.4);
    const std::vector<double> on = g.project(std::vector<double>{1.0, 0.5, 0.2}).theta;
    CHECK(g.surface_residual(on) == doctest::Approx(0.0).epsilon(1e-12));
    std::vector<double> off = on;
    off[1] += 0.5;
    CHECK(std::abs(g.surface_residual(off)) > 1e-3);
    std::vector<double> bad = on;
    bad[0] = -0.1;
    CHECK(g.surface_residual(bad) > 1.0);
}

TEST_CASE("growth compatibility and description") {
    const GrowthStructure q = GrowthStructure::quadratic();
    const GrowthStructure p3 = GrowthStructure::power(3.0);
    const GrowthStructure is = GrowthStructure::isentropic(2.0);
    CHECK(q.compatible_with(GrowthStructure::power(2.0)));
    CHECK_FALSE(q.compatible_with(p3));
    CHECK_FALSE(q.compatible_with(is));
    CHECK(q.describe() == "quadratic");
    CHECK(is.describe() == "isentropic(gamma=2)");
}

TEST_CASE("squared norm integrand and its recession") {
    const ConvexIntegrand f = ConvexIntegrand::squared_norm();
    const std::vector<double> z{1.0, 2.0};
    CHECK(f(z) == doctest::Approx(5.0));
    CHECK(f.recession(std::vector<double>{0.6, 0.8}) == doctest::Approx(1.0));
    std::vector<double> grad(2);
    f.gradient(z, grad);
    CHECK(grad[0] == doctest::Approx(2.0));
    CHECK(grad[1] == doctest::Approx(4.0));
    CHECK(f.strictly_convex());
    CHECK(f.quadratic_along_lines());
}

TEST_CASE("kinetic energy integrand") {
    const ConvexIntegrand f = ConvexIntegrand::kinetic_energy();
    CHECK(f(std::vector<double>{3.0, 4.0}) == doctest::Approx(12.5));
    CHECK(f.recession(std::vector<double>{0.0, 1.0}) == doctest::Approx(0.5));
}

TEST_CASE("isentropic energy integrand and gradient") {
    const double gamma = 1.4;
    const ConvexIntegrand f = ConvexIntegrand::isentropic_energy(gamma);
    const std::vector<double> a{2.0, 1.0, -1.0};
    // f = |a'|^2/2 + a1^gamma/(gamma-1)
    CHECK(f(a) == doctest::Approx(1.0 + std::pow(2.0, gamma) / 0.4));
    std::vector<double> grad(3);
    f.gradient(a, grad);
    CHECK(grad[0] == doctest::Approx(gamma * std::pow(2.0, gamma - 1.0) / 0.4));
    CHECK(grad[1] == doctest::Approx(1.0));
    CHECK(grad[2] == doctest::Approx(-1.0));
    CHECK_FALSE(f.quadratic_along_lines());
    CHECK(ConvexIntegrand::isentropic_energy(2.0).quadratic_along_lines());
}

TEST_CASE("recession limits of the built-in energies") {
    // kinetic: f(s theta)/(1 + s^2) -> 1/2
    const ConvexIntegrand kin = ConvexIntegrand::kinetic_energy();
    const GrowthStructure q = kin.growth();
    const std::vector<double> theta{0.6, 0.8};
    double prev = 1e100;
    for (const double s : {1e2, 1e3, 1e4}) {
        std::vector<double> z(2);
        q.dilation(s, theta, z);
        const double approx = kin(z) / (1.0 + q.recession_normalizer(s));
        const double rel = std::abs(approx - kin.recession(theta)) / kin.recession(theta);
        CHECK(rel < prev);
        prev = rel;
    }
    CHECK(prev <= 1e-6);

    const double gamma = 1.4;
    const ConvexIntegrand ise = ConvexIntegrand::isentropic_energy(gamma);
    const GrowthStructure gi = ise.growth();
    const std::vector<double> beta = gi.project(std::vector<double>{1.0, 1.0, 0.5}).theta;
    prev = 1e100;
    for (const double s : {1e2, 1e3, 1e4}) {
        std::vector<double> z(3);
        gi.dilation(s, beta, z);
        const double approx = ise(z) / (1.0 + gi.recession_normalizer(s));
        const double rel = std::abs(approx - ise.recession(beta)) / ise.recession(beta);
        CHECK(rel < prev);
        prev = rel;
    }
    CHECK(prev <= 1e-6);
}

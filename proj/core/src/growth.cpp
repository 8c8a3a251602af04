#include "turbmax/growth.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

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

GrowthStructure GrowthStructure::power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw std::invalid_argument("GrowthStructure::power: p must be finite and >= 1");
    }
    return GrowthStructure(GrowthKind::PowerP, p);
}

GrowthStructure GrowthStructure::isentropic(double gamma) {
    if (!(gamma > 1.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("GrowthStructure::isentropic: gamma must be finite and > 1");
    }
    return GrowthStructure(GrowthKind::Isentropic, gamma);
}

double GrowthStructure::weight(std::span<const double> z) const {
    if (kind_ == GrowthKind::PowerP) {
        return 1.0 + std::pow(std::sqrt(sq_norm(z)), exponent_);
    }
    if (z.size() < 2) {
        throw std::invalid_argument("GrowthStructure::weight: isentropic phase points need a density and at least one momentum coordinate");
    }
    const double m2 = sq_norm(z.subspan(1));
    return 1.0 + std::sqrt(std::pow(std::abs(z[0]), 2.0 * exponent_) + m2 * m2);
}

void GrowthStructure::dilation(double s, std::span<const double> theta, std::span<double> out) const {
    if (out.size() != theta.size()) {
        throw std::invalid_argument("GrowthStructure::dilation: output span size mismatch");
    }
    if (!(s >= 0.0) || !std::isfinite(s)) {
        throw std::invalid_argument("GrowthStructure::dilation: s must be finite and nonnegative");
    }
    if (kind_ == GrowthKind::PowerP) {
        for (std::size_t i = 0; i < theta.size(); ++i) {
            out[i] = s * theta[i];
        }
        return;
    }
    if (theta.size() < 2) {
        throw std::invalid_argument("GrowthStructure::dilation: isentropic phase points need at least two coordinates");
    }
    out[0] = s * s * theta[0];
    const double sg = std::pow(s, exponent_);
    for (std::size_t i = 1; i < theta.size(); ++i) {
        out[i] = sg * theta[i];
    }
}

double GrowthStructure::recession_normalizer(double s) const {
    if (kind_ == GrowthKind::PowerP) {
        return std::pow(s, exponent_);
    }
    return std::pow(s, 2.0 * exponent_);
}

double GrowthStructure::surface_residual(std::span<const double> theta) const {
    if (kind_ == GrowthKind::PowerP) {
        return std::abs(sq_norm(theta) - 1.0);
    }
    if (theta.size() < 2) {
        throw std::invalid_argument("GrowthStructure::surface_residual: isentropic phase points need at least two coordinates");
    }
    if (theta[0] < 0.0) {
        return 1.0 + std::abs(theta[0]);
    }
    const double m2 = sq_norm(theta.subspan(1));
    return std::abs(std::pow(theta[0], 2.0 * exponent_) + m2 * m2 - 1.0);
}

SurfaceProjection GrowthStructure::project(std::span<const double> z) const {
    SurfaceProjection out;
    out.theta.assign(z.begin(), z.end());
    if (kind_ == GrowthKind::PowerP) {
        const double r = std::sqrt(sq_norm(z));
        if (r == 0.0) {
            throw std::domain_error("GrowthStructure::project: zero vector has no direction");
        }
        out.s = r;
        for (double& c : out.theta) {
            c /= r;
        }
        return out;
    }
    if (z.size() < 2) {
        throw std::invalid_argument("GrowthStructure::project: isentropic phase points need at least two coordinates");
    }
    if (z[0] < 0.0) {
        std::ostringstream os;
        os << "GrowthStructure::project: density coordinate must be nonnegative, got " << z[0];
        throw std::domain_error(os.str());
    }
    const double m2 = sq_norm(z.subspan(1));
    const double radius = std::pow(z[0], 2.0 * exponent_) + m2 * m2;
    if (radius == 0.0) {
        throw std::domain_error("GrowthStructure::project: zero vector has no direction");
    }
    // Solve weight-radius(dilation(s, theta)) = s^(4*gamma) for s.
    const double s = std::pow(radius, 1.0 / (4.0 * exponent_));
    out.s = s;
    out.theta[0] = z[0] / (s * s);
    const double sg = std::pow(s, exponent_);
    for (std::size_t i = 1; i < out.theta.size(); ++i) {
        out.theta[i] = z[i] / sg;
    }
    return out;
}

std::string GrowthStructure::describe() const {
    std::ostringstream os;
    if (kind_ == GrowthKind::PowerP) {
        if (exponent_ == 2.0) {
            os << "quadratic";
        } else {
            os << "power(p=" << exponent_ << ")";
        }
    } else {
        os << "isentropic(gamma=" << exponent_ << ")";
    }
    return os.str();
}

} // namespace turbmax

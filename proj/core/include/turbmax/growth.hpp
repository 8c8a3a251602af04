#pragma once

#include <span>
#include <string>
#include <vector>

namespace turbmax {

enum class GrowthKind {
    PowerP,     ///< weight 1 + |z|^p, isotropic dilation z -> s*z
    Isentropic, ///< weight 1 + sqrt(a1^(2g) + |a'|^4), dilation (s^2 b1, s^g b')
};

/// Result of factoring a phase point through the dilation group: the point
/// equals dilation(s, theta) with theta on the recession surface.
struct SurfaceProjection {
    double s = 0.0;
    std::vector<double> theta;
};

/// Growth and dilation structure of the phase space.  PowerP scales all
/// coordinates alike and its recession surface is the unit sphere.  The
/// isentropic structure treats the first coordinate as a density (scaling
/// like s^2) and the rest as momentum-type coordinates (scaling like
/// s^gamma); its recession surface is {b1^(2*gamma) + |b'|^4 = 1, b1 >= 0}.
class GrowthStructure {
public:
    static GrowthStructure quadratic() { return power(2.0); }
    static GrowthStructure power(double p);
    static GrowthStructure isentropic(double gamma);

    GrowthKind kind() const noexcept { return kind_; }
    /// p for PowerP, gamma for Isentropic.
    double exponent() const noexcept { return exponent_; }
    bool is_quadratic() const noexcept { return kind_ == GrowthKind::PowerP && exponent_ == 2.0; }

    /// 1 + |z|^p, resp. 1 + sqrt(|a1|^(2g) + |a'|^4).
    double weight(std::span<const double> z) const;

    /// Image of a surface point theta under the dilation of parameter s.
    void dilation(double s, std::span<const double> theta, std::span<double> out) const;

    /// Growth of the weight along the dilation orbit: weight(dilation(s, theta))
    /// equals 1 + recession_normalizer_power(s) for theta on the surface.
    double recession_normalizer(double s) const;

    /// | surface equation residual |; 0 means theta lies on the surface.
    /// For Isentropic a negative density coordinate is reported as off-surface.
    double surface_residual(std::span<const double> theta) const;

    /// Factor z = dilation(s, theta) with theta on the surface.  Throws for
    /// the zero vector, and for Isentropic when the density coordinate is
    /// negative.
    SurfaceProjection project(std::span<const double> z) const;

    bool compatible_with(const GrowthStructure& other) const noexcept {
        return kind_ == other.kind_ && exponent_ == other.exponent_;
    }

    std::string describe() const;

private:
    GrowthStructure(GrowthKind kind, double exponent) : kind_(kind), exponent_(exponent) {}

    GrowthKind kind_;
    double exponent_;
};

} // namespace turbmax

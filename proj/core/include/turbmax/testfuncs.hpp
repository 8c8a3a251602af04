#pragma once

#include <span>
#include <string>
#include <vector>

namespace turbmax {

/// Polynomial-in-t profile with compact support in [0, T): every profile
/// vanishes at t = T.  Stored as coefficients in the rescaled variable
/// tau = t/T.
class TimeProfile {
public:
    TimeProfile(std::vector<double> coeff_in_tau, double T, std::string label);

    /// (1 - tau)^j.
    static TimeProfile decaying_power(int j, double T);
    /// tau^a * (1 - tau)^b with b >= 1.
    static TimeProfile bump(int a, int b, double T);

    double value(double t) const;
    double derivative(double t) const;
    double at_zero() const { return value(0.0); }
    const std::string& label() const noexcept { return label_; }

private:
    std::vector<double> coeff_;
    double T_;
    std::string label_;
};

/// Real Fourier mode on the torus: cos(k.x) or sin(k.x), or the constant 1
/// when k = 0.
class SpatialMode {
public:
    static SpatialMode constant(int d);
    static SpatialMode wave(std::vector<int> k, bool is_sin);

    int d() const noexcept { return static_cast<int>(k_.size()); }
    bool is_constant() const noexcept { return constant_; }
    std::span<const int> k() const noexcept { return k_; }

    double value(std::span<const double> x) const;
    void gradient(std::span<const double> x, std::span<double> out) const;
    const std::string& label() const noexcept { return label_; }

private:
    SpatialMode() = default;
    std::vector<int> k_;
    bool is_sin_ = false;
    bool constant_ = false;
    std::string label_;
};

/// psi(t, x) = eta(t) * chi(x).
struct ScalarTestFunction {
    TimeProfile eta;
    SpatialMode chi;
    std::string label;

    double value(double t, std::span<const double> x) const;
    double dt(double t, std::span<const double> x) const;
    void gradient(double t, std::span<const double> x, std::span<double> out) const;
};

/// phi(t, x) = eta(t) * chi(x) * dir, a vector field with constant direction.
struct VectorTestFunction {
    TimeProfile eta;
    SpatialMode chi;
    std::vector<double> dir;
    bool divergence_free = false;
    std::string label;

    void value(double t, std::span<const double> x, std::span<double> out) const;
    void dt(double t, std::span<const double> x, std::span<double> out) const;
    /// Row-major d x d Jacobian, out[j*d + k] = d phi_k / d x_j.
    void gradient(double t, std::span<const double> x, std::span<double> out) const;
    double divergence(double t, std::span<const double> x) const;
};

/// Finite family of space-time test functions used to probe the weak form:
/// tensor products of polynomial time profiles (all vanishing at t = T) with
/// Fourier modes up to a wavenumber cap.  The incompressible variant projects
/// every vector direction onto the orthogonal complement of its wavevector,
/// so all vector entries are divergence free; the compressible variant keeps
/// all coordinate directions.
struct TestFunctionDictionary {
    std::vector<ScalarTestFunction> scalars;
    std::vector<VectorTestFunction> vectors;

    static TestFunctionDictionary incompressible(double T, int d, int max_wavenumber = 3,
                                                 int time_profile_count = 4);
    static TestFunctionDictionary compressible(double T, int d, int max_wavenumber = 3,
                                               int time_profile_count = 4);
};

/// The time profiles used by both dictionary builders, in order.
std::vector<TimeProfile> standard_time_profiles(double T, int count);

/// Lexicographically positive wavevectors with |k|_inf <= max_wavenumber,
/// deduplicating k and -k.
std::vector<std::vector<int>> wavevectors_up_to(int d, int max_wavenumber);

} // namespace turbmax

#include "turbmax/testfuncs.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace turbmax {

namespace {

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

std::vector<double> one_minus_tau_power(int j) {
    std::vector<double> p{1.0};
    const std::vector<double> lin{1.0, -1.0};
    for (int i = 0; i < j; ++i) {
        p = poly_mul(p, lin);
    }
    return p;
}

double horner(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) {
        v = v * x + c[i];
    }
    return v;
}

std::string wavevector_label(std::span<const int> k) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < k.size(); ++i) {
        os << (i == 0 ? "" : ",") << k[i];
    }
    os << ")";
    return os.str();
}

} // namespace

TimeProfile::TimeProfile(std::vector<double> coeff_in_tau, double T, std::string label)
    : coeff_(std::move(coeff_in_tau)), T_(T), label_(std::move(label)) {
    if (coeff_.empty() || !(T > 0.0)) {
        throw std::invalid_argument("TimeProfile: need coefficients and positive T");
    }
    if (std::abs(horner(coeff_, 1.0)) > 1e-14) {
        throw std::invalid_argument("TimeProfile '" + label_ + "' does not vanish at t = T");
    }
}

TimeProfile TimeProfile::decaying_power(int j, double T) {
    if (j < 1) {
        throw std::invalid_argument("TimeProfile::decaying_power: exponent must be >= 1");
    }
    std::ostringstream os;
    os << "(1-t/T)^" << j;
    return TimeProfile(one_minus_tau_power(j), T, os.str());
}

TimeProfile TimeProfile::bump(int a, int b, double T) {
    if (a < 1 || b < 1) {
        throw std::invalid_argument("TimeProfile::bump: exponents must be >= 1");
    }
    std::vector<double> p(static_cast<std::size_t>(a) + 1, 0.0);
    p[static_cast<std::size_t>(a)] = 1.0;
    p = poly_mul(p, one_minus_tau_power(b));
    std::ostringstream os;
    os << "(t/T)^" << a << "(1-t/T)^" << b;
    return TimeProfile(std::move(p), T, os.str());
}

double TimeProfile::value(double t) const { return horner(coeff_, t / T_); }

double TimeProfile::derivative(double t) const {
    const double tau = t / T_;
    double v = 0.0;
    for (std::size_t i = coeff_.size(); i-- > 1;) {
        v = v * tau + coeff_[i] * static_cast<double>(i);
    }
    return v / T_;
}

SpatialMode SpatialMode::constant(int d) {
    SpatialMode m;
    m.k_.assign(static_cast<std::size_t>(d), 0);
    m.constant_ = true;
    m.label_ = "1";
    return m;
}

SpatialMode SpatialMode::wave(std::vector<int> k, bool is_sin) {
    bool nonzero = false;
    for (const int c : k) {
        nonzero = nonzero || c != 0;
    }
    if (!nonzero) {
        throw std::invalid_argument("SpatialMode::wave: zero wavevector, use constant()");
    }
    SpatialMode m;
    m.label_ = std::string(is_sin ? "sin" : "cos") + wavevector_label(k);
    m.k_ = std::move(k);
    m.is_sin_ = is_sin;
    return m;
}

double SpatialMode::value(std::span<const double> x) const {
    if (constant_) {
        return 1.0;
    }
    double phase = 0.0;
    for (std::size_t i = 0; i < k_.size(); ++i) {
        phase += k_[i] * x[i];
    }
    return is_sin_ ? std::sin(phase) : std::cos(phase);
}

void SpatialMode::gradient(std::span<const double> x, std::span<double> out) const {
    if (constant_) {
        for (double& v : out) {
            v = 0.0;
        }
        return;
    }
    double phase = 0.0;
    for (std::size_t i = 0; i < k_.size(); ++i) {
        phase += k_[i] * x[i];
    }
    const double radial = is_sin_ ? std::cos(phase) : -std::sin(phase);
    for (std::size_t i = 0; i < k_.size(); ++i) {
        out[i] = radial * k_[i];
    }
}

double ScalarTestFunction::value(double t, std::span<const double> x) const {
    return eta.value(t) * chi.value(x);
}

double ScalarTestFunction::dt(double t, std::span<const double> x) const {
    return eta.derivative(t) * chi.value(x);
}

void ScalarTestFunction::gradient(double t, std::span<const double> x,
                                  std::span<double> out) const {
    chi.gradient(x, out);
    const double e = eta.value(t);
    for (double& v : out) {
        v *= e;
    }
}

void VectorTestFunction::value(double t, std::span<const double> x, std::span<double> out) const {
    const double s = eta.value(t) * chi.value(x);
    for (std::size_t i = 0; i < dir.size(); ++i) {
        out[i] = s * dir[i];
    }
}

void VectorTestFunction::dt(double t, std::span<const double> x, std::span<double> out) const {
    const double s = eta.derivative(t) * chi.value(x);
    for (std::size_t i = 0; i < dir.size(); ++i) {
        out[i] = s * dir[i];
    }
}

void VectorTestFunction::gradient(double t, std::span<const double> x,
                                  std::span<double> out) const {
    const std::size_t d = dir.size();
    thread_local std::vector<double> grad_chi;
    grad_chi.resize(d);
    chi.gradient(x, grad_chi);
    const double e = eta.value(t);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t kk = 0; kk < d; ++kk) {
            out[j * d + kk] = e * grad_chi[j] * dir[kk];
        }
    }
}

double VectorTestFunction::divergence(double t, std::span<const double> x) const {
    const std::size_t d = dir.size();
    thread_local std::vector<double> grad_chi;
    grad_chi.resize(d);
    chi.gradient(x, grad_chi);
    double div = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        div += grad_chi[j] * dir[j];
    }
    return eta.value(t) * div;
}

std::vector<TimeProfile> standard_time_profiles(double T, int count) {
    if (count < 1) {
        throw std::invalid_argument("standard_time_profiles: count must be positive");
    }
    std::vector<TimeProfile> out;
    out.reserve(static_cast<std::size_t>(count));
    // The leading profiles keep eta(0) != 0 so that initial-condition terms
    // are visible; later ones add interior bumps.
    for (int j = 1; j <= count && j <= 3; ++j) {
        out.push_back(TimeProfile::decaying_power(j, T));
    }
    int a = 1;
    int b = 1;
    while (static_cast<int>(out.size()) < count) {
        out.push_back(TimeProfile::bump(a, b, T));
        if (a <= b) {
            ++a;
        } else {
            ++b;
        }
    }
    return out;
}

std::vector<std::vector<int>> wavevectors_up_to(int d, int max_wavenumber) {
    if (d < 1 || max_wavenumber < 0) {
        throw std::invalid_argument("wavevectors_up_to: bad arguments");
    }
    std::vector<std::vector<int>> out;
    std::vector<int> k(static_cast<std::size_t>(d), -max_wavenumber);
    const int K = max_wavenumber;
    while (true) {
        // Keep only lexicographically positive vectors: k and -k generate the
        // same pair of real modes.
        int first_nonzero = 0;
        for (const int c : k) {
            if (c != 0) {
                first_nonzero = c;
                break;
            }
        }
        if (first_nonzero > 0) {
            out.push_back(k);
        }
        int axis = d - 1;
        while (axis >= 0) {
            if (k[static_cast<std::size_t>(axis)] < K) {
                ++k[static_cast<std::size_t>(axis)];
                break;
            }
            k[static_cast<std::size_t>(axis)] = -K;
            --axis;
        }
        if (axis < 0) {
            break;
        }
    }
    return out;
}

namespace {

// Orthonormal basis of the orthogonal complement of k, built by projecting
// the standard basis and running deterministic Gram-Schmidt.
std::vector<std::vector<double>> complement_basis(const std::vector<int>& k) {
    const std::size_t d = k.size();
    std::vector<double> kd(k.begin(), k.end());
    double k2 = 0.0;
    for (const double c : kd) {
        k2 += c * c;
    }
    std::vector<std::vector<double>> basis;
    for (std::size_t axis = 0; axis < d && basis.size() + 1 < d + 1; ++axis) {
        std::vector<double> v(d, 0.0);
        v[axis] = 1.0;
        const double vk = kd[axis];
        for (std::size_t i = 0; i < d; ++i) {
            v[i] -= vk * kd[i] / k2;
        }
        for (const auto& b : basis) {
            double dot = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                dot += v[i] * b[i];
            }
            for (std::size_t i = 0; i < d; ++i) {
                v[i] -= dot * b[i];
            }
        }
        double n2 = 0.0;
        for (const double c : v) {
            n2 += c * c;
        }
        if (n2 > 1e-18) {
            const double inv = 1.0 / std::sqrt(n2);
            for (double& c : v) {
                c *= inv;
            }
            basis.push_back(std::move(v));
        }
        if (basis.size() == d - 1) {
            break;
        }
    }
    return basis;
}

TestFunctionDictionary build_dictionary(double T, int d, int K, int profile_count,
                                        bool project_divergence_free) {
    if (d < 1) {
        throw std::invalid_argument("TestFunctionDictionary: spatial dimension must be >= 1");
    }
    if (K < 1) {
        throw std::invalid_argument("TestFunctionDictionary: wavenumber cap must be >= 1");
    }
    TestFunctionDictionary dict;
    const std::vector<TimeProfile> profiles = standard_time_profiles(T, profile_count);
    const std::vector<std::vector<int>> waves = wavevectors_up_to(d, K);

    std::vector<SpatialMode> scalar_modes;
    scalar_modes.push_back(SpatialMode::constant(d));
    for (const auto& k : waves) {
        scalar_modes.push_back(SpatialMode::wave(k, /*is_sin=*/false));
        scalar_modes.push_back(SpatialMode::wave(k, /*is_sin=*/true));
    }

    for (const TimeProfile& eta : profiles) {
        for (const SpatialMode& chi : scalar_modes) {
            ScalarTestFunction f{eta, chi, eta.label() + "*" + chi.label()};
            dict.scalars.push_back(std::move(f));
        }
    }

    const auto push_vector = [&](const TimeProfile& eta, const SpatialMode& chi,
                                 std::vector<double> dir, bool div_free, int dir_index) {
        std::ostringstream os;
        os << eta.label() << "*" << chi.label() << "*e" << dir_index;
        VectorTestFunction f{eta, chi, std::move(dir), div_free, os.str()};
        dict.vectors.push_back(std::move(f));
    };

    for (const TimeProfile& eta : profiles) {
        // Constant-in-space directions are divergence free for free.
        for (int axis = 0; axis < d; ++axis) {
            std::vector<double> dir(static_cast<std::size_t>(d), 0.0);
            dir[static_cast<std::size_t>(axis)] = 1.0;
            push_vector(eta, SpatialMode::constant(d), std::move(dir), true, axis + 1);
        }
        for (const auto& k : waves) {
            if (project_divergence_free) {
                const auto basis = complement_basis(k);
                for (std::size_t bi = 0; bi < basis.size(); ++bi) {
                    push_vector(eta, SpatialMode::wave(k, false), basis[bi], true,
                                static_cast<int>(bi + 1));
                    push_vector(eta, SpatialMode::wave(k, true), basis[bi], true,
                                static_cast<int>(bi + 1));
                }
            } else {
                for (int axis = 0; axis < d; ++axis) {
                    std::vector<double> dir(static_cast<std::size_t>(d), 0.0);
                    dir[static_cast<std::size_t>(axis)] = 1.0;
                    push_vector(eta, SpatialMode::wave(k, false), dir, false, axis + 1);
                    push_vector(eta, SpatialMode::wave(k, true), std::move(dir), false, axis + 1);
                }
            }
        }
    }
    return dict;
}

} // namespace

TestFunctionDictionary TestFunctionDictionary::incompressible(double T, int d, int max_wavenumber,
                                                              int time_profile_count) {
    if (d < 2) {
        throw std::invalid_argument(
            "TestFunctionDictionary::incompressible: need d >= 2 for divergence-free directions");
    }
    return build_dictionary(T, d, max_wavenumber, time_profile_count, true);
}

TestFunctionDictionary TestFunctionDictionary::compressible(double T, int d, int max_wavenumber,
                                                            int time_profile_count) {
    return build_dictionary(T, d, max_wavenumber, time_profile_count, false);
}

} // namespace turbmax

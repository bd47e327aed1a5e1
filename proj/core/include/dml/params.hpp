#pragma once

#include <string>

namespace dml {

// Parameters of the planar denatured Morris-Lecar model
//   x' = x^2 (1 - x) - y + I
//   y' = A e^(alpha x) - gamma y
// All quantities are dimensionless.
struct OriginalParams {
    double A = 0.0041;     // recovery rate constant, > 0
    double alpha = 5.276;  // exponential gain, > 0
    double gamma = 0.315;  // recovery decay, > 0
    double I = 0.0;        // external (constant) current

    // Throws std::invalid_argument when A, alpha or gamma is not positive
    // or any field is non-finite.
    void validate() const;
};

// Parameters of the electromagnetically coupled, periodically forced model
//   x'   = x^2 (1 - x) - y + I0 sin(omega t) + k rho(phi) x
//   y'   = A e^(alpha x) - gamma y
//   phi' = k1 x - k2 phi + phi_ext
// with memductance rho(phi) = alpha1 + 3 beta phi^2.
struct ImprovedParams {
    double A = 0.0041;
    double alpha = 5.276;
    double gamma = 0.315;
    double I0 = 0.0;       // forcing amplitude
    double omega = 0.01;   // forcing angular frequency, > 0
    double k = 0.003;      // feedback gain
    double k1 = 0.19;      // flux coupling
    double k2 = 0.5;       // flux decay
    double alpha1 = 0.1;   // memductance offset
    double beta = 0.02;    // memductance curvature
    double phi_ext = 0.2;  // external magnetic flux

    void validate() const;

    // (x, y) subsystem parameters with the constant current dropped.
    OriginalParams planar() const { return {A, alpha, gamma, 0.0}; }
};

// Strict JSON (de)serialization keyed by symbol names ("A", "alpha",
// "gamma", "I" / "I0", "omega", ...). Unknown keys are an error.
std::string to_json(const OriginalParams& p);
std::string to_json(const ImprovedParams& p);
OriginalParams original_params_from_json(const std::string& text);
ImprovedParams improved_params_from_json(const std::string& text);

}  // namespace dml

#pragma once

// Transient model of a single organic electrochemical transistor (OECT).
//
// The ionic channel voltage V1 follows an RC relaxation towards the gate
// voltage, and the drain voltage is an algebraic (piecewise) function of the
// gate and channel voltages. All quantities are SI: volts, ohms, farads,
// siemens, meters, seconds.

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

namespace oect {

/// Physical constants of one device.
struct OectParams {
    double v_bias = -0.5;    ///< offset voltage applied through the drain resistor [V]
    double v_p = -0.6;       ///< pinch-off voltage [V]
    double r = 500.0;        ///< drain resistance [ohm]
    double r_g = 2.7e4;      ///< effective gate resistance [ohm]
    double c_g = 8.98e-7;    ///< effective gate capacitance [F]
    double k_p = 5.82e-4;    ///< channel transconductance parameter [S]
    double w = 1.01e-4;      ///< channel width [m]
    double l = 2.0e-4;       ///< channel length [m]

    /// Gate RC time constant [s].
    double tau() const noexcept { return r_g * c_g; }

    void validate() const {
        detail::require(r > 0 && r_g > 0 && c_g > 0 && k_p > 0 && w > 0 && l > 0,
                        "OectParams: r, r_g, c_g, k_p, w and l must be positive");
    }
};

/// The two combinations of device constants that enter the drain-voltage law.
struct CoeffPair {
    double a;  ///< R / (2 R_G), dimensionless
    double b;  ///< K_p W R / L, per volt
};

enum class Regime { Saturation, Cutoff, Linear };

constexpr std::string_view to_string(Regime r) noexcept {
    switch (r) {
        case Regime::Saturation: return "saturation";
        case Regime::Cutoff: return "cutoff";
        case Regime::Linear: return "linear";
    }
    return "?";
}

struct DrainSolution {
    double v_d;
    Regime regime;
};

inline CoeffPair derived_coefficients(const OectParams& p) noexcept {
    return {p.r / (2.0 * p.r_g), p.k_p * p.w * p.r / p.l};
}

/// dV1/dt for gate voltage `v_g` and channel voltage `v1`.
inline double v1_rate(const OectParams& p, double v_g, double v1) noexcept {
    return (v_g - v1) / (p.r_g * p.c_g);
}

/// Channel current for given channel and drain voltages, with the regime
/// guards evaluated literally on (v1, v_d).
inline double channel_current(const OectParams& p, double v1, double v_d) noexcept {
    const double k = p.k_p * p.w / p.l;
    const double over = v1 - p.v_p;
    if (v1 - v_d > p.v_p) return -0.5 * k * over * over;
    if (v1 > p.v_p && v_d <= 0.0) return 0.0;
    return -k * (over - 0.5 * v_d) * v_d;
}

/// Closed-form drain voltage. The saturation guard depends on the result, so
/// each branch's candidate is checked for self-consistency in the order
/// saturation, cutoff, linear; the linear branch is the fallback.
inline DrainSolution drain_voltage(const OectParams& p, const CoeffPair& c, double v_g,
                                   double v1) noexcept {
    const double affine = p.v_bias + c.a * (v_g - v1);
    const double over = v1 - p.v_p;

    const double sat = affine + 0.5 * c.b * over * over;
    if (v1 - sat > p.v_p) return {sat, Regime::Saturation};

    if (v1 > p.v_p && affine <= 0.0) return {affine, Regime::Cutoff};

    const double q = c.b * over - 1.0;
    const double disc = std::max(2.0 * c.b * affine + q * q, 0.0);
    return {-1.0 / c.b + over + std::sqrt(disc) / c.b, Regime::Linear};
}

inline DrainSolution drain_voltage(const OectParams& p, double v_g, double v1) noexcept {
    return drain_voltage(p, derived_coefficients(p), v_g, v1);
}

}  // namespace oect

#pragma once

// Natural units, hbar = c = 1, with GeV as the base. Lengths and times are in
// 1/GeV, masses and energies in GeV.

namespace gcollapse::units {

inline constexpr double kMetresPerInvGeV = 1.973269804e-16;
inline constexpr double kInvGeVPerSecond = 1.519267447e24;
inline constexpr double kGeVPerGram = 5.60958860e23;
inline constexpr double kPlanckMass = 1.220890e19;  // non-reduced, GeV
inline constexpr double kNewtonG = 1.0 / (kPlanckMass * kPlanckMass);

inline constexpr double kElectronMass = 5.1099895e-4;  // GeV
inline constexpr double kFemtometre = 1e-15 / kMetresPerInvGeV;

constexpr double metres_to_natural(double m) { return m / kMetresPerInvGeV; }
constexpr double natural_to_metres(double l) { return l * kMetresPerInvGeV; }
constexpr double seconds_to_natural(double s) { return s * kInvGeVPerSecond; }
constexpr double natural_to_seconds(double t) { return t / kInvGeVPerSecond; }
constexpr double grams_to_natural(double g) { return g * kGeVPerGram; }
constexpr double natural_to_grams(double m) { return m / kGeVPerGram; }

}  // namespace gcollapse::units

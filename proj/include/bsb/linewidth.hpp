#pragma once

namespace bsb {

// CODATA 2018 exact/recommended values, SI units. Only the unscaled
// operations below use them; the scaled bound is constant-free.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double epsilon0 = 8.8541878128e-12;   // F m^-1
inline constexpr double speed_of_light = 299792458.0;  // m s^-1
inline constexpr double pi = 3.141592653589793238462643383279502884;
}  // namespace constants

// Inputs to the scaled line-width bound.
struct DecayContext
{
    double n_vt;  // atoms per cubic transition wavelength
    double eta;   // static refractive index

    void validate() const;
};

struct PhysicalDipoleInputs
{
    double omega_t;         // rad/s
    double number_density;  // m^-3
    double dipole_sq;       // C^2 m^2
};

/// Free-space spontaneous emission rate (s^-1) of a dipole with squared
/// matrix element `dipole_sq` radiating at angular frequency `omega`.
double free_space_decay_rate(double omega, double dipole_sq);

/// Squared dipole moment implied by a static index eta for a two-level
/// ensemble of density `number_density` with transition frequency omega_t.
/// Assumes the ground state carries the whole population.
double dipole_sq_from_static_index(double eta, double omega_t, double number_density);

/// Real-cavity local-field multiplier eta (3 eta^2 / (2 eta^2 + 1))^2.
double local_field_factor(double eta);

/// lambda_T = 2 pi c / omega_t, in metres.
double transition_wavelength(double omega_t);

/// Lower bound on gamma / omega_T from spontaneous decay inside the medium.
double scaled_linewidth_bound(const DecayContext& ctx, double omega_tilde);

/// Minimal absorption probability alpha * omega_tilde * gamma_bound.
double min_absorption_probability(double alpha, const DecayContext& ctx, double omega_tilde);

}  // namespace bsb

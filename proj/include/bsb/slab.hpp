#pragma once

#include "bsb/dielectric.hpp"

#include <complex>

namespace bsb {

// Dimensionless working point of a single-resonance slab in vacuum.
//   omega_tilde = omega / omega_T
//   gamma_tilde = gamma / omega_T
//   thickness   = omega_T l / c
//   eps_s       = 1 + chi(0)
struct ScaledSlabParams
{
    double omega_tilde;
    double gamma_tilde;
    double thickness;
    double eps_s;

    // gamma_tilde = 0 is rejected unless damping is Damping::lossless.
    void validate(Damping damping = Damping::strict) const;
};

struct SlabResponse
{
    std::complex<double> t;
    std::complex<double> r;
    double p = 0.0;  // 1 - |t|^2 - |r|^2
    double x = 0.0;  // |t|^2 / |r|^2, +inf when r vanishes

    double transmittance() const { return std::norm(t); }
    double reflectance() const { return std::norm(r); }
};

// Amplitudes at normal incidence; phases are referenced so that n = 1 gives
// t = 1, r = 0 for any thickness. phase_arg is omega l / c.
std::complex<double> transmission(ComplexIndex n, double phase_arg);
std::complex<double> reflection(ComplexIndex n, double phase_arg, std::complex<double> t);

// Full response for a known index; evaluate() is this plus the index lookup.
SlabResponse respond(ComplexIndex n, double phase_arg);

SlabResponse evaluate(const ScaledSlabParams& params, Damping damping = Damping::strict);

// Index of the scaled single-resonance model at the working frequency.
ComplexIndex scaled_index(double eps_s, double gamma_tilde, double omega_tilde,
                          Damping damping = Damping::strict);

}  // namespace bsb

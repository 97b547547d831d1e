#include "bsb/linewidth.hpp"

#include <cmath>
#include <stdexcept>

namespace bsb {

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void DecayContext::validate() const
{
    if (!positive(n_vt))
        throw std::invalid_argument("atoms per cubic wavelength must be positive");
    if (!std::isfinite(eta) || !(eta > 1.0))
        throw std::invalid_argument("static refractive index must exceed 1");
}

double free_space_decay_rate(double omega, double dipole_sq)
{
    using namespace constants;
    if (!positive(omega))
        throw std::invalid_argument("transition frequency must be positive");
    if (!std::isfinite(dipole_sq) || dipole_sq < 0.0)
        throw std::invalid_argument("squared dipole moment must be non-negative");
    const double c3 = speed_of_light * speed_of_light * speed_of_light;
    return omega * omega * omega * dipole_sq / (3.0 * pi * hbar * epsilon0 * c3);
}

double dipole_sq_from_static_index(double eta, double omega_t, double number_density)
{
    using namespace constants;
    if (!std::isfinite(eta) || eta < 1.0)
        throw std::invalid_argument("static refractive index must be at least 1");
    if (!positive(omega_t) || !positive(number_density))
        throw std::invalid_argument("frequency and number density must be positive");
    return 3.0 * hbar * omega_t * epsilon0 * (eta * eta - 1.0) / (2.0 * number_density);
}

double local_field_factor(double eta)
{
    if (!std::isfinite(eta) || eta < 1.0)
        throw std::invalid_argument("static refractive index must be at least 1");
    const double eta2 = eta * eta;
    const double cavity = 3.0 * eta2 / (2.0 * eta2 + 1.0);
    return eta * cavity * cavity;
}

double transition_wavelength(double omega_t)
{
    if (!positive(omega_t))
        throw std::invalid_argument("transition frequency must be positive");
    return 2.0 * constants::pi * constants::speed_of_light / omega_t;
}

double scaled_linewidth_bound(const DecayContext& ctx, double omega_tilde)
{
    ctx.validate();
    if (!positive(omega_tilde))
        throw std::invalid_argument("scaled frequency must be positive");
    const double pi = constants::pi;
    const double w3 = omega_tilde * omega_tilde * omega_tilde;
    return 4.0 * pi * pi / ctx.n_vt * w3 * (ctx.eta * ctx.eta - 1.0) * local_field_factor(ctx.eta);
}

double min_absorption_probability(double alpha, const DecayContext& ctx, double omega_tilde)
{
    if (!positive(alpha))
        throw std::invalid_argument("alpha must be positive");
    return alpha * omega_tilde * scaled_linewidth_bound(ctx, omega_tilde);
}

}  // namespace bsb

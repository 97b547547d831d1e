#include "bsb/slab.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bsb {

namespace {

constexpr std::complex<double> I{0.0, 1.0};

void check_phase(double phase_arg)
{
    if (!(phase_arg >= 0.0) || !std::isfinite(phase_arg))
        throw std::invalid_argument("phase argument must be finite and non-negative");
}

}  // namespace

void ScaledSlabParams::validate(Damping damping) const
{
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(omega_tilde) || !(omega_tilde > 0.0))
        throw std::invalid_argument("scaled frequency must be positive");
    if (!finite(gamma_tilde) || gamma_tilde < 0.0
        || (gamma_tilde == 0.0 && damping != Damping::lossless))
        throw std::invalid_argument("scaled line width must be positive");
    if (!finite(thickness) || thickness < 0.0)
        throw std::invalid_argument("scaled thickness must be non-negative");
    if (!finite(eps_s) || !(eps_s > 1.0))
        throw std::invalid_argument("static permittivity must exceed 1");
}

std::complex<double> transmission(ComplexIndex n_in, double phase_arg)
{
    check_phase(phase_arg);
    const auto n = n_in.value();
    const auto round_trip = std::exp(2.0 * I * n * phase_arg);
    const auto denom = (1.0 + n) * (1.0 + n) - (1.0 - n) * (1.0 - n) * round_trip;
    if (!(std::abs(denom) > std::numeric_limits<double>::min()))
        throw std::domain_error("degenerate slab denominator");
    return 4.0 * n * std::exp(I * (n - 1.0) * phase_arg) / denom;
}

std::complex<double> reflection(ComplexIndex n_in, double phase_arg, std::complex<double> t)
{
    check_phase(phase_arg);
    const auto n = n_in.value();
    // t exp(i(n+1)a) is the transmitted amplitude re-referenced to the back face
    // after one more pass through the slab.
    return (n - 1.0) / (n + 1.0) * std::exp(-I * phase_arg)
           * (1.0 - t * std::exp(I * (n + 1.0) * phase_arg));
}

SlabResponse respond(ComplexIndex n, double phase_arg)
{
    SlabResponse out;
    out.t = transmission(n, phase_arg);
    out.r = reflection(n, phase_arg, out.t);
    const double t2 = std::norm(out.t);
    const double r2 = std::norm(out.r);
    out.p = 1.0 - t2 - r2;
    out.x = r2 == 0.0 ? std::numeric_limits<double>::infinity() : t2 / r2;
    return out;
}

ComplexIndex scaled_index(double eps_s, double gamma_tilde, double omega_tilde, Damping damping)
{
    return refractive_index(DrudeLorentzModel::scaled(eps_s, gamma_tilde, damping), omega_tilde);
}

SlabResponse evaluate(const ScaledSlabParams& params, Damping damping)
{
    params.validate(damping);
    const auto n = scaled_index(params.eps_s, params.gamma_tilde, params.omega_tilde, damping);
    return respond(n, params.omega_tilde * params.thickness);
}

}  // namespace bsb

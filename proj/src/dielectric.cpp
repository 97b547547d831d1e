#include "bsb/dielectric.hpp"

#include "bsb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace bsb {

namespace {

void check_resonance(const Resonance& r, Damping damping)
{
    auto positive_finite = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive_finite(r.omega_t))
        throw std::invalid_argument("resonance frequency must be positive");
    if (!positive_finite(r.omega_p))
        throw std::invalid_argument("resonance strength must be positive");
    const bool gamma_ok = damping == Damping::lossless
                              ? std::isfinite(r.gamma) && r.gamma >= 0.0
                              : positive_finite(r.gamma);
    if (!gamma_ok)
        throw std::invalid_argument("resonance line width must be positive");
}

void check_frequency(double omega)
{
    if (!(omega >= 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("frequency must be finite and non-negative");
}

}  // namespace

DrudeLorentzModel::DrudeLorentzModel(std::vector<Resonance> resonances, Damping damping)
    : resonances_(std::move(resonances))
{
    if (resonances_.empty())
        throw std::invalid_argument("Drude-Lorentz model needs at least one resonance");
    for (const auto& r : resonances_)
        check_resonance(r, damping);
}

DrudeLorentzModel DrudeLorentzModel::scaled(double eps_s, double gamma_tilde, Damping damping)
{
    if (!(eps_s > 1.0) || !std::isfinite(eps_s))
        throw std::invalid_argument("static permittivity must exceed 1");
    return DrudeLorentzModel({{1.0, std::sqrt(eps_s - 1.0), gamma_tilde}}, damping);
}

double DrudeLorentzModel::static_susceptibility() const
{
    double chi0 = 0.0;
    for (const auto& r : resonances_)
        chi0 += (r.omega_p * r.omega_p) / (r.omega_t * r.omega_t);
    return chi0;
}

std::complex<double> susceptibility(const DrudeLorentzModel& model, double omega)
{
    check_frequency(omega);
    std::complex<double> chi{0.0, 0.0};
    for (const auto& r : model.resonances())
    {
        const std::complex<double> denom{r.omega_t * r.omega_t - omega * omega,
                                         -r.gamma * omega};
        chi += (r.omega_p * r.omega_p) / denom;
    }
    return chi;
}

ComplexIndex refractive_index(const DrudeLorentzModel& model, double omega)
{
    const auto eps = 1.0 + susceptibility(model, omega);
    if (eps.imag() == 0.0 && eps.real() <= 0.0)
        throw std::domain_error("permittivity on the negative real axis");
    const auto n = std::sqrt(eps);
    return {n.real(), omega == 0.0 ? 0.0 : n.imag()};
}

ComplexIndex low_frequency_approx(const DrudeLorentzModel& model, double omega)
{
    check_frequency(omega);
    const double eta = std::sqrt(1.0 + model.static_susceptibility());
    double sum = 0.0;
    for (const auto& r : model.resonances())
    {
        const double strength = (r.omega_p * r.omega_p) / (r.omega_t * r.omega_t);
        sum += (1.0 / r.omega_t) * (r.gamma / r.omega_t) * strength;
    }
    return {eta, omega / (2.0 * eta) * sum};
}

namespace {

std::string format_sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// eta - 1 = Re(chi / (1 + n)) avoids cancellation where chi is small.
double index_excess(const DrudeLorentzModel& model, double omega)
{
    const auto chi = susceptibility(model, omega);
    const auto n = refractive_index(model, omega).value();
    return (chi / (1.0 + n)).real();
}

// Panel edges: each resonance is bracketed at +-gamma and +-10 gamma, then
// the region above the last resonance is split geometrically. Sign changes
// of eta - 1 are added so every panel has a single sign.
std::vector<double> sum_rule_breakpoints(const DrudeLorentzModel& model, double omega_max)
{
    std::vector<double> pts{0.0, omega_max};
    double upper = 0.0;
    for (const auto& r : model.resonances())
    {
        for (double k : {-10.0, -1.0, 0.0, 1.0, 10.0})
            pts.push_back(r.omega_t + k * r.gamma);
        upper = std::max(upper, r.omega_t + 10.0 * r.gamma);
    }
    for (double w = 2.0 * upper; w < omega_max; w *= 2.0)
        pts.push_back(w);

    std::erase_if(pts, [&](double w) { return !(w >= 0.0 && w <= omega_max); });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    constexpr int samples = 64;
    auto f = [&](double w) { return index_excess(model, w); };
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    {
        double a = pts[i], fa = f(a);
        for (int k = 1; k <= samples; ++k)
        {
            const double b = k == samples ? pts[i + 1]
                                          : pts[i] + (pts[i + 1] - pts[i]) * k / samples;
            const double fb = f(b);
            if (fa * fb < 0.0)
            {
                std::uintmax_t iters = 100;
                const auto [lo, hi] = boost::math::tools::toms748_solve(
                    f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(), iters);
                roots.push_back(0.5 * (lo + hi));
            }
            a = b;
            fa = fb;
        }
    }
    pts.insert(pts.end(), roots.begin(), roots.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

struct Integrals
{
    double signed_value = 0.0;
    double absolute = 0.0;
    double error = 0.0;
};

Integrals integrate_panels(const DrudeLorentzModel& model, const std::vector<double>& pts,
                           const SumRuleOptions& options)
{
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto f = [&](double w) { return index_excess(model, w); };

    Integrals total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    {
        double error = 0.0;
        const double v = Rule::integrate(f, pts[i], pts[i + 1], options.max_depth,
                                         options.tolerance, &error);
        total.signed_value += v;
        total.absolute += std::abs(v);
        total.error += error;
    }
    return total;
}

std::vector<double> halved(const std::vector<double>& pts)
{
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    {
        out.push_back(pts[i]);
        out.push_back(0.5 * (pts[i] + pts[i + 1]));
    }
    out.push_back(pts.back());
    return out;
}

}  // namespace

SumRuleResult superconvergence_residual(const DrudeLorentzModel& model, double omega_max,
                                        const SumRuleOptions& options)
{
    if (!(omega_max > 0.0) || !std::isfinite(omega_max))
        throw std::invalid_argument("omega_max must be positive");
    if (!(options.tolerance > 0.0))
        throw std::invalid_argument("sum-rule tolerance must be positive");

    const auto pts = sum_rule_breakpoints(model, omega_max);
    const auto coarse = integrate_panels(model, pts, options);
    const auto fine = integrate_panels(model, halved(pts), options);

    double strength = 0.0;
    for (const auto& r : model.resonances())
        strength += r.omega_p * r.omega_p;

    SumRuleResult out;
    out.integral = fine.signed_value;
    out.absolute_integral = fine.absolute;
    out.tail = -strength / (2.0 * omega_max);
    out.residual = out.integral + out.tail;
    out.refinement_delta = std::abs(coarse.signed_value - fine.signed_value);
    out.error_estimate = fine.error;

    const double budget = options.tolerance * fine.absolute;
    if (out.error_estimate > budget)
        throw ConvergenceError("sum-rule quadrature did not converge: error estimate "
                               + format_sci(out.error_estimate));
    if (out.refinement_delta > budget)
        throw ConvergenceError("sum-rule quadrature did not converge: refinement passes differ by "
                               + format_sci(out.refinement_delta));
    return out;
}

}  // namespace bsb

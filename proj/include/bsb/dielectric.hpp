#pragma once

#include <complex>
#include <span>
#include <vector>

namespace bsb {

// One damped-oscillator term. All three frequencies share the unit chosen by
// the caller; the slab pipeline uses the scaled convention omega_t = 1.
struct Resonance
{
    double omega_t;
    double omega_p;
    double gamma;
};

enum class Damping
{
    strict,   // gamma > 0 for every resonance
    lossless  // gamma = 0 admitted; only for unitarity checks
};

class DrudeLorentzModel
{
  public:
    explicit DrudeLorentzModel(std::vector<Resonance> resonances,
                               Damping damping = Damping::strict);

    // Single resonance at omega_t = 1 with static permittivity eps_s.
    static DrudeLorentzModel scaled(double eps_s, double gamma_tilde,
                                    Damping damping = Damping::strict);

    std::span<const Resonance> resonances() const { return resonances_; }

    // chi(0) = sum wP^2 / wT^2
    double static_susceptibility() const;

  private:
    std::vector<Resonance> resonances_;
};

struct ComplexIndex
{
    double eta = 1.0;
    double kappa = 0.0;

    std::complex<double> value() const { return {eta, kappa}; }
};

std::complex<double> susceptibility(const DrudeLorentzModel& model, double omega);

// Principal branch of sqrt(1 + chi). kappa is exactly zero at omega = 0.
ComplexIndex refractive_index(const DrudeLorentzModel& model, double omega);

// Lowest-order expansion below all resonances: static eta, kappa linear in omega.
ComplexIndex low_frequency_approx(const DrudeLorentzModel& model, double omega);

struct SumRuleOptions
{
    // Relative to the integral of |eta - 1|; bounds both the quadrature
    // error estimate and the difference between the two passes (the second
    // on a mesh with every panel halved).
    double tolerance = 1e-10;
    // Bisection depth per panel. Work can grow as 2^depth when roundoff
    // stalls convergence, so keep this modest.
    unsigned max_depth = 15;
};

struct SumRuleResult
{
    double residual = 0.0;           // integral up to omega_max plus tail
    double integral = 0.0;           // integral of (eta - 1) on [0, omega_max]
    double absolute_integral = 0.0;  // integral of |eta - 1| on [0, omega_max]
    double tail = 0.0;               // -sum wP^2 / (2 omega_max)
    double refinement_delta = 0.0;   // |coarse - fine| for the integral
    double error_estimate = 0.0;     // quadrature error estimate, fine pass
};

// Checks that the real index averages to unity over all frequencies.
// Throws ConvergenceError if the error estimate or the disagreement between
// the two refinement passes exceeds the tolerance.
SumRuleResult superconvergence_residual(const DrudeLorentzModel& model,
                                        double omega_max,
                                        const SumRuleOptions& options = {});

}  // namespace bsb

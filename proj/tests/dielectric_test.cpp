#include "bsb/dielectric.hpp"
#include "bsb/errors.hpp"

#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <random>

using namespace bsb;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

// chi = wP^2 (wT^2 - w^2 + i g w) / ((wT^2 - w^2)^2 + g^2 w^2), in 50 digits.
std::complex<double> chi_reference(const Resonance& r, double omega)
{
    const Big wt = r.omega_t, wp = r.omega_p, g = r.gamma, w = omega;
    const Big re_den = wt * wt - w * w;
    const Big im_den = g * w;
    const Big mag = re_den * re_den + im_den * im_den;
    return {static_cast<double>(wp * wp * re_den / mag),
            static_cast<double>(wp * wp * im_den / mag)};
}

double rel_err(std::complex<double> a, std::complex<double> b)
{
    return std::abs(a - b) / std::abs(b);
}

}  // namespace

TEST_SUITE("dielectric")
{
    TEST_CASE("susceptibility at the static limit and on resonance")
    {
        const DrudeLorentzModel model({{1.0, 1.0, 0.1}});
        const auto chi0 = susceptibility(model, 0.0);
        CHECK(chi0.real() == 1.0);
        CHECK(chi0.imag() == 0.0);

        const auto chi1 = susceptibility(model, 1.0);
        CHECK(chi1.real() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(chi1.imag() == doctest::Approx(10.0).epsilon(1e-14));
    }

    TEST_CASE("susceptibility matches a 50-digit evaluation")
    {
        const Resonance r{1.0, 2.0, 0.01};
        const DrudeLorentzModel model({r});
        const auto chi = susceptibility(model, 0.5);
        CHECK(rel_err(chi, chi_reference(r, 0.5)) < 1e-15);
        // 4 / (0.75 - 0.005 i), frozen from an mpmath evaluation
        CHECK(chi.real() == doctest::Approx(5.3330963068308075).epsilon(1e-15));
        CHECK(chi.imag() == doctest::Approx(0.035553975378872050).epsilon(1e-15));
    }

    TEST_CASE("multi-resonance susceptibility is the sum of its terms")
    {
        const Resonance a{1.0, 0.7, 0.02}, b{3.5, 2.0, 0.3};
        const DrudeLorentzModel both({a, b});
        for (double w : {0.1, 0.9, 2.0, 3.5, 10.0})
        {
            const auto expect = chi_reference(a, w) + chi_reference(b, w);
            CHECK(rel_err(susceptibility(both, w), expect) < 1e-14);
        }
    }

    TEST_CASE("imaginary part is positive for every positive frequency")
    {
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> log_u(-3.0, 1.0);
        for (int trial = 0; trial < 200; ++trial)
        {
            std::vector<Resonance> res;
            const int count = 1 + trial % 3;
            for (int k = 0; k < count; ++k)
                res.push_back({std::pow(10.0, log_u(rng)), std::pow(10.0, log_u(rng)),
                               std::pow(10.0, log_u(rng))});
            const DrudeLorentzModel model(res);
            for (int j = 0; j < 50; ++j)
            {
                const double w = std::pow(10.0, 2.0 * log_u(rng));
                CHECK(susceptibility(model, w).imag() > 0.0);
                const auto n = refractive_index(model, w);
                CHECK(n.eta > 0.0);
                CHECK(n.kappa > 0.0);
            }
            const auto n0 = refractive_index(model, 0.0);
            CHECK(n0.eta > 1.0);
            CHECK(n0.kappa == 0.0);
        }
    }

    TEST_CASE("refractive index limits")
    {
        // chi(0) = 5.2
        const auto n0 = refractive_index(DrudeLorentzModel({{1.0, std::sqrt(5.2), 0.1}}), 0.0);
        CHECK(n0.eta == doctest::Approx(std::sqrt(6.2)).epsilon(1e-15));
        CHECK(n0.eta == doctest::Approx(2.4900).epsilon(1e-4));
        CHECK(n0.kappa == 0.0);

        // wP^2 underflows: vacuum
        const auto vac = refractive_index(DrudeLorentzModel({{1.0, 1e-200, 0.1}}), 0.3);
        CHECK(vac.eta == 1.0);
        CHECK(vac.kappa == 0.0);
    }

    TEST_CASE("exact index agrees with the low-frequency expansion to leading order")
    {
        const DrudeLorentzModel model({{1.0, std::sqrt(5.2), 1e-3}});
        const auto exact = refractive_index(model, 1e-3);
        const auto approx = low_frequency_approx(model, 1e-3);
        // mpmath: n = 2.48998096378287 + 1.04418677806081e-6 i
        CHECK(exact.eta == doctest::Approx(2.4899809637828740).epsilon(1e-14));
        CHECK(exact.kappa == doctest::Approx(1.0441867780608141e-6).epsilon(1e-12));
        CHECK(std::abs(approx.kappa - exact.kappa) / exact.kappa < 1e-5);
        CHECK(approx.eta == doctest::Approx(std::sqrt(6.2)).epsilon(1e-15));
    }

    TEST_CASE("low-frequency expansion: direct substitution")
    {
        const DrudeLorentzModel model({{1.0, 1.0, 0.1}});
        const auto at0 = low_frequency_approx(model, 0.0);
        CHECK(at0.kappa == 0.0);
        CHECK(at0.eta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

        const auto n = low_frequency_approx(model, 0.01);
        CHECK(n.eta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(n.kappa == doctest::Approx(0.01 / (2.0 * std::sqrt(2.0)) * 0.1).epsilon(1e-15));
        CHECK(n.kappa == doctest::Approx(3.5355e-4).epsilon(1e-4));
    }

    TEST_CASE("low-frequency kappa error is second order")
    {
        const DrudeLorentzModel model({{1.0, 1.0, 0.1}});
        auto kappa_err = [&](double w) {
            const double exact = refractive_index(model, w).kappa;
            return std::abs(low_frequency_approx(model, w).kappa - exact) / exact;
        };
        CHECK(kappa_err(1e-2) < 1e-3);
        // mpmath: 1.7421e-4 at w = 1e-2
        CHECK(kappa_err(1e-2) == doctest::Approx(1.7421155e-4).epsilon(1e-5));
        for (double w : {1e-2, 5e-3, 2.5e-3})
        {
            const double ratio = kappa_err(w) / kappa_err(w / 2);
            CHECK(ratio == doctest::Approx(4.0).epsilon(0.02));
        }
    }

    TEST_CASE("sum rule: vacuum is exactly zero")
    {
        const auto res = superconvergence_residual(DrudeLorentzModel({{1.0, 1e-200, 0.1}}), 1e3);
        CHECK(res.residual == 0.0);
        CHECK(res.absolute_integral == 0.0);
    }

    TEST_CASE("sum rule: single resonance closes with the tail correction")
    {
        const DrudeLorentzModel model({{1.0, 1.0, 0.1}});
        const auto r1 = superconvergence_residual(model, 1e3);
        CHECK(r1.absolute_integral == doctest::Approx(1.4544366).epsilon(1e-6));
        CHECK(std::abs(r1.residual) / r1.absolute_integral < 1e-2);
        // the uncorrected integral alone misses by the tail
        CHECK(std::abs(r1.integral) / r1.absolute_integral > 3e-4);

        const auto r2 = superconvergence_residual(model, 2e3);
        CHECK(std::abs(r2.residual) < std::abs(r1.residual));
    }

    TEST_CASE("sum rule: narrow and multiple resonances")
    {
        const DrudeLorentzModel narrow({{1.0, 2.0, 1e-3}});
        const auto rn = superconvergence_residual(narrow, 1e3);
        CHECK(std::abs(rn.residual) / rn.absolute_integral < 1e-2);

        const DrudeLorentzModel two({{1.0, 1.0, 0.05}, {4.0, 3.0, 0.2}});
        const auto r1 = superconvergence_residual(two, 5e2);
        const auto r2 = superconvergence_residual(two, 1e3);
        CHECK(std::abs(r2.residual) / r2.absolute_integral < 1e-2);
        CHECK(std::abs(r2.residual) < std::abs(r1.residual));
    }

    TEST_CASE("sum rule: unreachable tolerance signals non-convergence")
    {
        SumRuleOptions opts;
        opts.tolerance = 1e-15;
        opts.max_depth = 1;
        CHECK_THROWS_AS(superconvergence_residual(DrudeLorentzModel({{1.0, 2.0, 1e-4}}), 1e3, opts),
                        ConvergenceError);
    }

    TEST_CASE("model validation")
    {
        CHECK_THROWS_AS(DrudeLorentzModel({}), std::invalid_argument);
        CHECK_THROWS_AS(DrudeLorentzModel({{0.0, 1.0, 0.1}}), std::invalid_argument);
        CHECK_THROWS_AS(DrudeLorentzModel({{1.0, -1.0, 0.1}}), std::invalid_argument);
        CHECK_THROWS_AS(DrudeLorentzModel({{1.0, 1.0, 0.0}}), std::invalid_argument);
        CHECK_NOTHROW(DrudeLorentzModel({{1.0, 1.0, 0.0}}, Damping::lossless));
        CHECK_THROWS_AS(DrudeLorentzModel::scaled(1.0, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(susceptibility(DrudeLorentzModel({{1.0, 1.0, 0.1}}), -1.0),
                        std::invalid_argument);
        CHECK(DrudeLorentzModel::scaled(6.2, 1e-3).static_susceptibility()
              == doctest::Approx(5.2).epsilon(1e-15));
    }
}

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "a0c/beta_policy.hpp"
#include "a0c/quadrature.hpp"
#include "a0c/rng.hpp"

namespace {
const double kInf = std::numeric_limits<double>::infinity();

a0c::BetaPolicyParams make_params(double alpha, double beta) {
    return a0c::BetaPolicyParams{{alpha}, {beta}};
}
}  // namespace

TEST_SUITE("beta_policy") {

TEST_CASE("transform maps the unit box onto the action box") {
    CHECK(a0c::beta_transform({0.5}, 2.0).values[0] == doctest::Approx(0.0));
    CHECK(a0c::beta_transform({1.0}, 2.0).values[0] == doctest::Approx(2.0));
    CHECK(a0c::beta_transform({0.0}, 2.0).values[0] == doctest::Approx(-2.0));
    const a0c::Action a = a0c::beta_transform({0.25}, 2.0);
    CHECK(a.values[0] == doctest::Approx(-1.0));
    CHECK(a0c::beta_inverse_transform(a, 2.0)[0] == doctest::Approx(0.25));
}

TEST_CASE("transform rejects inputs outside the unit box") {
    CHECK_THROWS_AS(a0c::beta_transform({1.2}, 2.0), std::domain_error);
    CHECK_THROWS_AS(a0c::beta_transform({-0.01}, 2.0), std::domain_error);
}

TEST_CASE("transform round-trip across the interior") {
    a0c::RandomStream rng(11);
    for (int i = 0; i < 200; ++i) {
        const double u = rng.uniform();
        const double c_b = rng.uniform(0.5, 4.0);
        const a0c::Action a = a0c::beta_transform({u}, c_b);
        CHECK(std::abs(a.values[0]) <= c_b);
        CHECK(a0c::beta_inverse_transform(a, c_b)[0] ==
              doctest::Approx(u).epsilon(1e-12));
    }
}

TEST_CASE("uniform params give the box-uniform log density") {
    const auto params = make_params(1.0, 1.0);
    for (double a : {-1.9, -0.3, 0.0, 1.2}) {
        CHECK(a0c::log_density(params, a0c::Action{{a}}, 2.0) ==
              doctest::Approx(-std::log(4.0)).epsilon(1e-12));
    }
}

TEST_CASE("log density at the center of a Beta(2,2) policy") {
    const auto params = make_params(2.0, 2.0);
    const double lp = a0c::log_density(params, a0c::Action{{0.0}}, 2.0);
    CHECK(lp == doctest::Approx(std::log(1.5) - std::log(4.0)).epsilon(1e-12));
    CHECK(lp == doctest::Approx(-0.9808292530117262).epsilon(1e-9));
}

TEST_CASE("boundary and exterior points have zero density") {
    const auto params = make_params(2.0, 3.0);
    CHECK(a0c::log_density(params, a0c::Action{{2.0}}, 2.0) == -kInf);
    CHECK(a0c::log_density(params, a0c::Action{{-2.0}}, 2.0) == -kInf);
    CHECK(a0c::log_density(params, a0c::Action{{2.5}}, 2.0) == -kInf);
    // A uniform policy is still positive on the closed box.
    CHECK(a0c::log_density(make_params(1.0, 1.0), a0c::Action{{2.0}}, 2.0) ==
          doctest::Approx(-std::log(4.0)));
}

TEST_CASE("change of variables agrees with a direct evaluation") {
    a0c::RandomStream rng(5);
    for (int i = 0; i < 100; ++i) {
        const double alpha = rng.uniform(1.0, 9.0);
        const double beta = rng.uniform(1.0, 9.0);
        const double c_b = rng.uniform(0.5, 3.0);
        const double a = rng.uniform(-0.99 * c_b, 0.99 * c_b);
        const double u = 0.5 * (a / c_b + 1.0);
        const double direct = (alpha - 1.0) * std::log(u) +
                              (beta - 1.0) * std::log1p(-u) -
                              (std::lgamma(alpha) + std::lgamma(beta) -
                               std::lgamma(alpha + beta)) -
                              std::log(2.0 * c_b);
        CHECK(a0c::log_density(make_params(alpha, beta), a0c::Action{{a}},
                               c_b) == doctest::Approx(direct).epsilon(1e-11));
    }
}

TEST_CASE("density normalizes to one under quadrature") {
    a0c::RandomStream rng(7);
    for (int s = 0; s < 5; ++s) {
        const auto params =
            make_params(rng.uniform(1.0, 8.0), rng.uniform(1.0, 8.0));
        const double c_b = rng.uniform(0.5, 3.0);
        const double mass = a0c::integrate_graded(
            [&](double a) {
                return std::exp(a0c::log_density(params, a0c::Action{{a}}, c_b));
            },
            -c_b, c_b);
        CHECK(std::abs(mass - 1.0) <= 1e-6);
    }
}

TEST_CASE("two-dimensional density normalizes on a tensor grid") {
    const a0c::BetaPolicyParams params{{2.0, 1.3}, {1.7, 4.0}};
    const double c_b = 2.0;
    const double mass = a0c::integrate(
        [&](double a0) {
            return a0c::integrate(
                [&](double a1) {
                    return std::exp(a0c::log_density(
                        params, a0c::Action{{a0, a1}}, c_b));
                },
                -c_b, c_b, 64, 12);
        },
        -c_b, c_b, 64, 12);
    CHECK(std::abs(mass - 1.0) <= 1e-4);
}

TEST_CASE("sampling is reproducible and respects bounds") {
    const auto params = make_params(1.5, 3.0);
    a0c::RandomStream rng_a(99), rng_b(99);
    for (int i = 0; i < 50; ++i) {
        const a0c::Action a = a0c::sample(params, 2.0, rng_a);
        const a0c::Action b = a0c::sample(params, 2.0, rng_b);
        CHECK(a.values[0] == b.values[0]);
        CHECK(std::abs(a.values[0]) <= 2.0);
    }
}

TEST_CASE("sample means match the Beta expectation") {
    a0c::RandomStream rng(1234);
    const long n = 100'000;

    // Uniform: mean 0, sd over [-2, 2] is sqrt(4/3).
    double acc = 0.0;
    for (long i = 0; i < n; ++i) {
        acc += a0c::sample(make_params(1.0, 1.0), 2.0, rng).values[0];
    }
    const double se_uniform = std::sqrt(4.0 / 3.0 / static_cast<double>(n));
    CHECK(std::abs(acc / static_cast<double>(n)) <= 3.0 * se_uniform);

    // Beta(5, 1): mean of u is 5/6, transformed mean 4/3.
    acc = 0.0;
    double acc2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const double a = a0c::sample(make_params(5.0, 1.0), 2.0, rng).values[0];
        acc += a;
        acc2 += a * a;
    }
    const double mean = acc / static_cast<double>(n);
    const double var = acc2 / static_cast<double>(n) - mean * mean;
    const double se = std::sqrt(var / static_cast<double>(n));
    CHECK(std::abs(mean - 4.0 / 3.0) <= 3.0 * se);
}

TEST_CASE("gamma_sample has the right first moment") {
    a0c::RandomStream rng(3);
    for (double shape : {0.4, 1.0, 2.5, 7.0}) {
        const long n = 200'000;
        double acc = 0.0;
        for (long i = 0; i < n; ++i) {
            acc += a0c::gamma_sample(shape, rng);
        }
        // Gamma(k,1) has mean k and variance k.
        const double se = std::sqrt(shape / static_cast<double>(n));
        CHECK(std::abs(acc / static_cast<double>(n) - shape) <= 4.0 * se);
    }
    CHECK_THROWS_AS(a0c::gamma_sample(0.0, rng), std::domain_error);
}

TEST_CASE("entropy closed form") {
    CHECK(a0c::entropy(make_params(1.0, 1.0)) == doctest::Approx(0.0));
    // H(2,2) = ln(1/6) + 5/3.
    CHECK(a0c::entropy(make_params(2.0, 2.0)) ==
          doctest::Approx(-0.1250928025613883).epsilon(1e-10));
    // Transformed entropy adds n_a * log(2 c_b).
    CHECK(a0c::transformed_entropy(make_params(1.0, 1.0), 2.0) ==
          doctest::Approx(std::log(4.0)));
}

TEST_CASE("entropy agrees with Monte Carlo") {
    a0c::RandomStream rng(77);
    for (const auto& ab : {std::pair{2.0, 2.0}, {4.5, 1.2}, {7.0, 7.0}}) {
        const long n = 100'000;
        double acc = 0.0, acc2 = 0.0;
        for (long i = 0; i < n; ++i) {
            const double x = a0c::gamma_sample(ab.first, rng);
            const double y = a0c::gamma_sample(ab.second, rng);
            const double nll =
                -a0c::beta_log_pdf(x / (x + y), ab.first, ab.second);
            acc += nll;
            acc2 += nll * nll;
        }
        const double mc = acc / static_cast<double>(n);
        const double se = std::sqrt(
            (acc2 / static_cast<double>(n) - mc * mc) / static_cast<double>(n));
        CHECK(std::abs(a0c::entropy(make_params(ab.first, ab.second)) - mc) <=
              3.0 * se);
    }
}

TEST_CASE("entropy gradient matches central finite differences") {
    const double h = 1e-5;
    a0c::RandomStream rng(21);
    for (int i = 0; i < 40; ++i) {
        const double alpha = rng.uniform(1.01, 9.0);
        const double beta = rng.uniform(1.01, 9.0);
        const auto grad = a0c::entropy_grad(make_params(alpha, beta));
        const double fd_alpha = (a0c::entropy(make_params(alpha + h, beta)) -
                                 a0c::entropy(make_params(alpha - h, beta))) /
                                (2.0 * h);
        const double fd_beta = (a0c::entropy(make_params(alpha, beta + h)) -
                                a0c::entropy(make_params(alpha, beta - h))) /
                               (2.0 * h);
        CHECK(grad.d_alpha[0] ==
              doctest::Approx(fd_alpha).epsilon(1e-4));
        CHECK(grad.d_beta[0] == doctest::Approx(fd_beta).epsilon(1e-4));
    }
}

TEST_CASE("log pdf gradient matches central finite differences") {
    const double h = 1e-6;
    a0c::RandomStream rng(22);
    for (int i = 0; i < 40; ++i) {
        const double alpha = rng.uniform(1.01, 9.0);
        const double beta = rng.uniform(1.01, 9.0);
        const double u = rng.uniform(0.02, 0.98);
        const auto grad = a0c::beta_log_pdf_grad(u, alpha, beta);
        const double fda = (a0c::beta_log_pdf(u, alpha + h, beta) -
                            a0c::beta_log_pdf(u, alpha - h, beta)) /
                           (2.0 * h);
        const double fdb = (a0c::beta_log_pdf(u, alpha, beta + h) -
                            a0c::beta_log_pdf(u, alpha, beta - h)) /
                           (2.0 * h);
        CHECK(grad.d_alpha == doctest::Approx(fda).epsilon(1e-4));
        CHECK(grad.d_beta == doctest::Approx(fdb).epsilon(1e-4));
    }
}

TEST_CASE("validate_params rejects out-of-contract values") {
    CHECK_THROWS_AS(a0c::validate_params(make_params(0.5, 2.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(a0c::validate_params(make_params(2.0, kInf)),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        a0c::validate_params(a0c::BetaPolicyParams{{1.0, 2.0}, {1.0}}),
        std::invalid_argument);
    CHECK_NOTHROW(a0c::validate_params(make_params(1.0, 1.0)));
}

}  // TEST_SUITE

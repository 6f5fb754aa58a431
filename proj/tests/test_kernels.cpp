#include <doctest.h>

#include <cmath>
#include <vector>

#include "a0c/kernels.hpp"
#include "a0c/rng.hpp"

namespace {

std::vector<double> random_vec(std::size_t n, a0c::RandomStream& rng) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("omp kernels are bit-identical to the serial reference") {
    a0c::RandomStream rng(17);
    // Shapes straddling the parallel-dispatch threshold.
    const int shapes[][3] = {{1, 128, 128}, {32, 128, 128}, {7, 33, 5},
                             {64, 256, 256}, {128, 300, 257}};
    for (const auto& s : shapes) {
        const int batch = s[0], in = s[1], out = s[2];
        const auto x = random_vec(static_cast<std::size_t>(batch) * in, rng);
        const auto w = random_vec(static_cast<std::size_t>(out) * in, rng);
        const auto bias = random_vec(static_cast<std::size_t>(out), rng);
        const auto dy = random_vec(static_cast<std::size_t>(batch) * out, rng);

        std::vector<double> y_ref(static_cast<std::size_t>(batch) * out);
        std::vector<double> y_omp(y_ref.size());
        a0c::kernels::serial::linear_forward(x.data(), w.data(), bias.data(),
                                             y_ref.data(), batch, in, out);
        a0c::kernels::linear_forward(x.data(), w.data(), bias.data(),
                                     y_omp.data(), batch, in, out);
        CHECK(y_ref == y_omp);

        std::vector<double> dx_ref(x.size()), dx_omp(x.size());
        a0c::kernels::serial::linear_grad_input(dy.data(), w.data(),
                                                dx_ref.data(), batch, in, out);
        a0c::kernels::linear_grad_input(dy.data(), w.data(), dx_omp.data(),
                                        batch, in, out);
        CHECK(dx_ref == dx_omp);

        std::vector<double> dw_ref(w.size()), dw_omp(w.size());
        std::vector<double> db_ref(bias.size()), db_omp(bias.size());
        a0c::kernels::serial::linear_grad_params(dy.data(), x.data(),
                                                 dw_ref.data(), db_ref.data(),
                                                 batch, in, out);
        a0c::kernels::linear_grad_params(dy.data(), x.data(), dw_omp.data(),
                                         db_omp.data(), batch, in, out);
        CHECK(dw_ref == dw_omp);
        CHECK(db_ref == db_omp);
    }
}

TEST_CASE("elementwise kernels match serial bit-for-bit") {
    a0c::RandomStream rng(18);
    const std::int64_t n = 1 << 18;  // above the vector grain
    const auto z = random_vec(static_cast<std::size_t>(n), rng);
    std::vector<double> y_ref(z.size()), y_omp(z.size());
    a0c::kernels::serial::elu_forward(z.data(), y_ref.data(), n);
    a0c::kernels::elu_forward(z.data(), y_omp.data(), n);
    CHECK(y_ref == y_omp);

    const auto dy = random_vec(z.size(), rng);
    std::vector<double> dz_ref(z.size()), dz_omp(z.size());
    a0c::kernels::serial::elu_backward(y_ref.data(), dy.data(), dz_ref.data(), n);
    a0c::kernels::elu_backward(y_omp.data(), dy.data(), dz_omp.data(), n);
    CHECK(dz_ref == dz_omp);

    auto theta_ref = random_vec(z.size(), rng);
    auto theta_omp = theta_ref;
    std::vector<double> v_ref(z.size(), 0.0), v_omp(z.size(), 0.0);
    a0c::kernels::serial::rmsprop_update(theta_ref.data(), dy.data(),
                                         v_ref.data(), n, 1e-4, 0.9, 1e-8);
    a0c::kernels::rmsprop_update(theta_omp.data(), dy.data(), v_omp.data(), n,
                                 1e-4, 0.9, 1e-8);
    CHECK(theta_ref == theta_omp);
    CHECK(v_ref == v_omp);
}

TEST_CASE("linear_forward computes X * W^T + b") {
    // 2x3 inputs, 2 outputs, written out by hand.
    const std::vector<double> x = {1.0, 2.0, 3.0, -1.0, 0.5, 2.0};
    const std::vector<double> w = {0.5, -1.0, 2.0, 1.0, 1.0, 1.0};
    const std::vector<double> bias = {0.25, -0.5};
    std::vector<double> y(4);
    a0c::kernels::linear_forward(x.data(), w.data(), bias.data(), y.data(), 2,
                                 3, 2);
    CHECK(y[0] == doctest::Approx(0.5 - 2.0 + 6.0 + 0.25));
    CHECK(y[1] == doctest::Approx(1.0 + 2.0 + 3.0 - 0.5));
    CHECK(y[2] == doctest::Approx(-0.5 - 0.5 + 4.0 + 0.25));
    CHECK(y[3] == doctest::Approx(-1.0 + 0.5 + 2.0 - 0.5));
}

TEST_CASE("elu matches its definition") {
    const std::vector<double> z = {-1.0, 0.0, 2.0, -30.0};
    std::vector<double> y(z.size());
    a0c::kernels::elu_forward(z.data(), y.data(),
                              static_cast<std::int64_t>(z.size()));
    CHECK(y[0] == doctest::Approx(std::expm1(-1.0)).epsilon(1e-12));
    CHECK(y[0] == doctest::Approx(-0.6321205588285577).epsilon(1e-12));
    CHECK(y[1] == 0.0);
    CHECK(y[2] == 2.0);
    CHECK(y[3] == doctest::Approx(-1.0).epsilon(1e-10));

    // Slope from the post-activation value: 1 above zero, y+1 below.
    const std::vector<double> dy = {1.0, 1.0, 1.0, 1.0};
    std::vector<double> dz(z.size());
    a0c::kernels::elu_backward(y.data(), dy.data(), dz.data(),
                               static_cast<std::int64_t>(z.size()));
    CHECK(dz[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(dz[2] == 1.0);
}

TEST_CASE("rmsprop first step from a fresh accumulator") {
    double theta = 1.0, v = 0.0;
    const double g = 1.0;
    a0c::kernels::rmsprop_update(&theta, &g, &v, 1, 1e-4, 0.9, 1e-8);
    CHECK(v == doctest::Approx(0.1).epsilon(1e-15));
    const double expected_delta = -1e-4 / (std::sqrt(0.1) + 1e-8);
    CHECK(theta - 1.0 == doctest::Approx(expected_delta).epsilon(1e-12));
    CHECK(theta - 1.0 == doctest::Approx(-3.1623e-4).epsilon(1e-4));
}

TEST_CASE("rmsprop is sign-following and inert on zero gradients") {
    a0c::RandomStream rng(9);
    std::vector<double> theta = random_vec(64, rng);
    const std::vector<double> theta0 = theta;
    std::vector<double> g = random_vec(64, rng);
    std::vector<double> v(64, 0.0);
    a0c::kernels::rmsprop_update(theta.data(), g.data(), v.data(), 64, 1e-3,
                                 0.9, 1e-8);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (g[i] > 0.0) CHECK(theta[i] < theta0[i]);
        if (g[i] < 0.0) CHECK(theta[i] > theta0[i]);
    }

    std::vector<double> zeros(64, 0.0);
    std::vector<double> theta2 = theta0;
    std::vector<double> v2(64, 0.0);
    a0c::kernels::rmsprop_update(theta2.data(), zeros.data(), v2.data(), 64,
                                 1e-3, 0.9, 1e-8);
    CHECK(theta2 == theta0);
}

}  // TEST_SUITE

// Benchmark comparing the serial reference kernels against the OpenMP
// variants across the layer shapes the trainer actually uses.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "a0c/kernels.hpp"
#include "a0c/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double time_loop(const std::function<void()>& body, int min_reps = 5,
                 double min_seconds = 0.2) {
    body();  // warm-up
    int reps = min_reps;
    for (;;) {
        const auto start = Clock::now();
        for (int i = 0; i < reps; ++i) {
            body();
        }
        const std::chrono::duration<double> elapsed = Clock::now() - start;
        if (elapsed.count() >= min_seconds) {
            return elapsed.count() / reps;
        }
        reps *= 4;
    }
}

void fill(std::vector<double>& v, a0c::RandomStream& rng) {
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
}

void bench_linear(int batch, int in, int out, a0c::RandomStream& rng) {
    std::vector<double> x(static_cast<std::size_t>(batch) * in);
    std::vector<double> w(static_cast<std::size_t>(out) * in);
    std::vector<double> bias(out);
    std::vector<double> y(static_cast<std::size_t>(batch) * out);
    fill(x, rng);
    fill(w, rng);
    fill(bias, rng);

    const double flops = 2.0 * batch * in * out;
    const double t_serial = time_loop([&] {
        a0c::kernels::serial::linear_forward(x.data(), w.data(), bias.data(),
                                             y.data(), batch, in, out);
    });
    const double t_omp = time_loop([&] {
        a0c::kernels::linear_forward(x.data(), w.data(), bias.data(), y.data(),
                                     batch, in, out);
    });
    std::printf("linear_forward  %4dx%4d->%4d  serial %8.3f us (%6.2f GF/s)  "
                "omp %8.3f us (%6.2f GF/s)  speedup %.2fx\n",
                batch, in, out, t_serial * 1e6, flops / t_serial * 1e-9,
                t_omp * 1e6, flops / t_omp * 1e-9, t_serial / t_omp);
}

void bench_grad_params(int batch, int in, int out, a0c::RandomStream& rng) {
    std::vector<double> dy(static_cast<std::size_t>(batch) * out);
    std::vector<double> x(static_cast<std::size_t>(batch) * in);
    std::vector<double> dw(static_cast<std::size_t>(out) * in);
    std::vector<double> db(out);
    fill(dy, rng);
    fill(x, rng);

    const double flops = 2.0 * batch * in * out;
    const double t_serial = time_loop([&] {
        a0c::kernels::serial::linear_grad_params(dy.data(), x.data(), dw.data(),
                                                 db.data(), batch, in, out);
    });
    const double t_omp = time_loop([&] {
        a0c::kernels::linear_grad_params(dy.data(), x.data(), dw.data(),
                                         db.data(), batch, in, out);
    });
    std::printf("grad_params     %4dx%4d->%4d  serial %8.3f us (%6.2f GF/s)  "
                "omp %8.3f us (%6.2f GF/s)  speedup %.2fx\n",
                batch, in, out, t_serial * 1e6, flops / t_serial * 1e-9,
                t_omp * 1e6, flops / t_omp * 1e-9, t_serial / t_omp);
}

void bench_rmsprop(std::int64_t n, a0c::RandomStream& rng) {
    std::vector<double> theta(static_cast<std::size_t>(n)), g(theta.size()),
        v(theta.size());
    fill(theta, rng);
    fill(g, rng);

    const double t_serial = time_loop([&] {
        a0c::kernels::serial::rmsprop_update(theta.data(), g.data(), v.data(), n,
                                             1e-4, 0.9, 1e-8);
    });
    const double t_omp = time_loop([&] {
        a0c::kernels::rmsprop_update(theta.data(), g.data(), v.data(), n, 1e-4,
                                     0.9, 1e-8);
    });
    std::printf("rmsprop_update  n=%-10lld      serial %8.3f us             "
                "omp %8.3f us             speedup %.2fx\n",
                static_cast<long long>(n), t_serial * 1e6, t_omp * 1e6,
                t_serial / t_omp);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("Built without OpenMP; both columns run the serial path\n");
#endif
    a0c::RandomStream rng(42);

    // Shapes from the Pendulum network: batch-1 search evaluation, batch-32
    // training, and larger shapes to show scaling.
    bench_linear(1, 128, 128, rng);
    bench_linear(32, 128, 128, rng);
    bench_linear(256, 256, 256, rng);
    bench_linear(512, 512, 512, rng);
    bench_grad_params(32, 128, 128, rng);
    bench_grad_params(256, 256, 256, rng);
    bench_rmsprop(1 << 14, rng);
    bench_rmsprop(1 << 20, rng);
    return 0;
}

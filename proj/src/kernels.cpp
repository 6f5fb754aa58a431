#include "a0c/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace a0c::kernels {

namespace {

// Per-element inner loops shared by the serial and OpenMP variants. The
// parallel versions only distribute the outer (independent) index, so both
// paths run the same accumulation code in the same order.

// Eight independent partial sums in a fixed order: lets the compiler use
// SIMD lanes while keeping results identical across runs and thread counts.
inline double dot(const double* a, const double* b, int n) {
    double acc[8] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    int k = 0;
    for (; k + 8 <= n; k += 8) {
        for (int j = 0; j < 8; ++j) {
            acc[j] += a[k + j] * b[k + j];
        }
    }
    double total = ((acc[0] + acc[4]) + (acc[1] + acc[5])) +
                   ((acc[2] + acc[6]) + (acc[3] + acc[7]));
    for (; k < n; ++k) {
        total += a[k] * b[k];
    }
    return total;
}

inline void forward_row(const double* xr, const double* w, const double* bias,
                        double* yr, int in, int out) {
    for (int o = 0; o < out; ++o) {
        yr[o] = bias[o] + dot(xr, w + static_cast<std::size_t>(o) * in, in);
    }
}

inline void grad_input_row(const double* dyr, const double* w, double* dxr,
                           int in, int out) {
    for (int k = 0; k < in; ++k) {
        dxr[k] = 0.0;
    }
    for (int o = 0; o < out; ++o) {
        const double g = dyr[o];
        const double* wr = w + static_cast<std::size_t>(o) * in;
        for (int k = 0; k < in; ++k) {
            dxr[k] += g * wr[k];
        }
    }
}

inline void grad_params_row(const double* dy, const double* x, double* dwr,
                            double* dbo, int batch, int in, int out, int o) {
    for (int k = 0; k < in; ++k) {
        dwr[k] = 0.0;
    }
    double db_acc = 0.0;
    for (int b = 0; b < batch; ++b) {
        const double g = dy[static_cast<std::size_t>(b) * out + o];
        db_acc += g;
        const double* xr = x + static_cast<std::size_t>(b) * in;
        for (int k = 0; k < in; ++k) {
            dwr[k] += g * xr[k];
        }
    }
    *dbo = db_acc;
}

inline double elu_value(double z) { return z > 0.0 ? z : std::expm1(z); }

inline double elu_slope_from_output(double y) { return y > 0.0 ? 1.0 : y + 1.0; }

inline void rmsprop_one(double* theta, double g, double* v, double lr,
                        double rho, double eps) {
    *v = rho * *v + (1.0 - rho) * g * g;
    *theta -= lr * g / (std::sqrt(*v) + eps);
}

// Work thresholds below which the OpenMP variants stay single-threaded;
// spawning a team costs more than the loop for single-row inference and
// batch-32 training shapes.
constexpr std::int64_t kMatGrain = 1 << 21;
constexpr std::int64_t kVecGrain = 1 << 17;

inline bool go_parallel(std::int64_t work, std::int64_t grain) {
#ifdef _OPENMP
    return work >= grain && !omp_in_parallel();
#else
    (void)work;
    (void)grain;
    return false;
#endif
}

}  // namespace

void linear_forward(const double* x, const double* w, const double* bias,
                    double* y, int batch, int in, int out) {
    const std::int64_t work =
        static_cast<std::int64_t>(batch) * in * out;
#pragma omp parallel for schedule(static) if (go_parallel(work, kMatGrain))
    for (int b = 0; b < batch; ++b) {
        forward_row(x + static_cast<std::size_t>(b) * in, w, bias,
                    y + static_cast<std::size_t>(b) * out, in, out);
    }
}

void linear_grad_input(const double* dy, const double* w, double* dx,
                       int batch, int in, int out) {
    const std::int64_t work =
        static_cast<std::int64_t>(batch) * in * out;
#pragma omp parallel for schedule(static) if (go_parallel(work, kMatGrain))
    for (int b = 0; b < batch; ++b) {
        grad_input_row(dy + static_cast<std::size_t>(b) * out, w,
                       dx + static_cast<std::size_t>(b) * in, in, out);
    }
}

void linear_grad_params(const double* dy, const double* x, double* dw,
                        double* db, int batch, int in, int out) {
    const std::int64_t work =
        static_cast<std::int64_t>(batch) * in * out;
#pragma omp parallel for schedule(static) if (go_parallel(work, kMatGrain))
    for (int o = 0; o < out; ++o) {
        grad_params_row(dy, x, dw + static_cast<std::size_t>(o) * in, db + o,
                        batch, in, out, o);
    }
}

void elu_forward(const double* z, double* y, std::int64_t n) {
#pragma omp parallel for schedule(static) if (go_parallel(n, kVecGrain))
    for (std::int64_t i = 0; i < n; ++i) {
        y[i] = elu_value(z[i]);
    }
}

void elu_backward(const double* y, const double* dy, double* dz,
                  std::int64_t n) {
#pragma omp parallel for schedule(static) if (go_parallel(n, kVecGrain))
    for (std::int64_t i = 0; i < n; ++i) {
        dz[i] = dy[i] * elu_slope_from_output(y[i]);
    }
}

void rmsprop_update(double* theta, const double* g, double* v, std::int64_t n,
                    double lr, double rho, double eps) {
#pragma omp parallel for schedule(static) if (go_parallel(n, kVecGrain))
    for (std::int64_t i = 0; i < n; ++i) {
        rmsprop_one(theta + i, g[i], v + i, lr, rho, eps);
    }
}

namespace serial {

void linear_forward(const double* x, const double* w, const double* bias,
                    double* y, int batch, int in, int out) {
    for (int b = 0; b < batch; ++b) {
        forward_row(x + static_cast<std::size_t>(b) * in, w, bias,
                    y + static_cast<std::size_t>(b) * out, in, out);
    }
}

void linear_grad_input(const double* dy, const double* w, double* dx,
                       int batch, int in, int out) {
    for (int b = 0; b < batch; ++b) {
        grad_input_row(dy + static_cast<std::size_t>(b) * out, w,
                       dx + static_cast<std::size_t>(b) * in, in, out);
    }
}

void linear_grad_params(const double* dy, const double* x, double* dw,
                        double* db, int batch, int in, int out) {
    for (int o = 0; o < out; ++o) {
        grad_params_row(dy, x, dw + static_cast<std::size_t>(o) * in, db + o,
                        batch, in, out, o);
    }
}

void elu_forward(const double* z, double* y, std::int64_t n) {
    for (std::int64_t i = 0; i < n; ++i) {
        y[i] = elu_value(z[i]);
    }
}

void elu_backward(const double* y, const double* dy, double* dz,
                  std::int64_t n) {
    for (std::int64_t i = 0; i < n; ++i) {
        dz[i] = dy[i] * elu_slope_from_output(y[i]);
    }
}

void rmsprop_update(double* theta, const double* g, double* v, std::int64_t n,
                    double lr, double rho, double eps) {
    for (std::int64_t i = 0; i < n; ++i) {
        rmsprop_one(theta + i, g[i], v + i, lr, rho, eps);
    }
}

}  // namespace serial

}  // namespace a0c::kernels

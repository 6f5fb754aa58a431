#pragma once

#include <cstdint>

namespace a0c::kernels {

// Dense-layer kernels used by the network forward/backward passes. All
// matrices are row-major. The default entry points are OpenMP-parallel;
// each output element is accumulated serially in a fixed order, so results
// are bit-identical to the serial reference for any thread count. The
// serial namespace keeps the reference implementations for tests and the
// kernel benchmark.

/// Y = X * W^T + bias. X: B x In, W: Out x In, Y: B x Out.
void linear_forward(const double* x, const double* w, const double* bias,
                    double* y, int batch, int in, int out);

/// dX = dY * W.
void linear_grad_input(const double* dy, const double* w, double* dx,
                       int batch, int in, int out);

/// dW[o,k] = sum_b dY[b,o] * X[b,k];  db[o] = sum_b dY[b,o].
void linear_grad_params(const double* dy, const double* x, double* dw,
                        double* db, int batch, int in, int out);

/// y = z > 0 ? z : exp(z) - 1, elementwise.
void elu_forward(const double* z, double* y, std::int64_t n);

/// dz = dy * elu'(z), recovered from post-activation values y.
void elu_backward(const double* y, const double* dy, double* dz,
                  std::int64_t n);

/// v = rho*v + (1-rho)*g^2;  theta -= lr * g / (sqrt(v) + eps).
void rmsprop_update(double* theta, const double* g, double* v, std::int64_t n,
                    double lr, double rho, double eps);

namespace serial {
void linear_forward(const double* x, const double* w, const double* bias,
                    double* y, int batch, int in, int out);
void linear_grad_input(const double* dy, const double* w, double* dx,
                       int batch, int in, int out);
void linear_grad_params(const double* dy, const double* x, double* dw,
                        double* db, int batch, int in, int out);
void elu_forward(const double* z, double* y, std::int64_t n);
void elu_backward(const double* y, const double* dy, double* dz,
                  std::int64_t n);
void rmsprop_update(double* theta, const double* g, double* v, std::int64_t n,
                    double lr, double rho, double eps);
}  // namespace serial

}  // namespace a0c::kernels

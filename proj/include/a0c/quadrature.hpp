#pragma once

#include <functional>
#include <vector>

namespace a0c {

/// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
/// Legendre recurrence.
void gauss_legendre(int order, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Composite Gauss-Legendre integration of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels = 64, int order = 16);

/// Composite Gauss-Legendre with panels graded geometrically toward both
/// endpoints. Handles bounded integrands with endpoint derivative
/// singularities (Beta densities with exponents near 1) to ~1e-12.
double integrate_graded(const std::function<double(double)>& f, double a,
                        double b, int levels = 45, int order = 16);

/// Cumulative integral table: values of int_a^x f at `edges`, where edges
/// splits [a, b] into `panels` equal panels. Used to build CDFs for
/// sampler-versus-density checks.
struct CumulativeIntegral {
    double a = 0.0;
    double b = 1.0;
    std::vector<double> edges;
    std::vector<double> partial;  // partial[i] = integral over [a, edges[i]]

    /// Integral from a to x (adds a partial-panel correction).
    double operator()(double x) const;
    std::function<double(double)> f;
    int order = 16;
};

CumulativeIntegral cumulative_integral(std::function<double(double)> f,
                                       double a, double b, int panels = 2048,
                                       int order = 16);

}  // namespace a0c

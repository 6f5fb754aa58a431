#include "a0c/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace a0c {

void gauss_legendre(int order, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    if (order < 1) {
        throw std::invalid_argument("gauss_legendre: order must be >= 1");
    }
    const double pi = 3.141592653589793238462643383279502884;
    nodes.assign(order, 0.0);
    weights.assign(order, 0.0);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence for P_order(x) and its derivative.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
}

namespace {

double panel_integral(const std::function<double(double)>& f, double lo,
                      double hi, const std::vector<double>& nodes,
                      const std::vector<double>& weights) {
    const double mid = 0.5 * (lo + hi);
    const double halfw = 0.5 * (hi - lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        acc += weights[i] * f(mid + halfw * nodes[i]);
    }
    return acc * halfw;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels, int order) {
    std::vector<double> nodes, weights;
    gauss_legendre(order, nodes, weights);
    double acc = 0.0;
    const double step = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        acc += panel_integral(f, a + p * step, a + (p + 1) * step, nodes, weights);
    }
    return acc;
}

double integrate_graded(const std::function<double(double)>& f, double a,
                        double b, int levels, int order) {
    std::vector<double> nodes, weights;
    gauss_legendre(order, nodes, weights);
    const double half = 0.5 * (b - a);
    // Dyadic offsets from each endpoint up to the midpoint.
    std::vector<double> edges;
    for (int j = levels; j >= 0; --j) {
        edges.push_back(half * std::pow(0.5, j));
    }
    double acc = panel_integral(f, a, a + edges.front(), nodes, weights) +
                 panel_integral(f, b - edges.front(), b, nodes, weights);
    for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
        acc += panel_integral(f, a + edges[j], a + edges[j + 1], nodes, weights);
        acc += panel_integral(f, b - edges[j + 1], b - edges[j], nodes, weights);
    }
    return acc;
}

double CumulativeIntegral::operator()(double x) const {
    if (x <= a) return 0.0;
    if (x >= b) return partial.back();
    const double step = (b - a) / static_cast<double>(edges.size());
    const auto idx = static_cast<std::size_t>((x - a) / step);
    const std::size_t panel = std::min(idx, edges.size() - 1);
    const double lo = a + static_cast<double>(panel) * step;
    std::vector<double> nodes, weights;
    gauss_legendre(order, nodes, weights);
    const double base = panel == 0 ? 0.0 : partial[panel - 1];
    return base + panel_integral(f, lo, x, nodes, weights);
}

CumulativeIntegral cumulative_integral(std::function<double(double)> f,
                                       double a, double b, int panels,
                                       int order) {
    CumulativeIntegral ci;
    ci.a = a;
    ci.b = b;
    ci.f = std::move(f);
    ci.order = order;
    std::vector<double> nodes, weights;
    gauss_legendre(order, nodes, weights);
    const double step = (b - a) / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        acc += panel_integral(ci.f, a + p * step, a + (p + 1) * step, nodes, weights);
        ci.edges.push_back(a + (p + 1) * step);
        ci.partial.push_back(acc);
    }
    return ci;
}

}  // namespace a0c

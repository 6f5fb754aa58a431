#include "a0c/beta_policy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "a0c/special_functions.hpp"

namespace a0c {

namespace {
const double kNegInf = -std::numeric_limits<double>::infinity();
}

void validate_params(const BetaPolicyParams& params) {
    if (params.alpha.size() != params.beta.size()) {
        throw std::invalid_argument("alpha/beta size mismatch");
    }
    for (int i = 0; i < params.dim(); ++i) {
        if (!std::isfinite(params.alpha[i]) || !std::isfinite(params.beta[i]) ||
            params.alpha[i] < 1.0 || params.beta[i] < 1.0) {
            throw std::invalid_argument(
                "Beta policy parameters must be finite and >= 1");
        }
    }
}

Action beta_transform(const std::vector<double>& u, double c_b) {
    Action a;
    a.values.reserve(u.size());
    for (double ui : u) {
        if (!(ui >= 0.0 && ui <= 1.0)) {
            throw std::domain_error("beta_transform: u outside [0, 1]");
        }
        a.values.push_back(c_b * (2.0 * ui - 1.0));
    }
    return a;
}

std::vector<double> beta_inverse_transform(const Action& a, double c_b) {
    std::vector<double> u;
    u.reserve(a.values.size());
    for (double ai : a.values) {
        u.push_back(0.5 * (ai / c_b + 1.0));
    }
    return u;
}

double beta_log_pdf(double u, double alpha, double beta) {
    if (u < 0.0 || u > 1.0) {
        return kNegInf;
    }
    double lp = -log_beta(alpha, beta);
    if (alpha != 1.0) {
        if (u == 0.0) return kNegInf;
        lp += (alpha - 1.0) * std::log(u);
    }
    if (beta != 1.0) {
        if (u == 1.0) return kNegInf;
        lp += (beta - 1.0) * std::log1p(-u);
    }
    return lp;
}

double log_density(const BetaPolicyParams& params, const Action& a,
                   double c_b) {
    if (static_cast<int>(a.values.size()) != params.dim()) {
        throw std::invalid_argument("log_density: action dimension mismatch");
    }
    const std::vector<double> u = beta_inverse_transform(a, c_b);
    double lp = -params.dim() * std::log(2.0 * c_b);
    for (int i = 0; i < params.dim(); ++i) {
        const double term = beta_log_pdf(u[i], params.alpha[i], params.beta[i]);
        if (term == kNegInf) {
            return kNegInf;
        }
        lp += term;
    }
    return lp;
}

LogPdfGrad beta_log_pdf_grad(double u, double alpha, double beta) {
    const double psi_sum = digamma(alpha + beta);
    return {std::log(u) - digamma(alpha) + psi_sum,
            std::log1p(-u) - digamma(beta) + psi_sum};
}

double gamma_sample(double shape, RandomStream& rng) {
    if (!(shape > 0.0)) {
        throw std::domain_error("gamma_sample: shape must be positive");
    }
    // Marsaglia-Tsang needs shape >= 1; boost smaller shapes afterwards.
    const bool boosted = shape < 1.0;
    const double d = (boosted ? shape + 1.0 : shape) - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    double sample = 0.0;
    for (;;) {
        const double x = rng.normal();
        const double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        const double v = t * t * t;
        const double u = rng.uniform_pos();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
            sample = d * v;
            break;
        }
    }
    if (boosted) {
        sample *= std::pow(rng.uniform_pos(), 1.0 / shape);
    }
    return sample;
}

Action sample(const BetaPolicyParams& params, double c_b, RandomStream& rng) {
    validate_params(params);
    std::vector<double> u(params.dim());
    for (int i = 0; i < params.dim(); ++i) {
        const double x = gamma_sample(params.alpha[i], rng);
        const double y = gamma_sample(params.beta[i], rng);
        u[i] = x / (x + y);
    }
    return beta_transform(u, c_b);
}

double entropy(const BetaPolicyParams& params) {
    double h = 0.0;
    for (int i = 0; i < params.dim(); ++i) {
        const double a = params.alpha[i];
        const double b = params.beta[i];
        h += log_beta(a, b) - (a - 1.0) * digamma(a) - (b - 1.0) * digamma(b) +
             (a + b - 2.0) * digamma(a + b);
    }
    return h;
}

double transformed_entropy(const BetaPolicyParams& params, double c_b) {
    return entropy(params) + params.dim() * std::log(2.0 * c_b);
}

EntropyGrad entropy_grad(const BetaPolicyParams& params) {
    EntropyGrad g;
    g.d_alpha.resize(params.dim());
    g.d_beta.resize(params.dim());
    for (int i = 0; i < params.dim(); ++i) {
        const double a = params.alpha[i];
        const double b = params.beta[i];
        const double tail = (a + b - 2.0) * trigamma(a + b);
        g.d_alpha[i] = -(a - 1.0) * trigamma(a) + tail;
        g.d_beta[i] = -(b - 1.0) * trigamma(b) + tail;
    }
    return g;
}

}  // namespace a0c

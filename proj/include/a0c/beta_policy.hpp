#pragma once

#include <vector>

#include "a0c/rng.hpp"
#include "a0c/types.hpp"

namespace a0c {

/// Parameters of a factorized Beta distribution, one (alpha, beta) pair per
/// action dimension. The policy head keeps both >= 1 so the density stays
/// bounded and unimodal.
struct BetaPolicyParams {
    std::vector<double> alpha;
    std::vector<double> beta;

    int dim() const { return static_cast<int>(alpha.size()); }

    bool operator==(const BetaPolicyParams&) const = default;
};

/// Throws std::invalid_argument if shapes mismatch or any entry is not a
/// finite value >= 1.
void validate_params(const BetaPolicyParams& params);

/// Affine map a = c_b * (2u - 1) from the unit box onto [-c_b, c_b]^n.
/// Throws std::domain_error if any u component is outside [0, 1].
Action beta_transform(const std::vector<double>& u, double c_b);

/// Inverse of beta_transform: u = (a / c_b + 1) / 2.
std::vector<double> beta_inverse_transform(const Action& a, double c_b);

/// log pdf of Beta(alpha, beta) at u in [0, 1]. Returns -inf where the
/// density is zero (boundary with alpha > 1 or beta > 1, or u outside
/// [0, 1]).
double beta_log_pdf(double u, double alpha, double beta);

/// log density of the transformed action: sum_i log BetaPdf(u_i) minus the
/// n_a * log(2 c_b) change-of-variables constant. -inf signals a
/// zero-density point the caller should reject.
double log_density(const BetaPolicyParams& params, const Action& a,
                   double c_b);

/// Partial derivatives of beta_log_pdf with respect to alpha and beta at a
/// fixed u.
struct LogPdfGrad {
    double d_alpha;
    double d_beta;
};
LogPdfGrad beta_log_pdf_grad(double u, double alpha, double beta);

/// Gamma(shape, 1) variate, Marsaglia-Tsang squeeze method.
double gamma_sample(double shape, RandomStream& rng);

/// Draws u_i ~ Beta(alpha_i, beta_i) independently and transforms to the
/// action box.
Action sample(const BetaPolicyParams& params, double c_b, RandomStream& rng);

/// Analytic entropy of the base Beta distribution, summed over dimensions.
/// The constant n_a * log(2 c_b) shift from the transform is intentionally
/// not included; it carries no gradient. Use transformed_entropy for
/// reporting.
double entropy(const BetaPolicyParams& params);

/// Diagnostic: entropy of the transformed distribution, i.e. entropy()
/// plus n_a * log(2 c_b).
double transformed_entropy(const BetaPolicyParams& params, double c_b);

/// Closed-form dH/dalpha_i and dH/dbeta_i via trigamma.
struct EntropyGrad {
    std::vector<double> d_alpha;
    std::vector<double> d_beta;
};
EntropyGrad entropy_grad(const BetaPolicyParams& params);

}  // namespace a0c

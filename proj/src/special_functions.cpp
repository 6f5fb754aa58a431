#include "a0c/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace a0c {

namespace {

const double kLanczosG = 7.0;
const double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7,
};

const double kHalfLog2Pi = 0.91893853320467274178032973640562;

void require_positive(double x, const char* name) {
    if (!(x > 0.0)) {
        throw std::domain_error(std::string(name) + " requires x > 0");
    }
}

}  // namespace

double log_gamma(double x) {
    require_positive(x, "log_gamma");
    // Shift small arguments up through lgamma(x) = lgamma(x+1) - log(x).
    double shift = 0.0;
    while (x < 0.5) {
        shift -= std::log(x);
        x += 1.0;
    }
    const double z = x - 1.0;
    double sum = kLanczos[0];
    for (int i = 1; i < 9; ++i) {
        sum += kLanczos[i] / (z + i);
    }
    const double base = z + kLanczosG + 0.5;
    return shift + kHalfLog2Pi + (z + 0.5) * std::log(base) - base +
           std::log(sum);
}

double digamma(double x) {
    require_positive(x, "digamma");
    // psi(x) = psi(x+1) - 1/x until the asymptotic series is accurate.
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double w = 1.0 / (x * x);
    const double series =
        w * (1.0 / 12.0 -
             w * (1.0 / 120.0 -
                  w * (1.0 / 252.0 -
                       w * (1.0 / 240.0 -
                            w * (1.0 / 132.0 -
                                 w * (691.0 / 32760.0 - w * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
    require_positive(x, "trigamma");
    // psi'(x) = psi'(x+1) + 1/x^2.
    double acc = 0.0;
    while (x < 10.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double w = 1.0 / (x * x);
    const double series =
        1.0 / 6.0 -
        w * (1.0 / 30.0 -
             w * (1.0 / 42.0 -
                  w * (1.0 / 30.0 -
                       w * (5.0 / 66.0 -
                            w * (691.0 / 2730.0 - w * (7.0 / 6.0))))));
    return acc + 1.0 / x + 0.5 * w + w / x * series;
}

double log_beta(double a, double b) {
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

}  // namespace a0c

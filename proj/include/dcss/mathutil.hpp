#pragma once

#include <cstddef>
#include <vector>

namespace dcss {

// Gaussian right-tail probability Q(x) = P(N(0,1) > x).
double gaussian_q(double x);

// Inverse of gaussian_q on (0,1). gaussian_q_inv(0.5) == 0; clamps at the
// interval ends are the caller's responsibility.
double gaussian_q_inv(double p);

// Empirical threshold lambda such that the fraction of `sorted_asc` samples
// strictly above lambda is approximately `tail_prob`. tail_prob >= 1 maps to
// -infinity (always exceed) and tail_prob <= 0 to +infinity (never exceed).
double tail_threshold(const std::vector<double>& sorted_asc, double tail_prob);

// Fraction of samples strictly greater than the threshold.
double exceed_fraction(const std::vector<double>& samples, double threshold);

// In-place isotonic (nondecreasing) projection via pool-adjacent-violators.
void isotonic_increasing(std::vector<double>& y);

double mean_of(const std::vector<double>& v);
double variance_of(const std::vector<double>& v);  // unbiased

}  // namespace dcss

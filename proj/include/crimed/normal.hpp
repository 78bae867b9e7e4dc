#pragma once

namespace crimed {

// Standard normal density.
double norm_pdf(double z);

// Standard normal CDF, computed via erfc. Accurate over the full double
// range, including far tails.
double norm_cdf(double z);

// Inverse of norm_cdf. Wichura's AS241 rational approximation followed by
// one Newton polish against norm_cdf, giving close to full double accuracy.
// Returns -inf/+inf for p <= 0 / p >= 1.
double norm_cdf_inv(double p);

}  // namespace crimed

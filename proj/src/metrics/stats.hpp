#pragma once

#include <span>

namespace mqsum::metrics {

struct TTestResult {
    double t = 0.0;
    int df = 0;
    double p = 1.0;
    double alpha = 0.05;
    bool significant = false;
};

// Two-sided paired t-test on element-wise deltas a[i] - b[i].
// Degenerate inputs (all deltas identical, so the sample deviation is zero)
// resolve by fiat: zero mean means no effect (p = 1), nonzero mean means the
// same shift in every pair (p = 0, t = +/-inf). Both are reported, not
// errors, so sweeping comparisons over many metrics never aborts midway.
// Throws Error(length_mismatch) on unequal lengths and
// Error(too_few_samples) when fewer than two pairs are given.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b,
                         double alpha = 0.05);

// Regularized incomplete beta function I_x(a, b), exposed for verification
// against an independent numeric oracle. Continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

} // namespace mqsum::metrics

#include "metrics/stats.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace mqsum::metrics {

namespace {

// Lentz's continued fraction for I_x(a,b); converges quickly for
// x < (a+1)/(a+b+2), and the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) covers the
// rest. Standard treatment, see Numerical Recipes ch. 6.
double betacf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16;
    constexpr double fpmin = 1e-300;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b,
                         double alpha) {
    if (a.size() != b.size())
        throw Error(Errc::length_mismatch,
                    "paired t-test needs equally long score lists");
    if (a.size() < 2)
        throw Error(Errc::too_few_samples,
                    "paired t-test needs at least two pairs");

    size_t n = a.size();
    double mean = 0.0;
    for (size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double d = (a[i] - b[i]) - mean;
        ss += d * d;
    }
    double var = ss / static_cast<double>(n - 1);

    TTestResult result;
    result.df = static_cast<int>(n) - 1;
    result.alpha = alpha;

    if (var == 0.0) {
        if (mean == 0.0) {
            result.t = 0.0;
            result.p = 1.0;
        } else {
            result.t = mean > 0 ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
            result.p = 0.0;
        }
    } else {
        result.t = mean / std::sqrt(var / static_cast<double>(n));
        double df = static_cast<double>(result.df);
        result.p = regularized_incomplete_beta(
            df / 2.0, 0.5, df / (df + result.t * result.t));
    }
    result.significant = result.p <= alpha;
    return result;
}

} // namespace mqsum::metrics

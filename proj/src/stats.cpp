#include "npb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace npb::stats {

// ---------------------------------------------------------------------
// descriptive statistics
// ---------------------------------------------------------------------

SampleStats summarize(const std::vector<double>& values)
{
    if (values.empty())
        throw std::invalid_argument("summarize: empty sample");
    SampleStats s;
    s.values = values;
    double sum = 0.0;
    s.min = values[0];
    s.max = values[0];
    for (double v : values) {
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = sum / (double)values.size();
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / (double)(values.size() - 1));
    }
    return s;
}

double geometric_mean(const std::vector<double>& values)
{
    if (values.empty())
        throw std::invalid_argument("geometric_mean: empty sample");
    double acc = 0.0;
    for (double v : values) {
        if (v <= 0.0)
            throw std::invalid_argument("geometric_mean: nonpositive value");
        acc += std::log(v);
    }
    return std::exp(acc / (double)values.size());
}

// ---------------------------------------------------------------------
// distribution helpers
// ---------------------------------------------------------------------

double normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double inverse_normal_cdf(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("inverse_normal_cdf: p outside (0,1)");
    // bisection on the monotone CDF; the quantiles needed here are all
    // well inside +-12 sigma and 200 erfc evaluations cost nothing
    double lo = -12.0, hi = 12.0;
    for (int i = 0; i < 200; i++) {
        double mid = 0.5 * (lo + hi);
        if (normal_cdf(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// continued fraction for the regularized incomplete beta (Lentz)
double betacf(double a, double b, double x)
{
    const int max_iter = 300;
    const double eps = 3.0e-16, fpmin = 1.0e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin)
        d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; m++) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin)
            d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin)
            c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin)
            d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin)
            c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps)
            break;
    }
    return h;
}

double incomplete_beta(double a, double b, double x)
{
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0))
        return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

} // namespace

double student_t_two_sided_p(double t, long df)
{
    if (df < 1)
        throw std::invalid_argument("student_t_two_sided_p: df < 1");
    double d = (double)df;
    return incomplete_beta(0.5 * d, 0.5, d / (d + t * t));
}

// ---------------------------------------------------------------------
// Shapiro-Wilk, Royston's 1995 approximation (AS R94)
// ---------------------------------------------------------------------

namespace {

double poly(const double* c, int len, double x)
{
    double acc = c[len - 1];
    for (int i = len - 2; i >= 0; i--)
        acc = acc * x + c[i];
    return acc;
}

} // namespace

ShapiroResult shapiro_wilk(std::vector<double> x)
{
    const size_t n = x.size();
    if (n < 3 || n > 50)
        throw std::invalid_argument("shapiro_wilk: n must be in [3, 50]");
    std::sort(x.begin(), x.end());

    ShapiroResult res;
    if (x[n - 1] - x[0] <= 0.0) {
        res.degenerate = true;
        res.p = 0.0;
        return res;
    }

    // expected normal order statistics (Blom) for the lower half
    const size_t n2 = n / 2;
    std::vector<double> m(n2);
    double ssq_m = 0.0;
    for (size_t i = 0; i < n2; i++) {
        m[i] = inverse_normal_cdf(((double)(i + 1) - 0.375) / ((double)n + 0.25));
        ssq_m += m[i] * m[i];
    }
    ssq_m *= 2.0;

    static const double c1[6] = {0.0, 0.221157, -0.147981,
                                 -2.071190, 4.434685, -2.706056};
    static const double c2[6] = {0.0, 0.042981, -0.293762,
                                 -1.752461, 5.682633, -3.582633};

    // weights a[i] for the lower half; antisymmetric upper half implied
    std::vector<double> a(n2);
    const double rsn = 1.0 / std::sqrt((double)n);
    if (n == 3) {
        a[0] = -std::sqrt(0.5);
    } else {
        double a1 = poly(c1, 6, rsn) - m[0] / std::sqrt(ssq_m);
        size_t start;
        double fac;
        if (n > 5) {
            double a2 = poly(c2, 6, rsn) - m[1] / std::sqrt(ssq_m);
            fac = std::sqrt((ssq_m - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            a[0] = -a1;
            a[1] = -a2;
            start = 2;
        } else {
            fac = std::sqrt((ssq_m - 2.0 * m[0] * m[0]) /
                            (1.0 - 2.0 * a1 * a1));
            a[0] = -a1;
            start = 1;
        }
        for (size_t i = start; i < n2; i++)
            a[i] = m[i] / fac;
    }

    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= (double)n;

    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; i++)
        den += (x[i] - mean) * (x[i] - mean);
    for (size_t i = 0; i < n2; i++)
        num += a[i] * (x[i] - x[n - 1 - i]);
    double w = num * num / den;
    if (w > 1.0)
        w = 1.0;
    res.w = w;

    if (n == 3) {
        const double pi6 = 6.0 / M_PI;
        const double stqr = std::asin(std::sqrt(0.75));
        double p = pi6 * (std::asin(std::sqrt(w)) - stqr);
        res.p = std::clamp(p, 0.0, 1.0);
        return res;
    }

    static const double c3[4] = {0.5440, -0.39978, 0.025054, -6.714e-4};
    static const double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
    static const double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static const double c6[3] = {-0.4803, -0.082676, 0.0030302};

    double y = std::log(1.0 - w);
    double mu, sigma;
    if (n <= 11) {
        double gamma = -2.273 + 0.459 * (double)n;
        if (y >= gamma) {
            res.p = 1e-99;
            return res;
        }
        y = -std::log(gamma - y);
        mu = poly(c3, 4, (double)n);
        sigma = std::exp(poly(c4, 4, (double)n));
    } else {
        double ln_n = std::log((double)n);
        mu = poly(c5, 4, ln_n);
        sigma = std::exp(poly(c6, 3, ln_n));
    }
    res.p = 1.0 - normal_cdf((y - mu) / sigma);
    return res;
}

// ---------------------------------------------------------------------
// paired tests
// ---------------------------------------------------------------------

double paired_t_test(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("paired_t_test: length mismatch");
    const size_t n = a.size();
    if (n < 3)
        throw std::invalid_argument("paired_t_test: need n >= 3");

    double mean = 0.0;
    for (size_t i = 0; i < n; i++)
        mean += a[i] - b[i];
    mean /= (double)n;
    double ss = 0.0;
    for (size_t i = 0; i < n; i++) {
        double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    double sd = std::sqrt(ss / (double)(n - 1));
    if (sd == 0.0)
        return mean == 0.0 ? 1.0 : 0.0;
    double t = mean / (sd / std::sqrt((double)n));
    return student_t_two_sided_p(t, (long)n - 1);
}

double wilcoxon_signed_rank(const std::vector<double>& a,
                            const std::vector<double>& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("wilcoxon_signed_rank: length mismatch");
    if (a.size() < 6)
        throw std::invalid_argument("wilcoxon_signed_rank: need n >= 6");

    std::vector<double> d;
    d.reserve(a.size());
    for (size_t i = 0; i < a.size(); i++) {
        double di = a[i] - b[i];
        if (di != 0.0)
            d.push_back(di);
    }
    const size_t n = d.size();
    if (n == 0)
        return 1.0;

    // average ranks of |d|, doubled so ties stay integral
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; i++)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        return std::fabs(d[i]) < std::fabs(d[j]);
    });
    std::vector<long> rank2(n);
    double tie_term = 0.0;
    for (size_t i = 0; i < n;) {
        size_t j = i;
        while (j + 1 < n &&
               std::fabs(d[order[j + 1]]) == std::fabs(d[order[i]]))
            j++;
        long t = (long)(j - i + 1);
        // average of ranks i+1 .. j+1, doubled: (i+1 + j+1)
        long r2 = (long)(i + 1) + (long)(j + 1);
        for (size_t k = i; k <= j; k++)
            rank2[order[k]] = r2;
        tie_term += (double)t * t * t - (double)t;
        i = j + 1;
    }

    long t2_plus = 0, s2 = 0;
    for (size_t i = 0; i < n; i++) {
        s2 += rank2[i];
        if (d[i] > 0.0)
            t2_plus += rank2[i];
    }

    if (n <= 25) {
        // exact null distribution of the doubled positive-rank sum,
        // conditional on the observed rank multiset
        std::vector<double> count((size_t)s2 + 1, 0.0);
        count[0] = 1.0;
        for (size_t i = 0; i < n; i++)
            for (long s = s2; s >= rank2[i]; s--)
                count[(size_t)s] += count[(size_t)(s - rank2[i])];
        double total = std::ldexp(1.0, (int)n);
        long lo = std::min(t2_plus, s2 - t2_plus);
        long hi = s2 - lo;
        double p = 0.0;
        for (long s = 0; s <= lo; s++)
            p += count[(size_t)s];
        for (long s = hi; s <= s2; s++)
            p += count[(size_t)s];
        p /= total;
        return std::min(p, 1.0);
    }

    // normal approximation with continuity and tie corrections
    double nn = (double)n;
    double t_plus = 0.5 * (double)t2_plus;
    double mn = nn * (nn + 1.0) / 4.0;
    double se = std::sqrt(nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 -
                          tie_term / 48.0);
    double dev = t_plus - mn;
    double cc = 0.5 * (dev > 0.0 ? 1.0 : dev < 0.0 ? -1.0 : 0.0);
    double z = (dev - cc) / se;
    double p = 2.0 * (1.0 - normal_cdf(std::fabs(z)));
    return std::min(p, 1.0);
}

// ---------------------------------------------------------------------
// comparison pipeline
// ---------------------------------------------------------------------

ComparisonReport compare(const std::vector<double>& a,
                         const std::vector<double>& b,
                         const std::string& label_a,
                         const std::string& label_b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("compare: length mismatch");

    ComparisonReport r;
    r.label_a = label_a;
    r.label_b = label_b;
    r.stats_a = summarize(a);
    r.stats_b = summarize(b);

    ShapiroResult na = shapiro_wilk(a);
    ShapiroResult nb = shapiro_wilk(b);
    r.normality_p_a = na.p;
    r.normality_p_b = nb.p;

    bool both_normal = !na.degenerate && !nb.degenerate &&
                       na.p > r.alpha && nb.p > r.alpha;
    if (both_normal) {
        r.test_name = "paired-t";
        r.p_value = paired_t_test(a, b);
    } else {
        r.test_name = "wilcoxon";
        r.p_value = wilcoxon_signed_rank(a, b);
    }
    r.different = r.p_value < r.alpha;
    if (r.stats_a.mean != 0.0)
        r.mean_diff_percent =
            (r.stats_b.mean - r.stats_a.mean) / r.stats_a.mean * 100.0;
    return r;
}

} // namespace npb::stats

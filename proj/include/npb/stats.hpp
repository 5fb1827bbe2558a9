#ifndef NPB_STATS_HPP
#define NPB_STATS_HPP

#include <string>
#include <vector>

namespace npb::stats {

// ---------------------------------------------------------------------
// descriptive statistics
// ---------------------------------------------------------------------

struct SampleStats {
    std::vector<double> values;
    double mean = 0.0;
    double stddev = 0.0; // sample form, n-1 denominator; 0 for n == 1
    double min = 0.0;
    double max = 0.0;
};

SampleStats summarize(const std::vector<double>& values);

double geometric_mean(const std::vector<double>& values);

// ---------------------------------------------------------------------
// hypothesis tests
// ---------------------------------------------------------------------

struct ShapiroResult {
    double w = 0.0;
    double p = 0.0;
    // zero-range sample: W is undefined and the sample is reported as
    // non-normal (p = 0)
    bool degenerate = false;
};

// Shapiro-Wilk normality test (Royston's AS R94 approximation).
// Requires 3 <= n <= 50; throws std::invalid_argument otherwise.
ShapiroResult shapiro_wilk(std::vector<double> sample);

// Two-sided paired t-test p-value. Lengths must match, n >= 3.
// Identical samples give p = 1.
double paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

// Two-sided Wilcoxon signed-rank p-value. Lengths must match, n >= 6.
// Zero differences are dropped; ties get average ranks. Exact
// conditional distribution (dynamic program over rank sums) for up to
// 25 nonzero differences, normal approximation with continuity and
// tie correction above.
double wilcoxon_signed_rank(const std::vector<double>& a,
                            const std::vector<double>& b);

// ---------------------------------------------------------------------
// sample comparison (normality check, test selection, verdict)
// ---------------------------------------------------------------------

struct ComparisonReport {
    std::string label_a;
    std::string label_b;
    SampleStats stats_a;
    SampleStats stats_b;
    double normality_p_a = 0.0;
    double normality_p_b = 0.0;
    std::string test_name; // "paired-t" or "wilcoxon"
    double p_value = 1.0;
    bool different = false;        // H0 rejected at alpha
    double alpha = 0.05;
    double mean_diff_percent = 0.0; // (mean_b - mean_a) / mean_a * 100
};

// Paired T when both samples pass Shapiro-Wilk at alpha = 0.05,
// Wilcoxon signed-rank otherwise; verdict at the same level.
ComparisonReport compare(const std::vector<double>& a,
                         const std::vector<double>& b,
                         const std::string& label_a = "A",
                         const std::string& label_b = "B");

// ---------------------------------------------------------------------
// distribution helpers (exposed for the oracle tests)
// ---------------------------------------------------------------------

double normal_cdf(double z);
double inverse_normal_cdf(double p);
double student_t_two_sided_p(double t, long df);

} // namespace npb::stats

#endif

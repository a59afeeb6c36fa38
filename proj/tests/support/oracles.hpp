#pragma once

#include <functional>
#include <vector>

// Independent statistical oracles for the test suite. Everything here is
// implemented from first principles (closed forms, no reuse of library
// code under test).

namespace oracles {

// Regularized incomplete beta I_x(a, b) for positive integer shapes, via
// the exact binomial-sum identity. This is the CDF of Beta(a, b).
double beta_cdf(int a, int b, double x);

// Kolmogorov-Smirnov distance between a sample and a reference CDF.
double ks_distance(std::vector<double> sample,
                   const std::function<double(double)>& cdf);

// Upper-tail p-value of a chi-square statistic with 1 degree of freedom.
double chi2_pvalue_df1(double stat);

// Spearman rank correlation with average ranks on ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);
// Square root of the average within-group sample variance.
double pooled_sd(const std::vector<std::vector<double>>& groups);
// Percentile by linear interpolation on the sorted sample, p in [0, 100].
double percentile(std::vector<double> v, double p);

} // namespace oracles

#pragma once

#include <vector>

// Building blocks on a sorted sample, shared by full and incremental
// evaluation.
namespace fb::func::stats {

double mean(const std::vector<double>& x);
// sum over all ordered pairs of |x_i - x_j|
double pairwise_abs_sum(const std::vector<double>& x);
double gini_mean_diff(const std::vector<double>& x);
double variance(const std::vector<double>& x);
double schutz_abs(const std::vector<double>& x);
// (1/m) sum x_i^p
double power_mean_sum(const std::vector<double>& x, double p);
double kolm(const std::vector<double>& x, double kappa);
// integral of the step quantile function over [0, u]
double lorenz_q(const std::vector<double>& x, double u);

}  // namespace fb::func::stats

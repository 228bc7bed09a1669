#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cephgrow::stats {

double mean(std::span<const double> xs);

// Sample (n-1) convention, the one convention used project-wide.
double sample_std(std::span<const double> xs);

double min(std::span<const double> xs);
double max(std::span<const double> xs);

// Pearson correlation with sample convention. Returns NaN when either
// side has zero variance; callers decide how to flag that.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation (modified Lentz), absolute accuracy ~1e-12 for the argument
// ranges seen by the t distribution.
double regularized_incomplete_beta(double a, double b, double x);

// Upper-tail probability P(T > t) of Student's t with df degrees of freedom.
double student_t_upper_tail(double t, double df);

} // namespace cephgrow::stats

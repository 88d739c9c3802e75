#pragma once

#include <span>
#include <vector>

#include "core/banded.hpp"
#include "core/learner.hpp"

namespace bnpmle {

//! Result of one penalized spline fit: the fitted learner, the smoothing
//! parameter that achieved the requested degrees of freedom (as log10 lambda,
//! on the mean-one weight scale used internally), and the trace actually
//! reached.
struct SplineFit {
  SplineLearner learner;
  double log10_lambda = 0.0;
  double df_achieved = 0.0;
};

//! Pentadiagonal second-difference Gram matrix C = Q^T W^{-1} Q together with
//! the tridiagonal roughness matrix R, for knots x and (already normalized)
//! weights w. Both are (n-2) x (n-2); R is stored in the pentadiagonal
//! container with a zero second off-diagonal so the two can share the banded
//! arithmetic helpers.
struct SplineSystem {
  SymPentadiagonal R;  // roughness Gram matrix of natural-spline curvatures
  SymPentadiagonal C;  // Q^T W^{-1} Q
  std::vector<double> h;
};

SplineSystem build_spline_system(std::span<const double> x,
                                 std::span<const double> w_normalized);

//! Eigenvalues theta of the banded pencil R gamma = theta C gamma, ascending.
//! They determine the smoother trace exactly:
//!
//!   trace(lambda) = 2 + sum_j theta_j / (theta_j + lambda)
//!
//! which is analytic and strictly decreasing in lambda, so the df search
//! cannot be derailed by roundoff in a per-lambda factorization. The pencil
//! is deliberately solved in this orientation (R against C, not C against R):
//! eigensolver errors are absolute at the scale of the largest eigenvalue,
//! and here the largest thetas are the smooth low-curvature modes that
//! dominate the trace at practical df values, so exactly the modes that
//! matter are the ones computed to relative accuracy. Nearly coincident
//! knots make the reverse orientation catastrophically noisy.
std::vector<double> smoothing_spectrum(const SplineSystem& sys);

//! Trace of the smoother at penalty lambda given the pencil spectrum.
double trace_from_spectrum(std::span<const double> spectrum, double lambda);

//! Trace of the linear smoother g -> s at penalty lambda, i.e. the effective
//! degrees of freedom. Convenience wrapper that recomputes the spectrum on
//! every call; fit_spline computes it once and reuses it across the search.
double smoother_trace(const SplineSystem& sys, double lambda, size_t n);

//! Fitted values of the penalized criterion at a fixed lambda (mean-one weight
//! scale); optionally returns the interior second derivatives. Building block
//! for fit_spline, exposed so tests can assemble the smoother matrix column by
//! column.
std::vector<double> solve_penalized(const SplineSystem& sys,
                                    std::span<const double> w_normalized,
                                    std::span<const double> g, double lambda,
                                    std::vector<double>* gamma_out = nullptr);

//! Fit the weighted natural cubic smoothing spline to responses g at the given
//! knots, choosing lambda so the smoother trace matches df to within 1e-3.
//!
//! The search bisects on log10 lambda starting from [-12, 12] (or from a
//! +/-1 decade bracket around warm_log10_lambda when provided), expanding as
//! far as +/-30 before giving up. Traces flatten against their limits of 2 and
//! n at the extremes, so an endpoint whose trace is already within tolerance
//! is accepted as the solution. Throws Error{numeric, "df-search-failure"} if
//! no bracket or no converged midpoint is found.
SplineFit fit_spline(const std::shared_ptr<const std::vector<double>>& knots,
                     std::span<const double> w, std::span<const double> g,
                     double df, const double* warm_log10_lambda = nullptr);

} // namespace bnpmle

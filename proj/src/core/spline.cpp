#include "core/spline.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include <lapacke.h>

#include "core/error.hpp"

namespace bnpmle {

namespace {

constexpr double kDfTol = 1e-3;
constexpr int kMaxBisect = 200;
constexpr double kBracketLimit = 30.0;  // log10 lambda, both directions
constexpr double kWeightRelFloor = 1e-12;  // relative to the mean weight
constexpr double kResponseCap = 1e8;
// Relative diagonal inflation applied to C = Q^T W^-1 Q wherever it is
// factorized. On very uneven knot gaps the 1/h^2 entries of C span fifteen
// orders of magnitude and the matrix is numerically semidefinite: banded
// Cholesky breaks down even though C is positive definite in exact
// arithmetic. Inflating the diagonal by 1e-12 -- nine orders below the df
// tolerance and four above machine roundoff -- restores a firm pivot floor
// while perturbing the spectrum, and hence the fitted df, imperceptibly.
constexpr double kPencilJitter = 1e-12;

//! Second-difference coefficients of interior knot j+1: the column of Q for
//! that knot has entries (1/h[j], -1/h[j]-1/h[j+1], 1/h[j+1]) in rows
//! j, j+1, j+2.
struct QColumn {
  double lo, mid, hi;
};

QColumn q_column(const std::vector<double>& h, size_t j) {
  return {1.0 / h[j], -1.0 / h[j] - 1.0 / h[j + 1], 1.0 / h[j + 1]};
}

std::vector<double> apply_qt(const SplineSystem& sys,
                             std::span<const double> g) {
  const size_t m = sys.R.size();
  std::vector<double> out(m);
  for (size_t j = 0; j < m; ++j) {
    const QColumn q = q_column(sys.h, j);
    out[j] = q.lo * g[j] + q.mid * g[j + 1] + q.hi * g[j + 2];
  }
  return out;
}

SymPentadiagonal penalized_matrix(const SplineSystem& sys, double lambda) {
  const size_t m = sys.R.size();
  SymPentadiagonal B(m);
  for (size_t j = 0; j < m; ++j)
    B.diag[j] = sys.R.diag[j] + lambda * sys.C.diag[j];
  for (size_t j = 0; j + 1 < m; ++j)
    B.sub1[j] = sys.R.sub1[j] + lambda * sys.C.sub1[j];
  for (size_t j = 0; j + 2 < m; ++j) B.sub2[j] = lambda * sys.C.sub2[j];
  return B;
}

} // namespace

SplineSystem build_spline_system(std::span<const double> x,
                                 std::span<const double> w_normalized) {
  const size_t n = x.size();
  if (w_normalized.size() != n) {
    throw Error(ErrorCode::invalid_argument,
                "spline system: weight length does not match knot length");
  }
  if (n < 2) {
    throw Error(ErrorCode::invalid_argument,
                "spline system: need at least two knots");
  }
  SplineSystem sys;
  sys.h.resize(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    sys.h[i] = x[i + 1] - x[i];
    if (!(sys.h[i] > 0.0)) {
      throw Error(ErrorCode::invalid_argument,
                  "spline system: knots must be strictly increasing");
    }
  }
  const size_t m = n - 2;
  sys.R = SymPentadiagonal(m);
  sys.C = SymPentadiagonal(m);
  for (size_t j = 0; j < m; ++j) {
    sys.R.diag[j] = (sys.h[j] + sys.h[j + 1]) / 3.0;
    const QColumn q = q_column(sys.h, j);
    sys.C.diag[j] = q.lo * q.lo / w_normalized[j] +
                    q.mid * q.mid / w_normalized[j + 1] +
                    q.hi * q.hi / w_normalized[j + 2];
  }
  for (size_t j = 0; j + 1 < m; ++j) {
    sys.R.sub1[j] = sys.h[j + 1] / 6.0;
    const QColumn qa = q_column(sys.h, j);
    const QColumn qb = q_column(sys.h, j + 1);
    // Columns j and j+1 of Q overlap in rows j+1 and j+2.
    sys.C.sub1[j] = qa.mid * qb.lo / w_normalized[j + 1] +
                    qa.hi * qb.mid / w_normalized[j + 2];
  }
  for (size_t j = 0; j + 2 < m; ++j) {
    const QColumn qa = q_column(sys.h, j);
    const QColumn qc = q_column(sys.h, j + 2);
    sys.C.sub2[j] = qa.hi * qc.lo / w_normalized[j + 2];
  }
  return sys;
}

std::vector<double> smoothing_spectrum(const SplineSystem& sys) {
  const lapack_int m = static_cast<lapack_int>(sys.R.size());
  if (m == 0) return {};
  // The pencil (R, C) is passed to the solver with the roles swapped. The
  // banded generalized eigensolver split-Cholesky-factorizes its B-side
  // matrix, and that factorization can break down for C, whose 1/w and
  // 1/h entries span many orders of magnitude on uneven knot sets. R, by
  // contrast, is a strictly diagonally dominant tridiagonal mass matrix
  // ((h_j + h_{j+1})/3 > h_j/6 + h_{j+1}/6), for which the factorization
  // cannot fail. Solving C x = mu R x and inverting the eigenvalues yields
  // the identical spectrum through the stable side.
  //
  // Column-major lower-triangle band storage: column j holds the diagonal
  // at row offset 0 and the r-th subdiagonal at offset r.
  std::vector<double> ab(3 * m, 0.0);   // C: diagonal + two subdiagonals
  std::vector<double> bb(2 * m, 0.0);   // R: diagonal + one subdiagonal
  for (lapack_int j = 0; j < m; ++j) {
    ab[0 + 3 * j] = sys.C.diag[j];
    if (j + 1 < m) ab[1 + 3 * j] = sys.C.sub1[j];
    if (j + 2 < m) ab[2 + 3 * j] = sys.C.sub2[j];
    bb[0 + 2 * j] = sys.R.diag[j];
    if (j + 1 < m) bb[1 + 2 * j] = sys.R.sub1[j];
  }
  std::vector<double> mu(m);
  const lapack_int info =
      LAPACKE_dsbgv(LAPACK_COL_MAJOR, 'N', 'L', m, 2, 1, ab.data(), 3,
                    bb.data(), 2, mu.data(), nullptr, 1);
  if (info != 0) {
    throw Error(ErrorCode::numeric,
                "smoothing spline: banded eigensolve failed (info " +
                    std::to_string(info) + ")");
  }
  // Both matrices are positive definite, so mu >= 0 up to roundoff. A tiny
  // or slightly negative mu marks a numerically singular direction of C;
  // clamping before inverting maps it to a huge theta whose trace
  // contribution saturates at one, the correct limit for that direction.
  std::vector<double> theta(m);
  for (lapack_int j = 0; j < m; ++j)
    theta[j] = 1.0 / std::max(mu[j], 1e-300);
  return theta;
}

double trace_from_spectrum(std::span<const double> spectrum, double lambda) {
  double trace = 2.0;
  for (const double theta : spectrum) trace += theta / (theta + lambda);
  return trace;
}

double smoother_trace(const SplineSystem& sys, double lambda, size_t n) {
  if (sys.R.size() == 0) return static_cast<double>(n);
  return trace_from_spectrum(smoothing_spectrum(sys), lambda);
}

std::vector<double> solve_penalized(const SplineSystem& sys,
                                    std::span<const double> w_normalized,
                                    std::span<const double> g, double lambda,
                                    std::vector<double>* gamma_out) {
  const size_t n = g.size();
  const size_t m = sys.R.size();
  std::vector<double> s(g.begin(), g.end());
  if (m == 0) {
    if (gamma_out) gamma_out->clear();
    return s;  // two knots: the spline interpolates
  }
  PentadiagonalLDLT factor(penalized_matrix(sys, lambda));
  std::vector<double> gamma = factor.solve(apply_qt(sys, g));
  for (size_t r = 0; r < n; ++r) {
    double qg = 0.0;
    if (r >= 2) qg += gamma[r - 2] / sys.h[r - 1];
    if (r >= 1 && r - 1 < m)
      qg -= gamma[r - 1] * (1.0 / sys.h[r - 1] + 1.0 / sys.h[r]);
    if (r < m) qg += gamma[r] / sys.h[r];
    s[r] -= lambda * qg / w_normalized[r];
  }
  if (gamma_out) *gamma_out = std::move(gamma);
  return s;
}

SplineFit fit_spline(const std::shared_ptr<const std::vector<double>>& knots,
                     std::span<const double> w, std::span<const double> g,
                     double df, const double* warm_log10_lambda) {
  const std::vector<double>& x = *knots;
  const size_t n = x.size();
  if (w.size() != n || g.size() != n) {
    throw Error(ErrorCode::invalid_argument,
                "smoothing spline: weight/response length does not match knots");
  }
  if (n < 4) {
    throw Error(ErrorCode::infeasible,
                "smoothing spline: needs at least four distinct knots");
  }
  if (df < 2.0 || df > static_cast<double>(n)) {
    throw Error(ErrorCode::infeasible,
                "smoothing spline: requested df outside [2, number of knots]");
  }

  // Scale the weights to mean one. The fit is invariant (scaling W by c and
  // lambda by c gives the same smoother), and it keeps the penalized system
  // well conditioned when the boosting weights decay over iterations.
  double wsum = 0.0;
  for (double wi : w) {
    if (!(wi > 0.0) || !std::isfinite(wi)) {
      throw Error(ErrorCode::numeric,
                  "smoothing spline: weights must be positive and finite");
    }
    wsum += wi;
  }
  std::vector<double> wn(n);
  for (size_t i = 0; i < n; ++i) wn[i] = w[i] * static_cast<double>(n) / wsum;

  // Representability guards for the banded systems. When the boosted
  // potential at a sparse tail knot falls far below its stationary value,
  // that knot's weight collapses toward zero while its response (q/w - 1)
  // explodes, and the 1/w entries of the penalized system overflow double
  // precision, killing the banded eigensolve. An overlarge response is
  // rescaled rather than discarded: shrinking g while growing w by the same
  // factor preserves the product w*g — the pull the normal equations
  // (W + lambda*K)s = Wg actually feel from that knot — while keeping both
  // factors representable, so a collapsed knot retains its true restoring
  // force on the fit. The weight floor is a backstop for knots whose pull
  // itself is negligible. Both guards engage only beyond spreads no
  // well-scaled problem reaches (responses past 1e8, weights twelve orders
  // below the mean).
  std::vector<double> gc(g.begin(), g.end());
  for (size_t i = 0; i < n; ++i) {
    const double mag = std::fabs(gc[i]);
    if (mag > kResponseCap) {
      wn[i] *= mag / kResponseCap;
      gc[i] = std::copysign(kResponseCap, gc[i]);
    }
    wn[i] = std::max(wn[i], kWeightRelFloor);
  }

  SplineFit fit;
  fit.learner.x = knots;

  const SplineSystem sys = build_spline_system(x, wn);
  const std::vector<double> spectrum = smoothing_spectrum(sys);
  const auto trace_at = [&](double t) {
    return trace_from_spectrum(spectrum, std::pow(10.0, t));
  };

  // Bisect trace(lambda) = df on the log10 scale. Through the spectrum the
  // trace is an explicit rational function, strictly decreasing from n to 2,
  // so once the bracket endpoints straddle df the bisection cannot fail; the
  // subtlety is at the extremes, where the trace flattens against its limit
  // and an endpoint can already be within tolerance without ever crossing
  // the target.
  double lo = warm_log10_lambda ? *warm_log10_lambda - 1.0 : -12.0;
  double hi = warm_log10_lambda ? *warm_log10_lambda + 1.0 : 12.0;
  double solution = 0.0;
  bool solved = false;

  double f_lo = trace_at(lo) - df;
  while (f_lo < 0.0) {
    if (std::fabs(f_lo) <= kDfTol) {
      solution = lo;
      solved = true;
      break;
    }
    lo -= 6.0;
    if (lo < -kBracketLimit) {
      throw Error(ErrorCode::numeric,
                  "smoothing spline: df-search-failure (no lower bracket)");
    }
    f_lo = trace_at(lo) - df;
  }
  if (!solved) {
    double f_hi = trace_at(hi) - df;
    while (f_hi > 0.0) {
      if (std::fabs(f_hi) <= kDfTol) {
        solution = hi;
        solved = true;
        break;
      }
      hi += 6.0;
      if (hi > kBracketLimit) {
        throw Error(ErrorCode::numeric,
                    "smoothing spline: df-search-failure (no upper bracket)");
      }
      f_hi = trace_at(hi) - df;
    }
  }
  if (!solved) {
    for (int it = 0; it < kMaxBisect; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = trace_at(mid) - df;
      if (std::fabs(f_mid) <= kDfTol) {
        solution = mid;
        solved = true;
        break;
      }
      (f_mid > 0.0 ? lo : hi) = mid;
    }
  }
  if (!solved) {
    throw Error(ErrorCode::numeric,
                "smoothing spline: df-search-failure (bisection stalled)");
  }

  const double lambda = std::pow(10.0, solution);
  std::vector<double> gamma;
  fit.learner.values = solve_penalized(sys, wn, gc, lambda, &gamma);
  fit.learner.d2.assign(n, 0.0);
  for (size_t j = 0; j < gamma.size(); ++j) fit.learner.d2[j + 1] = gamma[j];
  fit.log10_lambda = solution;
  fit.df_achieved = smoother_trace(sys, lambda, n);
  return fit;
}

} // namespace bnpmle

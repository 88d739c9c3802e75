#include "core/banded.hpp"

#include "core/error.hpp"

#include <cmath>
#include <cstddef>

namespace bnpmle {

PentadiagonalLDLT::PentadiagonalLDLT(const SymPentadiagonal& A)
{
  const std::size_t m = A.size();
  // The factorization runs on the congruence-scaled matrix S A S with
  // S = diag(A_ii^(-1/2)), whose unit diagonal removes the row-magnitude
  // spread of A. When rows differ by many orders of magnitude -- as the
  // penalized spline system does on very uneven knot gaps -- the raw
  // factorization can lose a pivot to roundoff even though A is positive
  // definite; the scaled system has no such spread, and solve() and
  // inverse_bands() undo the scaling exactly.
  s_.assign(m, 0.0);
  d_.assign(m, 0.0);
  e_.assign(m > 0 ? m - 1 : 0, 0.0);
  f_.assign(m > 1 ? m - 2 : 0, 0.0);

  for (std::size_t i = 0; i < m; ++i) {
    if (!(A.diag[i] > 0.0)) {
      throw Error(ErrorCode::numeric, "pentadiagonal matrix is not positive definite");
    }
    s_[i] = 1.0 / std::sqrt(A.diag[i]);
  }

  for (std::size_t i = 0; i < m; ++i) {
    double fi = 0.0;
    if (i >= 2) {
      fi = (A.sub2[i - 2] * s_[i] * s_[i - 2]) / d_[i - 2];
      f_[i - 2] = fi;
    }
    double ei = 0.0;
    if (i >= 1) {
      ei = A.sub1[i - 1] * s_[i] * s_[i - 1];
      if (i >= 2) ei -= fi * e_[i - 2] * d_[i - 2];
      ei /= d_[i - 1];
      e_[i - 1] = ei;
    }
    double di = 1.0;
    if (i >= 1) di -= ei * ei * d_[i - 1];
    if (i >= 2) di -= fi * fi * d_[i - 2];
    if (!(di > 0.0)) {
      throw Error(ErrorCode::numeric, "pentadiagonal matrix is not positive definite");
    }
    d_[i] = di;
  }
}

std::vector<double> PentadiagonalLDLT::solve(std::span<const double> b) const
{
  const std::size_t m = d_.size();
  std::vector<double> x(b.begin(), b.end());
  // The factors belong to S A S, so A^-1 = S (S A S)^-1 S: scale the right
  // side going in and the solution coming out.
  for (std::size_t i = 0; i < m; ++i) x[i] *= s_[i];
  // L z = b
  for (std::size_t i = 1; i < m; ++i) {
    x[i] -= e_[i - 1] * x[i - 1];
    if (i >= 2) x[i] -= f_[i - 2] * x[i - 2];
  }
  // D y = z
  for (std::size_t i = 0; i < m; ++i) {
    x[i] /= d_[i];
  }
  // L^T x = y
  for (std::size_t ir = m; ir-- > 0;) {
    if (ir + 1 < m) x[ir] -= e_[ir] * x[ir + 1];
    if (ir + 2 < m) x[ir] -= f_[ir] * x[ir + 2];
  }
  for (std::size_t i = 0; i < m; ++i) x[i] *= s_[i];
  return x;
}

SymPentadiagonal PentadiagonalLDLT::inverse_bands() const
{
  const std::size_t m = d_.size();
  SymPentadiagonal Z(m);
  if (m == 0) return Z;

  // Backward recurrence from L^T Z = D^-1 L^-1: above the diagonal the right
  // side vanishes, on it the unit diagonal of L^-1 contributes 1/d_i.
  Z.diag[m - 1] = 1.0 / d_[m - 1];
  for (std::size_t ir = m - 1; ir-- > 0;) {
    const std::size_t i = ir;
    const double e1 = e_[i];                              // L[i+1][i]
    const double f2 = (i + 2 < m) ? f_[i] : 0.0;          // L[i+2][i]
    const double z_i1_i1 = Z.diag[i + 1];
    const double z_i2_i1 = (i + 2 < m) ? Z.sub1[i + 1] : 0.0;
    const double z_i2_i2 = (i + 2 < m) ? Z.diag[i + 2] : 0.0;

    const double z_i1_i = -(e1 * z_i1_i1 + f2 * z_i2_i1);
    Z.sub1[i] = z_i1_i;
    double z_i2_i = 0.0;
    if (i + 2 < m) {
      z_i2_i = -(e1 * z_i2_i1 + f2 * z_i2_i2);
      Z.sub2[i] = z_i2_i;
    }
    Z.diag[i] = 1.0 / d_[i] - (e1 * z_i1_i + f2 * z_i2_i);
  }
  // The recurrence produced the bands of (S A S)^-1; A^-1 = S (S A S)^-1 S.
  for (std::size_t i = 0; i < m; ++i) Z.diag[i] *= s_[i] * s_[i];
  for (std::size_t i = 0; i + 1 < m; ++i) Z.sub1[i] *= s_[i] * s_[i + 1];
  for (std::size_t i = 0; i + 2 < m; ++i) Z.sub2[i] *= s_[i] * s_[i + 2];
  return Z;
}

double band_trace_product(const SymPentadiagonal& A, const SymPentadiagonal& B)
{
  double t = 0.0;
  for (std::size_t i = 0; i < A.diag.size(); ++i) t += A.diag[i] * B.diag[i];
  for (std::size_t i = 0; i < A.sub1.size(); ++i) t += 2.0 * A.sub1[i] * B.sub1[i];
  for (std::size_t i = 0; i < A.sub2.size(); ++i) t += 2.0 * A.sub2[i] * B.sub2[i];
  return t;
}

} // namespace bnpmle

#pragma once

#include <span>
#include <vector>

namespace bnpmle {

//! Symmetric pentadiagonal matrix stored by diagonals (main, first and second
//! subdiagonal). Everything the Reinsch spline formulation touches has this
//! shape: R (tridiagonal, sub2 = 0), Q^T W^-1 Q, and their sum.
struct SymPentadiagonal {
  std::vector<double> diag;  // size m
  std::vector<double> sub1;  // size m-1
  std::vector<double> sub2;  // size m-2

  explicit SymPentadiagonal(std::size_t m = 0)
    : diag(m, 0.0)
    , sub1(m > 0 ? m - 1 : 0, 0.0)
    , sub2(m > 1 ? m - 2 : 0, 0.0)
  {}

  std::size_t size() const { return diag.size(); }
};

//! LDL^T factorization of a symmetric positive definite pentadiagonal matrix.
//! O(m) to factor, O(m) per solve.
class PentadiagonalLDLT {
public:
  //! Throws Error{numeric} when a pivot is not strictly positive.
  explicit PentadiagonalLDLT(const SymPentadiagonal& A);

  std::vector<double> solve(std::span<const double> b) const;

  //! Central five bands of the inverse, via the backward (Takahashi-style)
  //! recurrence on the LDL^T factors; entries of A^-1 farther from the
  //! diagonal are never formed. O(m).
  SymPentadiagonal inverse_bands() const;

private:
  std::vector<double> s_;  // Jacobi scale, diag(A)^(-1/2)
  std::vector<double> d_;  // pivots of the scaled matrix
  std::vector<double> e_;  // L sub1
  std::vector<double> f_;  // L sub2
};

//! trace(A * B) for two symmetric pentadiagonal band representations.
double band_trace_product(const SymPentadiagonal& A, const SymPentadiagonal& B);

} // namespace bnpmle

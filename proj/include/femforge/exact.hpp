#pragma once

// Exact rational scalars and dense linear algebra over Q.
//
// Every routine here is exact: ranks, kernels and solves are computed by
// fraction-free (Bareiss) elimination on row-scaled integer copies, so no
// result depends on a tolerance.

#include <gmpxx.h>

#include <Eigen/Core>
#include <cstddef>
#include <string>
#include <vector>

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Nested = mpq_class;
  using Literal = mpq_class;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 20,
    MulCost = 40
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace femforge {

using Rational = mpq_class;
using Integer = mpz_class;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using DenseRow = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using ExactMatrix = DenseMatrix<Rational>;
using ExactVector = DenseVector<Rational>;
using ExactRow = DenseRow<Rational>;

/// "p/q" or "p" for integers.
std::string to_string(const Rational& r);
Rational parse_rational(const std::string& text);

ExactMatrix zeros(Eigen::Index rows, Eigen::Index cols);
ExactMatrix identity(Eigen::Index n);
bool is_zero(const ExactMatrix& a);

/// Result of fraction-free elimination: the row echelon form scaled so that
/// every pivot equals `pivot_value`, together with the pivot columns.
struct EchelonForm {
  std::vector<Integer> entries;  // row-major, rows x cols
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<Eigen::Index> pivot_cols;
  Integer pivot_value = 1;

  const Integer& at(Eigen::Index i, Eigen::Index j) const {
    return entries[static_cast<std::size_t>(i * cols + j)];
  }
};

/// Fraction-free elimination. With `reduced` set, rows above each pivot are
/// cleared too (Gauss-Jordan), giving an integer multiple of the RREF.
EchelonForm fraction_free_echelon(const ExactMatrix& a, bool reduced);

std::size_t rank(const ExactMatrix& a);

/// Rank from plain rational Gaussian elimination on the columns (A^T rows).
/// Independent route kept for self-consistency checks.
std::size_t rank_by_column_elimination(const ExactMatrix& a);

Rational determinant(const ExactMatrix& a);

/// Columns form the RREF-normalized basis of {x : Ax = 0}.
ExactMatrix null_space_basis(const ExactMatrix& a);

/// Exact X with AX = B. Throws SingularMatrix unless A is square and of full rank.
ExactMatrix solve(const ExactMatrix& a, const ExactMatrix& b);

ExactMatrix inverse(const ExactMatrix& a);

/// Linearly independent subset of the columns of A spanning its image.
ExactMatrix image_basis(const ExactMatrix& a);
std::vector<Eigen::Index> pivot_columns(const ExactMatrix& a);

/// Canonical basis of the column space (reduced column echelon form).
ExactMatrix column_echelon_basis(const ExactMatrix& a);

bool subspace_equal(const ExactMatrix& a, const ExactMatrix& b);
bool subspace_contains(const ExactMatrix& outer, const ExactMatrix& inner);
ExactMatrix subspace_sum(const ExactMatrix& a, const ExactMatrix& b);
ExactMatrix subspace_intersection(const ExactMatrix& a, const ExactMatrix& b);
bool is_direct_sum(const ExactMatrix& a, const ExactMatrix& b);

ExactMatrix hcat(const ExactMatrix& a, const ExactMatrix& b);
ExactMatrix vcat(const ExactMatrix& a, const ExactMatrix& b);

}  // namespace femforge

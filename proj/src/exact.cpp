#include "femforge/exact.hpp"

#include <algorithm>
#include <utility>

#include "femforge/errors.hpp"

namespace femforge {

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0 || r.get_den() == 0) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
  r.canonicalize();
  return r;
}

ExactMatrix zeros(Eigen::Index rows, Eigen::Index cols) {
  return ExactMatrix::Constant(rows, cols, Rational(0));
}

ExactMatrix identity(Eigen::Index n) {
  ExactMatrix m = zeros(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool is_zero(const ExactMatrix& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (sgn(a(i, j)) != 0) return false;
  return true;
}

namespace {

// Scales every row by the lcm of its denominators and removes the content,
// which leaves the row space unchanged.
std::vector<Integer> integer_rows(const ExactMatrix& a) {
  const auto rows = a.rows();
  const auto cols = a.cols();
  std::vector<Integer> out(static_cast<std::size_t>(rows * cols));
  Integer l, g;
  for (Eigen::Index i = 0; i < rows; ++i) {
    l = 1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    }
    g = 0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      Integer& e = out[static_cast<std::size_t>(i * cols + j)];
      mpz_divexact(e.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
      e *= a(i, j).get_num();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
    }
    if (g > 1) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        Integer& e = out[static_cast<std::size_t>(i * cols + j)];
        mpz_divexact(e.get_mpz_t(), e.get_mpz_t(), g.get_mpz_t());
      }
    }
  }
  return out;
}

void swap_rows(std::vector<Integer>& m, Eigen::Index cols, Eigen::Index a, Eigen::Index b) {
  if (a == b) return;
  for (Eigen::Index j = 0; j < cols; ++j) {
    std::swap(m[static_cast<std::size_t>(a * cols + j)], m[static_cast<std::size_t>(b * cols + j)]);
  }
}

}  // namespace

EchelonForm fraction_free_echelon(const ExactMatrix& a, bool reduced) {
  EchelonForm f;
  f.rows = a.rows();
  f.cols = a.cols();
  f.entries = integer_rows(a);
  auto& m = f.entries;
  const auto rows = f.rows;
  const auto cols = f.cols;
  auto at = [&](Eigen::Index i, Eigen::Index j) -> Integer& {
    return m[static_cast<std::size_t>(i * cols + j)];
  };

  Integer prev = 1;
  Integer pivot, factor, t;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    // Partial pivoting by nonzero entry; the shortest candidate keeps products small.
    Eigen::Index best = -1;
    std::size_t best_size = 0;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (sgn(at(i, c)) == 0) continue;
      const std::size_t size = mpz_size(at(i, c).get_mpz_t());
      if (best < 0 || size < best_size) {
        best = i;
        best_size = size;
      }
    }
    if (best < 0) continue;
    swap_rows(m, cols, r, best);
    pivot = at(r, c);

    const Eigen::Index first_row = reduced ? 0 : r + 1;
    const Eigen::Index first_col = reduced ? 0 : c + 1;
    for (Eigen::Index i = first_row; i < rows; ++i) {
      if (i == r) continue;
      factor = at(i, c);
      const bool factor_zero = sgn(factor) == 0;
      for (Eigen::Index j = first_col; j < cols; ++j) {
        if (j == c) continue;
        Integer& e = at(i, j);
        mpz_mul(t.get_mpz_t(), pivot.get_mpz_t(), e.get_mpz_t());
        if (!factor_zero) mpz_submul(t.get_mpz_t(), factor.get_mpz_t(), at(r, j).get_mpz_t());
        mpz_divexact(e.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, c) = 0;
    }
    prev = pivot;
    f.pivot_cols.push_back(c);
    ++r;
  }
  f.pivot_value = prev;
  return f;
}

std::size_t rank(const ExactMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  // Eliminating along the shorter dimension is cheaper; rank(A) = rank(A^T).
  if (a.rows() > a.cols()) {
    const ExactMatrix t = a.transpose();
    return fraction_free_echelon(t, false).pivot_cols.size();
  }
  return fraction_free_echelon(a, false).pivot_cols.size();
}

std::size_t rank_by_column_elimination(const ExactMatrix& a) {
  // Plain Gaussian elimination over Q on the rows of A^T.
  ExactMatrix m = a.transpose();
  std::size_t r = 0;
  const auto rows = m.rows();
  const auto cols = m.cols();
  for (Eigen::Index c = 0; c < cols && static_cast<Eigen::Index>(r) < rows; ++c) {
    Eigen::Index p = -1;
    for (Eigen::Index i = static_cast<Eigen::Index>(r); i < rows; ++i) {
      if (sgn(m(i, c)) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    m.row(p).swap(m.row(static_cast<Eigen::Index>(r)));
    const Rational inv = 1 / m(static_cast<Eigen::Index>(r), c);
    for (Eigen::Index i = static_cast<Eigen::Index>(r) + 1; i < rows; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      const Rational f = m(i, c) * inv;
      for (Eigen::Index j = c; j < cols; ++j) m(i, j) -= f * m(static_cast<Eigen::Index>(r), j);
    }
    ++r;
  }
  return r;
}

Rational determinant(const ExactMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const auto n = a.rows();
  if (n == 0) return 1;
  // Track the row scaling and swaps by running Bareiss on an unscaled copy.
  std::vector<Integer> scale(static_cast<std::size_t>(n));
  ExactMatrix scaled = a;
  Rational factor = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    Integer l = 1;
    for (Eigen::Index j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (Eigen::Index j = 0; j < n; ++j) scaled(i, j) *= Rational(l);
    factor /= Rational(l);
  }
  std::vector<Integer> m(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m[static_cast<std::size_t>(i * n + j)] = scaled(i, j).get_num();
  auto at = [&](Eigen::Index i, Eigen::Index j) -> Integer& { return m[static_cast<std::size_t>(i * n + j)]; };
  Integer prev = 1, t;
  int sign = 1;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = -1;
    for (Eigen::Index i = c; i < n; ++i) {
      if (sgn(at(i, c)) != 0) {
        p = i;
        break;
      }
    }
    if (p < 0) return 0;
    if (p != c) {
      swap_rows(m, n, p, c);
      sign = -sign;
    }
    for (Eigen::Index i = c + 1; i < n; ++i) {
      for (Eigen::Index j = c + 1; j < n; ++j) {
        mpz_mul(t.get_mpz_t(), at(c, c).get_mpz_t(), at(i, j).get_mpz_t());
        mpz_submul(t.get_mpz_t(), at(i, c).get_mpz_t(), at(c, j).get_mpz_t());
        mpz_divexact(at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, c) = 0;
    }
    prev = at(c, c);
  }
  return factor * Rational(prev) * sign;
}

ExactMatrix null_space_basis(const ExactMatrix& a) {
  const auto cols = a.cols();
  if (a.rows() == 0) return identity(cols);
  const EchelonForm f = fraction_free_echelon(a, true);
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (auto c : f.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  const auto nullity = cols - static_cast<Eigen::Index>(f.pivot_cols.size());
  ExactMatrix basis = zeros(cols, nullity);
  Eigen::Index k = 0;
  for (Eigen::Index free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    basis(free, k) = 1;
    for (std::size_t r = 0; r < f.pivot_cols.size(); ++r) {
      const auto i = static_cast<Eigen::Index>(r);
      if (sgn(f.at(i, free)) == 0) continue;
      basis(f.pivot_cols[r], k) = -Rational(f.at(i, free)) / Rational(f.pivot_value);
    }
    ++k;
  }
  return basis;
}

ExactMatrix solve(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != a.cols()) throw SingularMatrix("solve needs a square matrix");
  if (b.rows() != a.rows()) throw DimensionMismatch("right-hand side row count differs");
  const auto n = a.rows();
  const EchelonForm f = fraction_free_echelon(hcat(a, b), true);
  if (static_cast<Eigen::Index>(f.pivot_cols.size()) < n ||
      (n > 0 && f.pivot_cols[static_cast<std::size_t>(n - 1)] != n - 1)) {
    throw SingularMatrix("matrix is rank deficient");
  }
  ExactMatrix x(n, b.cols());
  const Rational p(f.pivot_value);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) x(i, j) = Rational(f.at(i, n + j)) / p;
  return x;
}

ExactMatrix inverse(const ExactMatrix& a) { return solve(a, identity(a.rows())); }

std::vector<Eigen::Index> pivot_columns(const ExactMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  return fraction_free_echelon(a, false).pivot_cols;
}

ExactMatrix image_basis(const ExactMatrix& a) {
  const auto pivots = pivot_columns(a);
  ExactMatrix out(a.rows(), static_cast<Eigen::Index>(pivots.size()));
  for (std::size_t k = 0; k < pivots.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = a.col(pivots[k]);
  return out;
}

ExactMatrix column_echelon_basis(const ExactMatrix& a) {
  if (a.cols() == 0) return ExactMatrix(a.rows(), 0);
  const ExactMatrix t = a.transpose();
  const EchelonForm f = fraction_free_echelon(t, true);
  const auto r = static_cast<Eigen::Index>(f.pivot_cols.size());
  ExactMatrix out(a.rows(), r);
  const Rational p(f.pivot_value);
  for (Eigen::Index k = 0; k < r; ++k)
    for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, k) = Rational(f.at(k, i)) / p;
  return out;
}

namespace {
void require_same_ambient(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionMismatch("subspaces live in ambient spaces of dimension " + std::to_string(a.rows()) +
                            " and " + std::to_string(b.rows()));
  }
}
}  // namespace

bool subspace_equal(const ExactMatrix& a, const ExactMatrix& b) {
  require_same_ambient(a, b);
  const ExactMatrix ca = column_echelon_basis(a);
  const ExactMatrix cb = column_echelon_basis(b);
  return ca.cols() == cb.cols() && ca == cb;
}

bool subspace_contains(const ExactMatrix& outer, const ExactMatrix& inner) {
  require_same_ambient(outer, inner);
  return rank(hcat(outer, inner)) == rank(outer);
}

ExactMatrix subspace_sum(const ExactMatrix& a, const ExactMatrix& b) {
  require_same_ambient(a, b);
  return image_basis(hcat(a, b));
}

ExactMatrix subspace_intersection(const ExactMatrix& a, const ExactMatrix& b) {
  require_same_ambient(a, b);
  if (a.cols() == 0 || b.cols() == 0) return ExactMatrix(a.rows(), 0);
  const ExactMatrix n = null_space_basis(hcat(a, -b));
  const ExactMatrix combos = a * n.topRows(a.cols());
  return image_basis(combos);
}

bool is_direct_sum(const ExactMatrix& a, const ExactMatrix& b) {
  require_same_ambient(a, b);
  return rank(hcat(a, b)) == rank(a) + rank(b);
}

ExactMatrix hcat(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  if (a.rows() != b.rows()) throw DimensionMismatch("hcat row mismatch");
  ExactMatrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

ExactMatrix vcat(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.cols() != b.cols()) throw DimensionMismatch("vcat column mismatch");
  ExactMatrix out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

}  // namespace femforge

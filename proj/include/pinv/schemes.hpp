#pragma once

#include "pinv/hfs.hpp"

namespace pinv {

// The three pipelines below compute A+B, A+AB and AA+B without any scratch
// whose size grows with the matrices involved: every intermediate overwrites
// either the factored storage of A or the caller's b buffer, and the only
// fresh storage is the caller-provided output g. b and g must not alias.

namespace detail {

template <typename T>
void require_pair(const Matrix<T>& b, const Matrix<T>& g, index_t b_rows, index_t g_rows,
                  const char* op) {
  if (b.rows() != b_rows)
    throw ShapeError(std::string(op) + ": b has the wrong number of rows");
  if (g.rows() != g_rows || g.cols() != b.cols())
    throw ShapeError(std::string(op) + ": g must be " + std::to_string(g_rows) + " x " +
                     std::to_string(b.cols()));
  if (b.same_buffer(g)) throw ShapeError(std::string(op) + ": b and g must be distinct buffers");
}

// Lower triangle of L*L packed over the pivot block. Destroys the leading
// rows of L; the stored U entries are untouched.
template <typename T>
void store_gram_of_l(Factorization<T>& f) {
  Matrix<T>& s = f.storage;
  const auto& rho = f.rho;
  const auto& gam = f.gamma;
  const index_t m = f.rows();
  const index_t r = f.rank;
  for (index_t i = 0; i < r; ++i)
    for (index_t j = i; j < r; ++j) {
      T acc{};
      for (index_t k = j; k < m; ++k) acc += conjugate(s(rho[k], gam[j])) * s(rho[k], gam[i]);
      s(rho[j], gam[i]) = acc;
    }
}

// Lower triangle of U U* packed over the pivot block. Reads only the stored
// U entries (strictly right of each pivot column), so it is valid both on a
// raw factorization and after the L block has been overwritten.
template <typename T>
void store_gram_of_u(Factorization<T>& f) {
  Matrix<T>& s = f.storage;
  const auto& rho = f.rho;
  const auto& gam = f.gamma;
  const index_t n = f.cols();
  const index_t r = f.rank;
  for (index_t i = 0; i < r; ++i)
    for (index_t j = i; j < r; ++j) {
      T acc = (j == i) ? T{1} : conjugate(s(rho[i], gam[j]));
      for (index_t k = gam[j] + 1; k < n; ++k) acc += s(rho[j], k) * conjugate(s(rho[i], k));
      s(rho[j], gam[i]) = acc;
    }
}

}  // namespace detail

/// g = A+ B for a raw factorization of A (m x n) and b of shape m x p.
///
/// The pipeline overwrites the first rank permuted rows of b with its
/// intermediates (they end up holding (UU*)^-1 (L*L)^-1 L*PB) and destroys
/// the leading rows of L inside the factored storage, so f is consumed: its
/// state becomes Consumed and no further scheme may use it. Use the prepared
/// projectors when the operator must be applied repeatedly.
template <typename T>
void pinv_apply(Factorization<T>& f, Matrix<T>& b, Matrix<T>& g) {
  if (f.state != FactorState::Raw)
    throw WrongStateError("pinv_apply: factorization storage is no longer raw");
  detail::require_pair(b, g, f.rows(), f.cols(), "pinv_apply");

  const index_t m = f.rows();
  const index_t n = f.cols();
  const index_t r = f.rank;
  const index_t p = b.cols();
  f.state = FactorState::Consumed;
  if (r == 0) {
    g.fill(T{});
    return;
  }
  Matrix<T>& s = f.storage;
  const auto& rho = f.rho;
  const auto& gam = f.gamma;

  // C = L* P B, stored into the first r permuted rows of b.
  for (index_t i = 0; i < r; ++i)
    for (index_t q = 0; q < p; ++q) {
      T acc{};
      for (index_t k = i; k < m; ++k) acc += conjugate(s(rho[k], gam[i])) * b(rho[k], q);
      b(rho[i], q) = acc;
    }

  detail::store_gram_of_l(f);
  hfs_factor(f, HfsOrientation::Lower);
  hfs_solve(f, HfsOrientation::Lower, std::span<const index_t>(f.rho.data(), r), b);

  detail::store_gram_of_u(f);
  hfs_factor(f, HfsOrientation::Lower);
  hfs_solve(f, HfsOrientation::Lower, std::span<const index_t>(f.rho.data(), r), b);

  // g = U* F.
  for (index_t i = 0; i < n; ++i)
    for (index_t q = 0; q < p; ++q) {
      T acc{};
      for (index_t k = 0; k < r && gam[k] <= i; ++k)
        acc += b(rho[k], q) * (gam[k] == i ? T{1} : conjugate(s(rho[k], i)));
      g(i, q) = acc;
    }
}

/// A factorization advanced, in place, to one of the two reusable projector
/// preparations. Apply operations treat it as read-only, so one prepared
/// projector may serve concurrent applies on disjoint (b, g) pairs.
template <typename T>
struct PreparedProjector {
  Factorization<T> f;
};

/// Prepare A+A application: pack the lower triangle of U U* over the pivot
/// block and LDL*-factor it there. The stored U entries stay intact; L is
/// not needed for this projector and its leading rows are sacrificed.
template <typename T>
PreparedProjector<T> prepare_col_projector(Factorization<T> f) {
  if (f.state != FactorState::Raw)
    throw WrongStateError("prepare_col_projector: factorization storage is no longer raw");
  f.state = FactorState::Consumed;
  if (f.rank > 0) {
    detail::store_gram_of_u(f);
    hfs_factor(f, HfsOrientation::Lower);
  }
  f.state = FactorState::ColProjector;
  return PreparedProjector<T>{std::move(f)};
}

/// g = A+A b for b of shape n x p. Rows gamma[k] of b are overwritten with
/// the solve intermediates; the projector itself is read-only and reusable.
template <typename T>
void apply_col_projector(const PreparedProjector<T>& pp, Matrix<T>& b, Matrix<T>& g) {
  const Factorization<T>& f = pp.f;
  if (f.state != FactorState::ColProjector)
    throw WrongStateError("apply_col_projector: projector not prepared for A+A");
  detail::require_pair(b, g, f.cols(), f.cols(), "apply_col_projector");
  const index_t n = f.cols();
  const index_t r = f.rank;
  const index_t p = b.cols();
  if (r == 0) {
    g.fill(T{});
    return;
  }
  const Matrix<T>& s = f.storage;
  const auto& rho = f.rho;
  const auto& gam = f.gamma;

  for (index_t q = 0; q < p; ++q) {
    // C = U b, into the pivot-column rows of b.
    for (index_t i = 0; i < r; ++i) {
      T acc{};
      for (index_t j = gam[i] + 1; j < n; ++j) acc += s(rho[i], j) * b(j, q);
      b(gam[i], q) += acc;
    }
    // D = (U U*)^-1 C.
    for (index_t i = 0; i < r; ++i) {
      T acc{};
      for (index_t k = 0; k < i; ++k) acc += s(rho[i], gam[k]) * b(gam[k], q);
      b(gam[i], q) -= acc;
    }
    for (index_t i = 0; i < r; ++i) b(gam[i], q) /= s(rho[i], gam[i]);
    for (index_t i = r - 1; i >= 0; --i) {
      T acc{};
      for (index_t k = i + 1; k < r; ++k) acc += conjugate(s(rho[k], gam[i])) * b(gam[k], q);
      b(gam[i], q) -= acc;
    }
    // g = U* D.
    for (index_t i = 0; i < n; ++i) {
      T acc{};
      for (index_t k = 0; k < r && gam[k] <= i; ++k)
        acc += b(gam[k], q) * (gam[k] == i ? T{1} : conjugate(s(rho[k], i)));
      g(i, q) = acc;
    }
  }
}

/// Variant of apply_col_projector that expands the result back into b itself.
/// The output row sweep runs in descending index order so each gamma-indexed
/// source row is overwritten only once no later target needs it (gamma is
/// strictly increasing).
template <typename T>
void apply_col_projector_inplace(const PreparedProjector<T>& pp, Matrix<T>& b) {
  const Factorization<T>& f = pp.f;
  if (f.state != FactorState::ColProjector)
    throw WrongStateError("apply_col_projector_inplace: projector not prepared for A+A");
  if (b.rows() != f.cols())
    throw ShapeError("apply_col_projector_inplace: b has the wrong number of rows");
  const index_t n = f.cols();
  const index_t r = f.rank;
  const index_t p = b.cols();
  if (r == 0) {
    b.fill(T{});
    return;
  }
  const Matrix<T>& s = f.storage;
  const auto& rho = f.rho;
  const auto& gam = f.gamma;

  for (index_t q = 0; q < p; ++q) {
    for (index_t i = 0; i < r; ++i) {
      T acc{};
      for (index_t j = gam[i] + 1; j < n; ++j) acc += s(rho[i], j) * b(j, q);
      b(gam[i], q) += acc;
    }
    for (index_t i = 0; i < r; ++i) {
      T acc{};
      for (index_t k = 0; k < i; ++k) acc += s(rho[i], gam[k]) * b(gam[k], q);
      b(gam[i], q) -= acc;
    }
    for (index_t i = 0; i < r; ++i) b(gam[i], q) /= s(rho[i], gam[i]);
    for (index_t i = r - 1; i >= 0; --i) {
      T acc{};
      for (index_t k = i + 1; k < r; ++k) acc += conjugate(s(rho[k], gam[i])) * b(gam[k], q);
      b(gam[i], q) -= acc;
    }
    for (index_t i = n - 1; i >= 0; --i) {
      T acc{};
      for (index_t k = 0; k < r && gam[k] <= i; ++k)
        acc += b(gam[k], q) * (gam[k] == i ? T{1} : conjugate(s(rho[k], i)));
      b(i, q) = acc;
    }
  }
}

/// Prepare A A+ application. L is rescaled column-by-column to unit pivots,
/// the upper triangle of the pivot block (free once the unit pivots are
/// implicit) receives the Gram matrix of the rescaled L in transposed
/// layout, and that triangle is LDL*-factored in place. The rescaled
/// subdiagonal of L stays intact for the apply step.
template <typename T>
PreparedProjector<T> prepare_row_projector(Factorization<T> f) {
  if (f.state != FactorState::Raw)
    throw WrongStateError("prepare_row_projector: factorization storage is no longer raw");
  f.state = FactorState::Consumed;
  const index_t m = f.rows();
  const index_t r = f.rank;
  Matrix<T>& s = f.storage;
  const auto& rho = f.rho;
  const auto& gam = f.gamma;

  if (r > 0) {
    for (index_t i = 0; i < r; ++i) {
      const T pivot = s(rho[i], gam[i]);
      for (index_t k = i + 1; k < m; ++k) s(rho[k], gam[i]) /= pivot;
    }
    for (index_t i = 0; i < r; ++i)
      for (index_t j = i; j < r; ++j) {
        T acc{};
        for (index_t k = j; k < m; ++k) {
          const T a = (k == i) ? T{1} : s(rho[k], gam[i]);
          const T c = (k == j) ? T{1} : s(rho[k], gam[j]);
          acc += a * conjugate(c);
        }
        s(rho[i], gam[j]) = acc;
      }
    hfs_factor(f, HfsOrientation::UpperTransposed);
  }
  f.state = FactorState::RowProjector;
  return PreparedProjector<T>{std::move(f)};
}

/// g = A A+ b for b of shape m x p. Rows rho[k] of b are overwritten with
/// the solve intermediates; the projector itself is read-only and reusable.
template <typename T>
void apply_row_projector(const PreparedProjector<T>& pp, Matrix<T>& b, Matrix<T>& g) {
  const Factorization<T>& f = pp.f;
  if (f.state != FactorState::RowProjector)
    throw WrongStateError("apply_row_projector: projector not prepared for AA+");
  detail::require_pair(b, g, f.rows(), f.rows(), "apply_row_projector");
  const index_t m = f.rows();
  const index_t r = f.rank;
  const index_t p = b.cols();
  if (r == 0) {
    g.fill(T{});
    return;
  }
  const Matrix<T>& s = f.storage;
  const auto& rho = f.rho;
  const auto& gam = f.gamma;

  for (index_t q = 0; q < p; ++q) {
    // C = L* P b with the rescaled unit-pivot L.
    for (index_t i = 0; i < r; ++i) {
      T acc{};
      for (index_t k = i + 1; k < m; ++k) acc += conjugate(s(rho[k], gam[i])) * b(rho[k], q);
      b(rho[i], q) += acc;
    }
    // D = (L*L)^-1 C via the transposed-layout factor.
    for (index_t i = 0; i < r; ++i) {
      T acc{};
      for (index_t k = 0; k < i; ++k) acc += s(rho[k], gam[i]) * b(rho[k], q);
      b(rho[i], q) -= acc;
    }
    for (index_t i = 0; i < r; ++i) b(rho[i], q) /= s(rho[i], gam[i]);
    for (index_t i = r - 1; i >= 0; --i) {
      T acc{};
      for (index_t k = i + 1; k < r; ++k) acc += conjugate(s(rho[i], gam[k])) * b(rho[k], q);
      b(rho[i], q) -= acc;
    }
    // g = P* L D.
    for (index_t i = 0; i < m; ++i) {
      T acc{};
      const index_t kmax = std::min(i, r - 1);
      for (index_t k = 0; k <= kmax; ++k)
        acc += b(rho[k], q) * (k == i ? T{1} : s(rho[i], gam[k]));
      g(rho[i], q) = acc;
    }
  }
}

/// In-place expansion variant of apply_row_projector; see the column version.
template <typename T>
void apply_row_projector_inplace(const PreparedProjector<T>& pp, Matrix<T>& b) {
  const Factorization<T>& f = pp.f;
  if (f.state != FactorState::RowProjector)
    throw WrongStateError("apply_row_projector_inplace: projector not prepared for AA+");
  if (b.rows() != f.rows())
    throw ShapeError("apply_row_projector_inplace: b has the wrong number of rows");
  const index_t m = f.rows();
  const index_t r = f.rank;
  const index_t p = b.cols();
  if (r == 0) {
    b.fill(T{});
    return;
  }
  const Matrix<T>& s = f.storage;
  const auto& rho = f.rho;
  const auto& gam = f.gamma;

  for (index_t q = 0; q < p; ++q) {
    for (index_t i = 0; i < r; ++i) {
      T acc{};
      for (index_t k = i + 1; k < m; ++k) acc += conjugate(s(rho[k], gam[i])) * b(rho[k], q);
      b(rho[i], q) += acc;
    }
    for (index_t i = 0; i < r; ++i) {
      T acc{};
      for (index_t k = 0; k < i; ++k) acc += s(rho[k], gam[i]) * b(rho[k], q);
      b(rho[i], q) -= acc;
    }
    for (index_t i = 0; i < r; ++i) b(rho[i], q) /= s(rho[i], gam[i]);
    for (index_t i = r - 1; i >= 0; --i) {
      T acc{};
      for (index_t k = i + 1; k < r; ++k) acc += conjugate(s(rho[i], gam[k])) * b(rho[k], q);
      b(rho[i], q) -= acc;
    }
    for (index_t i = m - 1; i >= 0; --i) {
      T acc{};
      const index_t kmax = std::min(i, r - 1);
      for (index_t k = 0; k <= kmax; ++k)
        acc += b(rho[k], q) * (k == i ? T{1} : s(rho[i], gam[k]));
      b(rho[i], q) = acc;
    }
  }
}

}  // namespace pinv

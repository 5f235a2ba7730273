#include "hahnlab/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <stdexcept>

#include "hahnlab/errors.hpp"

namespace hahnlab {
namespace {

using IntMat = std::vector<std::vector<mpz_class>>;  // row-major

IntMat identity(int n) {
  IntMat m(n, std::vector<mpz_class>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// Diagonalize A by unimodular row/column operations: U*A*V = D.  The diagonal
// is not normalized to the divisibility chain; for solving and index products
// that is irrelevant.  Returns the rank; diagonal entries are D[i][i].
int diagonalize(IntMat& a, IntMat& u, IntMat& v) {
  int m = static_cast<int>(a.size());
  int n = m ? static_cast<int>(a[0].size()) : 0;
  u = identity(m);
  v = identity(n);
  int t = 0;
  for (; t < m && t < n; ++t) {
    // Pivot: smallest nonzero |entry| in the remaining block.
    int pi = -1, pj = -1;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j)
        if (a[i][j] != 0 && (pi < 0 || abs(a[i][j]) < abs(a[pi][pj]))) pi = i, pj = j;
    if (pi < 0) break;
    std::swap(a[t], a[pi]);
    std::swap(u[t], u[pi]);
    for (int i = 0; i < m; ++i) std::swap(a[i][t], a[i][pj]);
    for (int i = 0; i < n; ++i) std::swap(v[i][t], v[i][pj]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        mpz_class q = a[i][t] / a[t][t];  // truncated: |remainder| < |pivot|
        for (int j = 0; j < n; ++j) a[i][j] -= q * a[t][j];
        for (int j = 0; j < m; ++j) u[i][j] -= q * u[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          std::swap(u[t], u[i]);
          clean = false;
        }
      }
      for (int j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        mpz_class q = a[t][j] / a[t][t];
        for (int i = 0; i < m; ++i) a[i][j] -= q * a[i][t];
        for (int i = 0; i < n; ++i) v[i][j] -= q * v[i][t];
        if (a[t][j] != 0) {
          for (int i = 0; i < m; ++i) std::swap(a[i][t], a[i][j]);
          for (int i = 0; i < n; ++i) std::swap(v[i][t], v[i][j]);
          clean = false;
        }
      }
    }
  }
  return t;
}

// Integer solution of A z = b, if one exists.
std::optional<std::vector<mpz_class>> solve_integer(IntMat a, std::vector<mpz_class> b) {
  int m = static_cast<int>(a.size());
  int n = m ? static_cast<int>(a[0].size()) : 0;
  IntMat u, v;
  int rank = diagonalize(a, u, v);
  // c = U b; then D y = c with y_i = c_i / d_i.
  std::vector<mpz_class> c(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) c[i] += u[i][j] * b[j];
  std::vector<mpz_class> y(n, 0);
  for (int i = 0; i < m; ++i) {
    if (i < rank) {
      if (c[i] % a[i][i] != 0) return std::nullopt;
      y[i] = c[i] / a[i][i];
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  std::vector<mpz_class> z(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z[i] += v[i][j] * y[j];
  return z;
}

// Scale rows to clear denominators, mapping exponent columns into an integer
// matrix.  One common scale per row keeps lattice indices intact.
struct CoordSystem {
  std::vector<int> symbols;  // ambient symbol index per row

  explicit CoordSystem(const std::vector<const Exponent*>& vecs) {
    for (const Exponent* e : vecs)
      for (const auto& [i, q] : e->coords())
        if (std::find(symbols.begin(), symbols.end(), i) == symbols.end()) symbols.push_back(i);
    std::sort(symbols.begin(), symbols.end());
  }

  std::vector<mpq_class> rational_column(const Exponent& e) const {
    std::vector<mpq_class> col(symbols.size(), 0);
    for (const auto& [i, q] : e.coords()) {
      auto it = std::lower_bound(symbols.begin(), symbols.end(), i);
      col[it - symbols.begin()] = q;
    }
    return col;
  }
};

// Integer matrix whose columns are the given exponents, with per-row
// denominator scaling shared across all columns.
IntMat integer_matrix(const CoordSystem& sys, const std::vector<std::vector<mpq_class>>& cols) {
  int m = static_cast<int>(sys.symbols.size());
  int n = static_cast<int>(cols.size());
  IntMat a(m, std::vector<mpz_class>(n, 0));
  for (int i = 0; i < m; ++i) {
    mpz_class scale = 1;
    for (int j = 0; j < n; ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), cols[j][i].get_den().get_mpz_t());
    for (int j = 0; j < n; ++j) {
      mpq_class scaled = cols[j][i] * scale;
      assert(scaled.get_den() == 1);
      a[i][j] = scaled.get_num();
    }
  }
  return a;
}

// Independent columns spanning the same column lattice, via integer column
// reduction (column operations are unimodular).
IntMat column_basis(IntMat a) {
  int m = static_cast<int>(a.size());
  int n = m ? static_cast<int>(a[0].size()) : 0;
  int c = 0;
  for (int r = 0; r < m && c < n; ++r) {
    while (true) {
      int best = -1;
      for (int j = c; j < n; ++j)
        if (a[r][j] != 0 && (best < 0 || abs(a[r][j]) < abs(a[r][best]))) best = j;
      if (best < 0) break;
      for (int i = 0; i < m; ++i) std::swap(a[i][c], a[i][best]);
      bool done = true;
      for (int j = c + 1; j < n; ++j) {
        if (a[r][j] == 0) continue;
        mpz_class q = a[r][j] / a[r][c];
        for (int i = 0; i < m; ++i) a[i][j] -= q * a[i][c];
        if (a[r][j] != 0) done = false;
      }
      if (done) {
        ++c;
        break;
      }
    }
  }
  // Keep the first c columns (the rest are zero).
  IntMat basis(m, std::vector<mpz_class>(c));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < c; ++j) basis[i][j] = a[i][j];
  return basis;
}

// Unique rational solution of B z = b for a full-column-rank B, if any.
std::optional<std::vector<mpq_class>> solve_rational(const IntMat& bmat,
                                                     std::vector<mpq_class> rhs) {
  int m = static_cast<int>(bmat.size());
  int n = m ? static_cast<int>(bmat[0].size()) : 0;
  std::vector<std::vector<mpq_class>> a(m, std::vector<mpq_class>(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = mpq_class(bmat[i][j]);
  std::vector<int> pivot_row(n, -1);
  int row = 0;
  for (int col = 0; col < n; ++col) {
    int p = -1;
    for (int i = row; i < m; ++i)
      if (a[i][col] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[row]);
    std::swap(rhs[p], rhs[row]);
    mpq_class inv = 1 / a[row][col];
    for (int j = col; j < n; ++j) a[row][j] *= inv;
    rhs[row] *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == row || a[i][col] == 0) continue;
      mpq_class f = a[i][col];
      for (int j = col; j < n; ++j) a[i][j] -= f * a[row][j];
      rhs[i] -= f * rhs[row];
    }
    pivot_row[col] = row;
    ++row;
  }
  std::vector<mpq_class> z(n, 0);
  for (int col = 0; col < n; ++col) {
    if (pivot_row[col] < 0) return std::nullopt;  // full column rank expected
    z[col] = rhs[pivot_row[col]];
  }
  for (int i = row; i < m; ++i)
    if (rhs[i] != 0) return std::nullopt;
  return z;
}

}  // namespace

ValueLattice::ValueLattice(BasisPtr ctx, std::vector<Exponent> generators)
    : ctx_(std::move(ctx)), generators_(std::move(generators)) {
  for (const auto& g : generators_)
    if (g.ctx() != ctx_) throw ContextMismatchError("lattice generator from different context");
}

bool ValueLattice::contains(const Exponent& x) const {
  if (x.ctx() != ctx_) throw ContextMismatchError("lattice membership across contexts");
  if (x.is_zero()) return true;
  std::vector<const Exponent*> all;
  for (const auto& g : generators_) all.push_back(&g);
  all.push_back(&x);
  CoordSystem sys(all);
  std::vector<std::vector<mpq_class>> cols;
  for (const auto& g : generators_) cols.push_back(sys.rational_column(g));
  cols.push_back(sys.rational_column(x));
  IntMat a = integer_matrix(sys, cols);
  int m = static_cast<int>(a.size());
  std::vector<mpz_class> b(m);
  for (int i = 0; i < m; ++i) {
    b[i] = a[i].back();
    a[i].pop_back();
  }
  return solve_integer(std::move(a), std::move(b)).has_value();
}

std::optional<mpz_class> ValueLattice::index_over(const ValueLattice& sub) const {
  if (sub.ctx_ != ctx_) throw ContextMismatchError("lattice index across contexts");
  std::vector<const Exponent*> all;
  for (const auto& g : generators_) all.push_back(&g);
  for (const auto& g : sub.generators_) all.push_back(&g);
  CoordSystem sys(all);
  std::vector<std::vector<mpq_class>> big_cols, sub_cols;
  for (const auto& g : generators_) big_cols.push_back(sys.rational_column(g));
  for (const auto& g : sub.generators_) sub_cols.push_back(sys.rational_column(g));
  // One shared integer coordinate system for both generator families.
  std::vector<std::vector<mpq_class>> joint = big_cols;
  joint.insert(joint.end(), sub_cols.begin(), sub_cols.end());
  IntMat a = integer_matrix(sys, joint);
  int m = static_cast<int>(a.size());
  int nb = static_cast<int>(big_cols.size());
  int ns = static_cast<int>(sub_cols.size());
  IntMat big(m, std::vector<mpz_class>(nb)), small(m, std::vector<mpz_class>(ns));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < nb + ns; ++j)
      (j < nb ? big[i][j] : small[i][j - nb]) = a[i][j];

  IntMat basis = column_basis(big);
  int rank = basis.empty() ? 0 : static_cast<int>(basis[0].size());
  if (rank == 0) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < ns; ++j)
        if (small[i][j] != 0) throw std::invalid_argument("index_over: not a sublattice");
    return mpz_class(1);
  }
  // Express each sub generator in the basis; integrality is exactly
  // containment because the basis is independent.
  IntMat coeffs(rank, std::vector<mpz_class>(ns));
  for (int j = 0; j < ns; ++j) {
    std::vector<mpq_class> rhs(m);
    for (int i = 0; i < m; ++i) rhs[i] = mpq_class(small[i][j]);
    auto z = solve_rational(basis, std::move(rhs));
    if (!z) throw std::invalid_argument("index_over: not a sublattice");
    for (int i = 0; i < rank; ++i) {
      if ((*z)[i].get_den() != 1) throw std::invalid_argument("index_over: not a sublattice");
      coeffs[i][j] = (*z)[i].get_num();
    }
  }
  IntMat u, v;
  int crank = diagonalize(coeffs, u, v);
  if (crank < rank) return std::nullopt;  // sub has smaller rank: infinite index
  mpz_class idx = 1;
  for (int i = 0; i < rank; ++i) idx *= abs(coeffs[i][i]);
  return idx;
}

}  // namespace hahnlab

#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vosa/scalar.hpp"

namespace vosa {

/// Sparse linear combination over an ordered key space. Zero coefficients are
/// never stored.
template <class Key>
class SparseVector {
 public:
  using key_type = Key;
  using map_type = std::map<Key, Scalar>;
  using const_iterator = typename map_type::const_iterator;

  SparseVector() = default;
  SparseVector(const Key& k, const Scalar& c = 1) { add(k, c); }

  void add(const Key& k, const Scalar& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  void add_scaled(const SparseVector& o, const Scalar& c) {
    if (sgn(c) == 0) return;
    for (const auto& [k, v] : o.terms_) add(k, v * c);
  }

  SparseVector& operator+=(const SparseVector& o) {
    for (const auto& [k, v] : o.terms_) add(k, v);
    return *this;
  }
  SparseVector& operator-=(const SparseVector& o) {
    for (const auto& [k, v] : o.terms_) add(k, -v);
    return *this;
  }
  SparseVector& operator*=(const Scalar& c) {
    if (sgn(c) == 0) {
      terms_.clear();
    } else {
      for (auto& [k, v] : terms_) v *= c;
    }
    return *this;
  }

  friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
  friend SparseVector operator-(SparseVector a, const SparseVector& b) { return a -= b; }
  friend SparseVector operator*(SparseVector a, const Scalar& c) { return a *= c; }
  friend SparseVector operator*(const Scalar& c, SparseVector a) { return a *= c; }
  SparseVector operator-() const { return *this * Scalar(-1); }

  Scalar coeff(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const_iterator begin() const { return terms_.begin(); }
  const_iterator end() const { return terms_.end(); }
  const map_type& terms() const { return terms_; }
  void clear() { terms_.clear(); }

  friend bool operator==(const SparseVector& a, const SparseVector& b) {
    return a.terms_ == b.terms_;
  }

 private:
  map_type terms_;
};

/// Incremental row-echelon form over integer column indices. Rows are kept as
/// primitive integer vectors (content 1, positive pivot); elimination is
/// fraction-free: r <- (p/g) r - (c/g) pivot_row, followed by content removal.
class RowEchelon {
 public:
  using IntRow = std::vector<std::pair<int, Integer>>;

  /// Reduces the row against the current pivots and stores it if independent.
  bool insert(const SparseVector<int>& row) {
    IntRow r = to_integer_row(row).first;
    while (!r.empty()) {
      auto it = pivots_.find(r.front().first);
      if (it == pivots_.end()) break;
      r = eliminate(r, 0, it->second).first;
      Integer g = 0;
      for (const auto& e : r) g = gcd(g, e.second);
      if (g > 1)
        for (auto& e : r) e.second /= g;
    }
    if (r.empty()) return false;
    if (r.front().second < 0)
      for (auto& e : r) e.second = -e.second;
    pivots_.emplace(r.front().first, std::move(r));
    return true;
  }

  std::size_t rank() const { return pivots_.size(); }
  bool is_pivot(int col) const { return pivots_.count(col) != 0; }
  const std::map<int, IntRow>& pivot_rows() const { return pivots_; }

  /// Full reduction: the result has no entry in any pivot column.
  SparseVector<int> reduce(const SparseVector<int>& v) const {
    auto [r, den] = to_integer_row(v);
    int last = INT_MIN;
    while (true) {
      std::size_t pos = 0;
      for (; pos < r.size(); ++pos)
        if (r[pos].first > last && pivots_.count(r[pos].first)) break;
      if (pos == r.size()) break;
      last = r[pos].first;
      auto [nr, mult] = eliminate(r, pos, pivots_.at(last));
      r = std::move(nr);
      den *= mult;
      // keep r / den in lowest terms
      Integer g = den;
      for (const auto& e : r) g = gcd(g, e.second);
      if (g > 1) {
        for (auto& e : r) e.second /= g;
        den /= g;
      }
    }
    SparseVector<int> out;
    for (const auto& [c, x] : r) {
      Scalar q(x, den);
      q.canonicalize();
      out.add(c, q);
    }
    return out;
  }

  /// Reduced row-echelon form, pivot entries equal to 1, ordered by pivot
  /// column. Unique for a given column order.
  std::vector<SparseVector<int>> reduced_rows() const {
    std::map<int, SparseVector<int>> done;
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
      SparseVector<int> row;
      for (const auto& [c, x] : it->second) row.add(c, Scalar(x));
      // back substitution against pivots to the right
      for (const auto& [pc, prow] : done) {
        Scalar f = row.coeff(pc);
        if (sgn(f) != 0) row.add_scaled(prow, -f);
      }
      row *= Scalar(1) / row.coeff(it->first);
      done.emplace(it->first, std::move(row));
    }
    std::vector<SparseVector<int>> out;
    for (auto& [c, r] : done) out.push_back(std::move(r));
    return out;
  }

 private:
  static std::pair<IntRow, Integer> to_integer_row(const SparseVector<int>& v) {
    Integer den = 1;
    for (const auto& [c, x] : v) den = lcm(den, x.get_den());
    IntRow r;
    r.reserve(v.size());
    for (const auto& [c, x] : v) r.emplace_back(c, x.get_num() * (den / x.get_den()));
    Integer g = den;
    for (const auto& e : r) g = gcd(g, e.second);
    if (g > 1) {
      for (auto& e : r) e.second /= g;
      den /= g;
    }
    return {std::move(r), den};
  }

  // Eliminates entry r[pos] with pivot row p; returns the new row and the
  // factor applied to r.
  static std::pair<IntRow, Integer> eliminate(const IntRow& r, std::size_t pos,
                                              const IntRow& p) {
    const Integer& a = p.front().second;
    const Integer& b = r[pos].second;
    Integer g = gcd(a, b);
    Integer fa = a / g, fb = b / g;
    IntRow out;
    out.reserve(r.size() + p.size());
    std::size_t i = 0, j = 0;
    while (i < r.size() || j < p.size()) {
      if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
        out.emplace_back(r[i].first, fa * r[i].second);
        ++i;
      } else if (i == r.size() || p[j].first < r[i].first) {
        out.emplace_back(p[j].first, -fb * p[j].second);
        ++j;
      } else {
        Integer x = fa * r[i].second - fb * p[j].second;
        if (x != 0) out.emplace_back(r[i].first, std::move(x));
        ++i;
        ++j;
      }
    }
    return {std::move(out), fa};
  }

  std::map<int, IntRow> pivots_;
};

/// Result of rank_and_basis: an echelon spanning set for the row space and the
/// keys completing the pivots to a basis of the ambient space.
template <class Key>
struct RankBasis {
  std::size_t rank = 0;
  std::vector<SparseVector<Key>> echelon;
  std::vector<Key> complement;
};

/// Exact rank over Q. Columns are ordered by `ambient` (pivots are chosen as
/// early as possible in that order); keys outside `ambient` are appended.
template <class Key>
RankBasis<Key> rank_and_basis(const std::vector<SparseVector<Key>>& rows,
                              std::vector<Key> ambient = {}) {
  std::set<Key> seen(ambient.begin(), ambient.end());
  for (const auto& r : rows)
    for (const auto& [k, c] : r)
      if (seen.insert(k).second) ambient.push_back(k);
  std::map<Key, int> index;
  for (std::size_t i = 0; i < ambient.size(); ++i) index.emplace(ambient[i], static_cast<int>(i));

  RowEchelon ech;
  for (const auto& r : rows) {
    SparseVector<int> ir;
    for (const auto& [k, c] : r) ir.add(index.at(k), c);
    ech.insert(ir);
  }
  RankBasis<Key> out;
  out.rank = ech.rank();
  for (const auto& row : ech.reduced_rows()) {
    SparseVector<Key> kr;
    for (const auto& [c, x] : row) kr.add(ambient[c], x);
    out.echelon.push_back(std::move(kr));
  }
  for (std::size_t i = 0; i < ambient.size(); ++i)
    if (!ech.is_pivot(static_cast<int>(i))) out.complement.push_back(ambient[i]);
  return out;
}

// Small dense helpers for Omega spaces, centers and representation matrices.

using Matrix = std::vector<std::vector<Scalar>>;

inline Matrix zero_matrix(std::size_t rows, std::size_t cols) {
  return Matrix(rows, std::vector<Scalar>(cols, Scalar(0)));
}

inline Matrix identity_matrix(std::size_t n) {
  Matrix m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.empty()) return {};
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Matrix c = zero_matrix(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (sgn(a[i][t]) == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

/// In-place reduced row echelon form; returns pivot columns.
inline std::vector<std::size_t> rref(Matrix& m) {
  std::vector<std::size_t> piv;
  if (m.empty()) return piv;
  std::size_t rows = m.size(), cols = m[0].size(), r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Scalar inv = Scalar(1) / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      Scalar f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

inline std::size_t rank(Matrix m) { return rref(m).size(); }

/// Basis of {x : A x = 0}; `cols` is needed when A has no rows.
inline std::vector<std::vector<Scalar>> nullspace(Matrix a, std::size_t cols) {
  auto piv = rref(a);
  std::vector<bool> is_piv(cols, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::vector<Scalar>> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<Scalar> x(cols, Scalar(0));
    x[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = -a[i][f];
    out.push_back(std::move(x));
  }
  return out;
}

/// Solves A x = b exactly; nullopt when inconsistent.
inline std::optional<std::vector<Scalar>> solve(const Matrix& a, const std::vector<Scalar>& b) {
  std::size_t rows = a.size();
  std::size_t cols = rows ? a[0].size() : 0;
  Matrix aug = a;
  for (std::size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
  auto piv = rref(aug);
  std::vector<Scalar> x(cols, Scalar(0));
  for (std::size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] == cols) return std::nullopt;
    x[piv[i]] = aug[i][cols];
  }
  return x;
}

}  // namespace vosa

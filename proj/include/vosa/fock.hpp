#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vosa/linalg.hpp"
#include "vosa/scalar.hpp"

namespace vosa {

/// One fermion mode x(n). Ordered by mode first, then generator.
struct Factor {
  FracIndex mode;
  int gen = 0;

  friend bool operator==(const Factor&, const Factor&) = default;
  friend std::strong_ordering operator<=>(const Factor& a, const Factor& b) {
    if (auto c = a.mode <=> b.mode; c != 0) return c;
    return a.gen <=> b.gen;
  }
};

/// Canonically ordered product of creation modes applied to the vacuum.
using Monomial = std::vector<Factor>;
using State = SparseVector<Monomial>;

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (const auto& f : m) {
      h ^= std::hash<FracIndex>{}(f.mode) + static_cast<std::size_t>(f.gen) * 0x9e3779b97f4a7c15ull;
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

inline State vacuum() { return State(Monomial{}); }

inline FracIndex weight(const Monomial& m) {
  FracIndex w;
  for (const auto& f : m) w -= f.mode;
  return w;
}

inline bool is_odd(const Monomial& m) { return m.size() % 2 == 1; }

/// Sorts factors into canonical order. Returns the sign of the sorting
/// permutation, or nullopt when a mode repeats (fermion square).
inline std::optional<std::pair<Monomial, int>> normalize(Monomial factors) {
  int sign = 1;
  // insertion sort; each adjacent swap is one transposition
  for (std::size_t i = 1; i < factors.size(); ++i) {
    for (std::size_t j = i; j > 0; --j) {
      auto c = factors[j - 1] <=> factors[j];
      if (c == 0) return std::nullopt;
      if (c < 0) break;
      std::swap(factors[j - 1], factors[j]);
      sign = -sign;
    }
  }
  return std::make_pair(std::move(factors), sign);
}

/// The finite-dimensional space H of fermion generators with its symmetric
/// nondegenerate form.
class FermionSpace {
 public:
  FermionSpace(std::vector<std::string> labels, Matrix gram)
      : labels_(std::move(labels)), gram_(std::move(gram)) {
    std::size_t n = labels_.size();
    if (n == 0) throw std::invalid_argument("FermionSpace: no generators");
    if (gram_.size() != n) throw std::invalid_argument("FermionSpace: Gram size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      if (gram_[i].size() != n) throw std::invalid_argument("FermionSpace: Gram size mismatch");
      for (std::size_t j = 0; j < n; ++j)
        if (gram_[i][j] != gram_[j][i])
          throw std::invalid_argument("FermionSpace: form is not symmetric");
    }
    Matrix aug = gram_;
    for (std::size_t i = 0; i < n; ++i) {
      aug[i].resize(2 * n, Scalar(0));
      aug[i][n + i] = 1;
    }
    auto piv = rref(aug);
    if (piv.size() != n || piv.back() >= n)
      throw std::invalid_argument("FermionSpace: form is degenerate");
    inverse_ = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) inverse_[i][j] = aug[i][n + j];
    partners_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (sgn(gram_[i][j]) != 0) partners_[i].emplace_back(static_cast<int>(j), gram_[i][j]);
  }

  /// a_1..a_l with (a_i, a_j) = delta_ij.
  static FermionSpace orthonormal(int l) {
    std::vector<std::string> labels;
    for (int i = 1; i <= l; ++i) labels.push_back("a" + std::to_string(i));
    return FermionSpace(labels, identity_matrix(l));
  }

  /// b_1..b_k, b_1*..b_k* with (b_i, b_j*) = delta_ij, plus e with (e,e) = 2
  /// when l is odd.
  static FermionSpace polarized(int l) {
    int k = l / 2;
    std::vector<std::string> labels;
    for (int i = 1; i <= k; ++i) labels.push_back("b" + std::to_string(i));
    for (int i = 1; i <= k; ++i) labels.push_back("b" + std::to_string(i) + "*");
    if (l % 2) labels.push_back("e");
    Matrix g = zero_matrix(l, l);
    for (int i = 0; i < k; ++i) g[i][k + i] = g[k + i][i] = 1;
    if (l % 2) g[l - 1][l - 1] = 2;
    return FermionSpace(labels, g);
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Scalar& pairing(int i, int j) const { return gram_[i][j]; }
  const Matrix& gram() const { return gram_; }
  const Matrix& inverse_gram() const { return inverse_; }
  const std::vector<std::pair<int, Scalar>>& partners(int i) const { return partners_[i]; }

  int find(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
      if (labels_[i] == label) return i;
    return -1;
  }

 private:
  std::vector<std::string> labels_;
  Matrix gram_;
  Matrix inverse_;
  std::vector<std::vector<std::pair<int, Scalar>>> partners_;
};

/// How a mode x(0) acts when 0 lies in the support of x.
enum class ZeroMode { Annihilation, Creation, CliffordSplit };

inline const char* to_string(ZeroMode z) {
  switch (z) {
    case ZeroMode::Annihilation: return "annihilation";
    case ZeroMode::Creation: return "creation";
    case ZeroMode::CliffordSplit: return "clifford-split";
  }
  return "?";
}

/// Fock representation of the Clifford algebra on H with modes x(n),
/// n in offset(x) + Z, and [x(m), y(n)]_+ = (x,y) delta_{m+n,0}.
///
/// Zero modes: annihilation zero modes act as sum_y (x,y) d/dy(0), creation
/// zero modes as left multiplication, and a clifford-split x(0) as
/// x(0) + ((x,x)/2) d/dx(0), so x(0)^2 = (x,x)/2.
class Sector {
 public:
  Sector(std::shared_ptr<const FermionSpace> space, std::vector<FracIndex> offsets,
         std::vector<ZeroMode> zero = {})
      : space_(std::move(space)), offsets_(std::move(offsets)), zero_(std::move(zero)) {
    int n = space_->size();
    if (static_cast<int>(offsets_.size()) != n)
      throw std::invalid_argument("Sector: one offset per generator required");
    if (zero_.empty()) zero_.assign(n, ZeroMode::Annihilation);
    if (static_cast<int>(zero_.size()) != n)
      throw std::invalid_argument("Sector: one zero-mode policy per generator required");
    for (auto& r : offsets_) r = r.frac();
    validate();
  }

  /// The vertex superalgebra itself: all modes in Z + 1/2.
  static Sector neveu_schwarz(std::shared_ptr<const FermionSpace> space) {
    return Sector(space, std::vector<FracIndex>(space->size(), kHalf));
  }

  const FermionSpace& space() const { return *space_; }
  std::shared_ptr<const FermionSpace> space_ptr() const { return space_; }
  int size() const { return space_->size(); }
  const FracIndex& offset(int gen) const { return offsets_.at(gen); }
  ZeroMode zero_mode(int gen) const { return zero_.at(gen); }

  bool in_support(int gen, const FracIndex& n) const { return (n - offsets_.at(gen)).is_integer(); }

  /// Whether x(n) appears as a factor of basis monomials.
  bool is_creation(int gen, const FracIndex& n) const {
    if (n.is_zero()) return zero_[gen] != ZeroMode::Annihilation;
    return n < FracIndex(0);
  }

  /// Applies x(n) to a state.
  State apply(int gen, const FracIndex& n, const State& w) const {
    if (!in_support(gen, n))
      throw std::invalid_argument("mode " + space_->label(gen) + "(" + n.str() +
                                  ") outside sector support");
    State out;
    bool zero = n.is_zero();
    bool create = is_creation(gen, n);
    bool derive = !create || (zero && zero_[gen] == ZeroMode::CliffordSplit);
    Scalar dscale = (zero && zero_[gen] == ZeroMode::CliffordSplit) ? Scalar(1, 2) : Scalar(1);
    for (const auto& [m, c] : w) {
      if (create) multiply_into(out, gen, n, m, c);
      if (derive) derive_into(out, gen, n, m, c * dscale);
    }
    return out;
  }

  /// Applies a word of modes right to left (last factor acts first).
  State apply_word(const Monomial& word, const State& w) const {
    State s = w;
    for (auto it = word.rbegin(); it != word.rend(); ++it) s = apply(it->gen, it->mode, s);
    return s;
  }

  /// The canonical monomial as a state of this sector (validated).
  State monomial_state(const Monomial& word) const { return apply_word(word, vacuum()); }

  /// Creation factors of weight at most W in canonical order.
  std::vector<Factor> creation_factors(const FracIndex& max_weight) const {
    std::vector<Factor> fs;
    for (int g = 0; g < size(); ++g) {
      FracIndex n = offsets_[g];
      if (n.is_zero() && zero_[g] == ZeroMode::Annihilation) n -= FracIndex(1);
      while (-n <= max_weight) {
        if (n <= FracIndex(0)) fs.push_back({n, g});
        n -= FracIndex(1);
      }
    }
    std::sort(fs.begin(), fs.end());
    return fs;
  }

  /// All canonical monomials of weight <= W, ordered by weight and then
  /// lexicographically.
  std::vector<Monomial> enumerate_basis(const FracIndex& max_weight) const {
    if (max_weight < FracIndex(0)) throw std::invalid_argument("enumerate_basis: negative weight");
    auto fs = creation_factors(max_weight);
    std::vector<Monomial> out;
    Monomial cur;
    std::function<void(std::size_t, FracIndex)> rec = [&](std::size_t start, FracIndex w) {
      out.push_back(cur);
      for (std::size_t i = start; i < fs.size(); ++i) {
        FracIndex nw = w - fs[i].mode;
        if (nw > max_weight) continue;
        cur.push_back(fs[i]);
        rec(i + 1, nw);
        cur.pop_back();
      }
    };
    rec(0, FracIndex(0));
    std::stable_sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
      auto wa = weight(a), wb = weight(b);
      if (wa != wb) return wa < wb;
      return a < b;
    });
    return out;
  }

  /// Graded dimensions in steps of `step` (default 1/2) up to W.
  std::vector<std::pair<FracIndex, std::size_t>> graded_dims(const FracIndex& max_weight,
                                                             const FracIndex& step = kHalf) const {
    std::vector<std::pair<FracIndex, std::size_t>> dims;
    for (FracIndex w; w <= max_weight; w += step) dims.emplace_back(w, 0);
    for (const auto& m : enumerate_basis(max_weight)) {
      auto w = weight(m);
      for (auto& [d, c] : dims)
        if (d == w) ++c;
    }
    return dims;
  }

  /// Stable text description used for cache keys and reports.
  std::string describe() const {
    std::ostringstream os;
    os << "sector[";
    for (int g = 0; g < size(); ++g) {
      os << space_->label(g) << ":" << offsets_[g];
      if (offsets_[g].is_zero()) os << ":" << to_string(zero_[g]);
      os << ";";
    }
    os << "gram:";
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j) os << space_->pairing(i, j).get_str() << ",";
    os << "]";
    return os.str();
  }

  std::string format(const Monomial& m) const {
    if (m.empty()) return "1";
    std::string s;
    for (const auto& f : m) s += space_->label(f.gen) + "(" + f.mode.str() + ")";
    return s;
  }

  std::string format(const State& s) const {
    if (s.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : s) {
      if (!out.empty()) out += " + ";
      out += "(" + c.get_str() + ")" + format(m);
    }
    return out;
  }

 private:
  void validate() const {
    int n = size();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (sgn(space_->pairing(i, j)) == 0) continue;
        if (!(offsets_[i] + offsets_[j]).is_integer())
          throw std::invalid_argument("Sector: paired generators " + space_->label(i) + ", " +
                                      space_->label(j) + " have incompatible mode supports");
      }
    // zero-mode Clifford relations must be reproduced by the chosen policies
    for (int i = 0; i < n; ++i) {
      if (!offsets_[i].is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        if (!offsets_[j].is_zero()) continue;
        const Scalar& p = space_->pairing(i, j);
        ZeroMode a = zero_[i], b = zero_[j];
        bool ok = true;
        if (a == ZeroMode::CliffordSplit || b == ZeroMode::CliffordSplit) {
          ok = (i == j) ? sgn(p) != 0 : sgn(p) == 0;
        } else if (a == b) {
          ok = sgn(p) == 0;
        }
        if (!ok)
          throw std::invalid_argument("Sector: zero-mode policy of " + space_->label(i) + ", " +
                                      space_->label(j) + " is inconsistent with the form");
      }
    }
  }

  void multiply_into(State& out, int gen, const FracIndex& n, const Monomial& m,
                     const Scalar& c) const {
    Factor f{n, gen};
    auto pos = std::lower_bound(m.begin(), m.end(), f);
    if (pos != m.end() && *pos == f) return;
    Monomial r;
    r.reserve(m.size() + 1);
    r.insert(r.end(), m.begin(), pos);
    r.push_back(f);
    r.insert(r.end(), pos, m.end());
    out.add(std::move(r), (pos - m.begin()) % 2 ? -c : c);
  }

  void derive_into(State& out, int gen, const FracIndex& n, const Monomial& m,
                   const Scalar& c) const {
    FracIndex target = -n;
    for (std::size_t p = 0; p < m.size(); ++p) {
      if (m[p].mode != target) continue;
      const Scalar& g = space_->pairing(gen, m[p].gen);
      if (sgn(g) == 0) continue;
      Monomial r;
      r.reserve(m.size() - 1);
      r.insert(r.end(), m.begin(), m.begin() + p);
      r.insert(r.end(), m.begin() + p + 1, m.end());
      out.add(std::move(r), (p % 2 ? -c : c) * g);
    }
  }

  std::shared_ptr<const FermionSpace> space_;
  std::vector<FracIndex> offsets_;
  std::vector<ZeroMode> zero_;
};

}  // namespace vosa

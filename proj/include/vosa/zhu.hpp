#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vosa/field.hpp"
#include "vosa/linalg.hpp"
#include "vosa/verify.hpp"

namespace vosa {

/// The automorphism g is encoded by the sector of its twisted modules: a
/// generator with mode offset rho has g sigma eigenvalue exp(2 pi i rho), so a
/// monomial lies in V^{r*} with r/T = frac(sum of offsets).
class ZhuContext {
 public:
  explicit ZhuContext(Sector module)
      : module_(std::move(module)), self_(Sector::neveu_schwarz(module_.space_ptr())) {}

  const Sector& module() const { return module_; }
  const Sector& algebra() const { return self_.algebra(); }
  FieldEngine& self() { return self_; }

  FracIndex twist(const Monomial& u) const {
    FracIndex s;
    for (const auto& f : u) s += module_.offset(f.gen);
    return s.frac();
  }
  bool untwisted(const Monomial& u) const { return twist(u).is_zero(); }

  /// Order T of g sigma.
  std::int64_t sigma_order() const {
    std::int64_t t = 1;
    for (int g = 0; g < module_.size(); ++g) t = std::lcm(t, module_.offset(g).den());
    return t;
  }

  /// Res_z (1+z)^{wt u - 1 + delta + r/T + n} z^{-(m + delta + 1)} Y(u,z) v.
  /// (m, n) = (0, 0) is u o_g v.
  State circle(const Monomial& u, const State& v, std::int64_t m = 0, std::int64_t n = 0) {
    FracIndex r = twist(u);
    std::int64_t delta = r.is_zero() ? 1 : 0;
    FracIndex expo = weight(u) - FracIndex(1 - delta - n) + r;
    State su(u), out;
    for (const auto& [vm, vc] : v) {
      std::int64_t cut = product_cutoff(u, vm);
      for (std::int64_t s = 0; s - m - 1 - delta <= cut; ++s) {
        State t = self_.mode(su, FracIndex(s - m - 1 - delta), State(vm));
        out.add_scaled(t, vc * gen_binomial(expo, s));
      }
    }
    return out;
  }

  /// u *_g v; zero when u is twisted (r != 0).
  State star(const Monomial& u, const State& v) {
    if (!untwisted(u)) return {};
    return star_raw(u, v);
  }

  /// sum_i binom(wt u, i) u_{i-1} v regardless of the twist of u.
  State star_raw(const Monomial& u, const State& v) {
    State su(u), out;
    for (const auto& [vm, vc] : v) {
      std::int64_t cut = product_cutoff(u, vm);
      for (std::int64_t i = 0; i - 1 <= cut; ++i)
        out.add_scaled(self_.mode(su, FracIndex(i - 1), State(vm)),
                       vc * gen_binomial(weight(u), i));
    }
    return out;
  }

  State star(const State& u, const State& v) {
    State out;
    for (const auto& [um, uc] : u) out.add_scaled(star(um, v), uc);
    return out;
  }

  /// Res_z (1+z)^{e} z^{-1-shift} Y(u,z) v = sum_i binom(e, i) u_{i-1-shift} v.
  State residue(const Monomial& u, const Scalar& e, std::int64_t shift, const State& v) {
    State su(u), out;
    for (const auto& [vm, vc] : v) {
      std::int64_t cut = product_cutoff(u, vm);
      for (std::int64_t i = 0; i - 1 - shift <= cut; ++i)
        out.add_scaled(self_.mode(su, FracIndex(i - 1 - shift), State(vm)),
                       vc * gen_binomial(e, i));
    }
    return out;
  }

 private:
  Sector module_;
  FieldEngine self_;
};

/// V_{<=Wmax} modulo the span of the generated O_g elements, with the part in
/// weight <= W read off from an elimination whose columns run from high to low
/// weight.
class TruncatedQuotient {
 public:
  TruncatedQuotient(ZhuContext& ctx, const FracIndex& W, const FracIndex& margin, int m_max)
      : W_(W), Wmax_(W + margin) {
    auto basis = ctx.algebra().enumerate_basis(Wmax_);
    columns_.assign(basis.rbegin(), basis.rend());
    for (std::size_t i = 0; i < columns_.size(); ++i)
      index_.emplace(columns_[i], static_cast<int>(i));

    for (const auto& u : basis) {
      std::int64_t delta = ctx.untwisted(u) ? 1 : 0;
      for (const auto& v : basis) {
        FracIndex top = weight(u) + weight(v) + FracIndex(delta);
        if (top > Wmax_) break;  // basis is weight-ordered
        for (int m = 0; m <= m_max && top + FracIndex(m) <= Wmax_; ++m)
          for (int n = 0; n <= m; ++n) {
            State x = ctx.circle(u, State(v), m, n);
            ++generated_;
            if (!x.empty()) ech_.insert(to_columns(x));
          }
      }
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      const auto& mono = columns_[i];
      if (weight(mono) > W_) continue;
      if (!ech_.is_pivot(static_cast<int>(i))) reps_.push_back(mono);
    }
    std::reverse(reps_.begin(), reps_.end());
    for (std::size_t i = 0; i < reps_.size(); ++i) rep_index_.emplace(reps_[i], static_cast<int>(i));
  }

  const FracIndex& max_weight() const { return W_; }
  const FracIndex& span_weight() const { return Wmax_; }
  std::size_t dim() const { return reps_.size(); }
  const std::vector<Monomial>& representatives() const { return reps_; }
  std::size_t generated() const { return generated_; }
  std::size_t relations() const { return ech_.rank(); }

  struct NormalForm {
    SparseVector<int> coords;  // over representatives
    bool reduced = true;       // false if the residue left the representable range
  };

  NormalForm normal_form(const State& s) const {
    NormalForm nf;
    SparseVector<int> cols;
    for (const auto& [m, c] : s) {
      auto it = index_.find(m);
      if (it == index_.end()) {
        nf.reduced = false;
        continue;
      }
      cols.add(it->second, c);
    }
    for (const auto& [col, c] : ech_.reduce(cols)) {
      auto it = rep_index_.find(columns_[col]);
      if (it == rep_index_.end()) {
        nf.reduced = false;
        continue;
      }
      nf.coords.add(it->second, c);
    }
    return nf;
  }

  State lift(const SparseVector<int>& coords) const {
    State s;
    for (const auto& [i, c] : coords) s.add(reps_[i], c);
    return s;
  }

 private:
  SparseVector<int> to_columns(const State& x) const {
    SparseVector<int> r;
    for (const auto& [m, c] : x) r.add(index_.at(m), c);
    return r;
  }

  FracIndex W_, Wmax_;
  std::vector<Monomial> columns_;
  std::map<Monomial, int> index_;
  RowEchelon ech_;
  std::vector<Monomial> reps_;
  std::map<Monomial, int> rep_index_;
  std::size_t generated_ = 0;
};

/// Finite-dimensional algebra given by a multiplication table on a basis.
class TableAlgebra {
 public:
  using Vec = SparseVector<int>;

  TableAlgebra() = default;
  explicit TableAlgebra(std::vector<std::vector<Vec>> table) : table_(std::move(table)) {}

  std::size_t dim() const { return table_.size(); }
  const Vec& product(int i, int j) const { return table_[i][j]; }
  const std::vector<std::vector<Vec>>& table() const { return table_; }

  Vec multiply(const Vec& a, const Vec& b) const {
    Vec out;
    for (const auto& [i, x] : a)
      for (const auto& [j, y] : b) out.add_scaled(table_[i][j], x * y);
    return out;
  }

  static Vec basis_vector(int i) { return Vec(i, 1); }

  bool associative(std::string* failure = nullptr) const {
    int n = static_cast<int>(dim());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Vec l = multiply(table_[i][j], basis_vector(k));
          Vec r = multiply(basis_vector(i), table_[j][k]);
          if (!(l == r)) {
            if (failure)
              *failure = "(e" + std::to_string(i) + "e" + std::to_string(j) + ")e" +
                         std::to_string(k);
            return false;
          }
        }
    return true;
  }

  bool is_unit(const Vec& u) const {
    for (int i = 0; i < static_cast<int>(dim()); ++i) {
      Vec e = basis_vector(i);
      if (!(multiply(u, e) == e) || !(multiply(e, u) == e)) return false;
    }
    return true;
  }

  bool is_central(const Vec& z) const {
    for (int i = 0; i < static_cast<int>(dim()); ++i) {
      Vec e = basis_vector(i);
      if (!(multiply(z, e) == multiply(e, z))) return false;
    }
    return true;
  }

  /// Basis of the center.
  std::vector<Vec> center() const {
    int n = static_cast<int>(dim());
    Matrix eq;
    for (int j = 0; j < n; ++j) {
      // coefficient of e_t in sum_k x_k (e_k e_j - e_j e_k)
      std::vector<std::vector<Scalar>> rows(n, std::vector<Scalar>(n, Scalar(0)));
      for (int k = 0; k < n; ++k) {
        for (const auto& [t, c] : table_[k][j]) rows[t][k] += c;
        for (const auto& [t, c] : table_[j][k]) rows[t][k] -= c;
      }
      for (auto& r : rows) eq.push_back(std::move(r));
    }
    std::vector<Vec> out;
    for (const auto& x : nullspace(eq, n)) {
      Vec v;
      for (int k = 0; k < n; ++k) v.add(k, x[k]);
      out.push_back(std::move(v));
    }
    return out;
  }

  /// Left multiplication matrix of a (columns = basis images).
  Matrix left_matrix(const Vec& a) const {
    int n = static_cast<int>(dim());
    Matrix m = zero_matrix(n, n);
    for (int j = 0; j < n; ++j)
      for (const auto& [t, c] : multiply(a, basis_vector(j))) m[t][j] = c;
    return m;
  }

  /// Semisimple iff the trace form Tr(L_a L_b) is nondegenerate.
  bool semisimple() const {
    int n = static_cast<int>(dim());
    std::vector<Matrix> L;
    for (int i = 0; i < n; ++i) L.push_back(left_matrix(basis_vector(i)));
    Matrix form = zero_matrix(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Matrix p = vosa::multiply(L[i], L[j]);
        Scalar tr = 0;
        for (int t = 0; t < n; ++t) tr += p[t][t];
        form[i][j] = tr;
      }
    return rank(form) == static_cast<std::size_t>(n);
  }

  /// Primitive central idempotents, found from the eigenvalues of a generic
  /// central element acting on the center. Empty if the center does not split
  /// over Q with the elements tried.
  std::vector<Vec> central_idempotents() const {
    auto Z = center();
    std::size_t z = Z.size();
    if (z == 0) return {};
    for (int attempt = 1; attempt <= 8; ++attempt) {
      Vec c;
      for (std::size_t k = 0; k < z; ++k)
        c.add_scaled(Z[k], Scalar(static_cast<long>((k + 1) * attempt + k * k)));
      auto roots = eigenvalues_on(c, Z);
      if (!roots || roots->size() != z) continue;
      std::vector<Vec> idem;
      Vec one = unit_in(Z);
      for (std::size_t i = 0; i < z; ++i) {
        Vec e = one;
        for (std::size_t j = 0; j < z; ++j) {
          if (j == i) continue;
          Vec f = c;
          f.add_scaled(one, -(*roots)[j]);
          e = multiply(e, f) * (Scalar(1) / ((*roots)[i] - (*roots)[j]));
        }
        idem.push_back(std::move(e));
      }
      bool ok = true;
      for (const auto& e : idem) ok = ok && multiply(e, e) == e && !e.empty();
      if (ok) return idem;
    }
    return {};
  }

  /// Block sizes n_i with e_i A = M_{n_i}; zero entries mark non-square pieces.
  std::vector<int> block_sizes() const {
    std::vector<int> sizes;
    for (const auto& e : central_idempotents()) {
      std::vector<Vec> rows;
      for (int j = 0; j < static_cast<int>(dim()); ++j) rows.push_back(multiply(e, basis_vector(j)));
      std::size_t d = rank_and_basis(rows).rank;
      int s = 0;
      while (static_cast<std::size_t>((s + 1) * (s + 1)) <= d) ++s;
      sizes.push_back(static_cast<std::size_t>(s * s) == d ? s : 0);
    }
    std::sort(sizes.begin(), sizes.end());
    return sizes;
  }

 private:
  Vec unit_in(const std::vector<Vec>& Z) const {
    // the unit lies in the center; solve for it there
    int n = static_cast<int>(dim());
    std::size_t z = Z.size();
    Matrix a;
    std::vector<Scalar> b;
    for (int j = 0; j < n; ++j) {
      Vec e = basis_vector(j);
      std::vector<std::vector<Scalar>> rows(n, std::vector<Scalar>(z, Scalar(0)));
      for (std::size_t k = 0; k < z; ++k)
        for (const auto& [t, c] : multiply(Z[k], e)) rows[t][k] += c;
      for (int t = 0; t < n; ++t) {
        a.push_back(rows[t]);
        b.push_back(t == j ? Scalar(1) : Scalar(0));
      }
    }
    auto x = solve(a, b);
    Vec one;
    if (!x) return one;
    for (std::size_t k = 0; k < z; ++k) one.add_scaled(Z[k], (*x)[k]);
    return one;
  }

  // Rational eigenvalues of multiplication by c on span(Z), if it is
  // diagonalizable with distinct rational eigenvalues.
  std::optional<std::vector<Scalar>> eigenvalues_on(const Vec& c, const std::vector<Vec>& Z) const {
    std::size_t z = Z.size();
    auto coords = [&](const Vec& v) -> std::optional<std::vector<Scalar>> {
      int n = static_cast<int>(dim());
      Matrix a = zero_matrix(n, z);
      for (std::size_t k = 0; k < z; ++k)
        for (const auto& [t, x] : Z[k]) a[t][k] = x;
      std::vector<Scalar> b(n, Scalar(0));
      for (const auto& [t, x] : v) b[t] = x;
      return solve(a, b);
    };
    Matrix M = zero_matrix(z, z);
    for (std::size_t k = 0; k < z; ++k) {
      auto x = coords(multiply(c, Z[k]));
      if (!x) return std::nullopt;
      for (std::size_t t = 0; t < z; ++t) M[t][k] = (*x)[t];
    }
    // characteristic polynomial by Faddeev-LeVerrier
    std::vector<Scalar> coef(z + 1, Scalar(0));  // coef[i] of lambda^i
    coef[z] = 1;
    Matrix Mk = identity_matrix(z);
    Matrix AM;
    for (std::size_t k = 1; k <= z; ++k) {
      AM = vosa::multiply(M, Mk);
      Scalar tr = 0;
      for (std::size_t t = 0; t < z; ++t) tr += AM[t][t];
      Scalar ck = -tr / Scalar(static_cast<long>(k));
      coef[z - k] = ck;
      Mk = AM;
      for (std::size_t t = 0; t < z; ++t) Mk[t][t] += ck;
    }
    auto roots = rational_roots(coef);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    if (roots.size() != z) return std::nullopt;
    return roots;
  }

  static Scalar eval(const std::vector<Scalar>& coef, const Scalar& x) {
    Scalar r = 0;
    for (auto it = coef.rbegin(); it != coef.rend(); ++it) r = r * x + *it;
    return r;
  }

  // Rational roots via the rational root theorem after clearing denominators.
  static std::vector<Scalar> rational_roots(std::vector<Scalar> coef) {
    std::vector<Scalar> roots;
    while (!coef.empty() && sgn(coef.front()) == 0) {
      roots.push_back(0);
      coef.erase(coef.begin());
    }
    if (coef.size() <= 1) return roots;
    Integer den = 1;
    for (const auto& c : coef) den = lcm(den, c.get_den());
    std::vector<Integer> ic;
    for (const auto& c : coef) ic.push_back(c.get_num() * (den / c.get_den()));
    auto divisors = [](Integer n) {
      std::vector<Integer> d;
      n = abs(n);
      for (Integer i = 1; i * i <= n; ++i)
        if (n % i == 0) {
          d.push_back(i);
          if (i * i != n) d.push_back(n / i);
        }
      return d;
    };
    for (const auto& p : divisors(ic.front()))
      for (const auto& q : divisors(ic.back()))
        for (int s : {1, -1}) {
          Scalar x(p * s, q);
          x.canonicalize();
          if (sgn(eval(coef, x)) == 0) roots.push_back(x);
        }
    return roots;
  }

  std::vector<std::vector<Vec>> table_;
};

/// A representation of V on some space through the zero modes o(a), used as a
/// lower bound for dim A_g(V): the rank of a -> o(a) over the quotient
/// representatives. `action(a)` returns the matrix of o(a).
struct Certifier {
  std::string name;
  std::function<Matrix(const Monomial&)> action;
};

struct ZhuOptions {
  FracIndex max_weight{2};
  FracIndex margin{2};
  int m_max = 2;
  bool check_stability = true;
};

struct ZhuResult {
  FracIndex max_weight;
  FracIndex margin;
  std::vector<Monomial> basis;
  std::vector<std::string> labels;
  TableAlgebra algebra;
  std::size_t dim_upper = 0;
  std::optional<std::size_t> dim_upper_next;  // at W + 1/2
  std::optional<std::size_t> dim_lower;
  bool stabilized = false;
  bool reduced = true;  // every product reduced inside the representable range
  bool certified = false;
  bool associative = false;
  bool unital = false;
  bool omega_central = false;
  std::size_t center_dim = 0;
  bool semisimple = false;
  std::vector<int> blocks;
  std::size_t relations = 0;
  std::size_t generated = 0;
  std::vector<std::string> notes;
};

/// Rank of a -> (o(a) on each certifier) over the representatives.
inline std::size_t representation_rank(const std::vector<Monomial>& reps,
                                       const std::vector<Certifier>& certs) {
  Matrix rows;
  for (const auto& a : reps) {
    std::vector<Scalar> flat;
    for (const auto& c : certs)
      for (const auto& r : c.action(a)) flat.insert(flat.end(), r.begin(), r.end());
    rows.push_back(std::move(flat));
  }
  if (rows.empty() || rows[0].empty()) return 0;
  return rank(rows);
}

inline ZhuResult build_algebra(ZhuContext& ctx, const ZhuOptions& opt,
                               const std::vector<Certifier>& certs = {}) {
  ZhuResult res;
  res.max_weight = opt.max_weight;
  res.margin = opt.margin;
  TruncatedQuotient q(ctx, opt.max_weight, opt.margin, opt.m_max);
  res.basis = q.representatives();
  res.dim_upper = q.dim();
  res.relations = q.relations();
  res.generated = q.generated();
  for (const auto& m : res.basis) res.labels.push_back(ctx.algebra().format(m));

  std::size_t n = res.basis.size();
  std::vector<std::vector<TableAlgebra::Vec>> table(n, std::vector<TableAlgebra::Vec>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto nf = q.normal_form(ctx.star(res.basis[i], State(res.basis[j])));
      if (!nf.reduced) {
        res.reduced = false;
        res.notes.push_back("product " + res.labels[i] + " * " + res.labels[j] +
                            " leaves the truncation");
      }
      table[i][j] = std::move(nf.coords);
    }
  res.algebra = TableAlgebra(std::move(table));

  std::string why;
  res.associative = res.algebra.associative(&why);
  if (!res.associative) res.notes.push_back("associativity fails at " + why);
  auto one = q.normal_form(vacuum());
  res.unital = one.reduced && res.algebra.is_unit(one.coords);
  auto om = q.normal_form(conformal_vector(ctx.algebra()));
  res.omega_central = om.reduced && res.algebra.is_central(om.coords);
  res.center_dim = res.algebra.center().size();
  res.semisimple = n > 0 && res.algebra.semisimple();
  if (res.semisimple && res.associative) res.blocks = res.algebra.block_sizes();

  if (opt.check_stability) {
    TruncatedQuotient q2(ctx, opt.max_weight + kHalf, opt.margin, opt.m_max);
    res.dim_upper_next = q2.dim();
    res.stabilized = q2.dim() == q.dim();
  } else {
    res.stabilized = true;
    res.notes.push_back("stability check skipped");
  }
  if (!certs.empty()) res.dim_lower = representation_rank(res.basis, certs);
  res.certified = res.dim_lower && *res.dim_lower == res.dim_upper && res.stabilized &&
                  res.reduced && res.associative && res.unital;
  return res;
}

/// For untwisted homogeneous u, v of weight <= W the differences
///   u*v - (-1)^{uv} Res_z (1+z)^{wt v - 1} z^{-1} Y(v,z)u
///   u*v - (-1)^{uv} v*u - Res_z (1+z)^{wt u - 1} Y(u,z)v
/// must vanish in the quotient.
inline Report verify_residue_classes(ZhuContext& ctx, const TruncatedQuotient& q,
                                     const FracIndex& W) {
  Report rep;
  auto& first = rep.add("u*v = (-1)^{uv} Res (1+z)^{wt v-1} z^-1 Y(v,z)u mod O_g");
  auto& second = rep.add("u*v - (-1)^{uv} v*u = Res (1+z)^{wt u-1} Y(u,z)v mod O_g");
  auto basis = ctx.algebra().enumerate_basis(W);
  auto vanishes = [&](const State& x) {
    auto nf = q.normal_form(x);
    return nf.reduced && nf.coords.empty();
  };
  for (const auto& u : basis) {
    if (!ctx.untwisted(u)) continue;
    for (const auto& v : basis) {
      if (!ctx.untwisted(v) || weight(u) + weight(v) > W) continue;
      Scalar s = parity_sign(u, v);
      State uv = ctx.star(u, State(v));
      State a = uv;
      a.add_scaled(ctx.residue(v, (weight(v) - FracIndex(1)).scalar(), 0, State(u)), -s);
      ++first.samples;
      if (!vanishes(a)) first.fail(ctx.algebra().format(u) + ", " + ctx.algebra().format(v));
      State b = uv;
      b.add_scaled(ctx.star(v, State(u)), -s);
      b.add_scaled(ctx.residue(u, (weight(u) - FracIndex(1)).scalar(), -1, State(v)), Scalar(-1));
      ++second.samples;
      if (!vanishes(b)) second.fail(ctx.algebra().format(u) + ", " + ctx.algebra().format(v));
    }
  }
  return rep;
}

}  // namespace vosa

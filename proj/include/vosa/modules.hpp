#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vosa/field.hpp"
#include "vosa/verify.hpp"
#include "vosa/zhu.hpp"

namespace vosa {

/// A twisted module realized on a Fock sector, optionally restricted to an
/// eigenspace of J = e(0) (-1)^F (F counts factors other than e(0)), which
/// commutes with every generator mode when e(0) is clifford-split.
class TwistedModule {
 public:
  TwistedModule(std::string name, Sector sector, int parity = 0, int split_gen = -1)
      : name_(std::move(name)), engine_(std::make_shared<FieldEngine>(std::move(sector))),
        parity_(parity), split_(split_gen) {
    if (parity_ != 0) {
      if (split_ < 0 || sector_().zero_mode(split_) != ZeroMode::CliffordSplit ||
          sector_().space().pairing(split_, split_) != Scalar(2))
        throw std::invalid_argument("parity split needs a clifford-split generator with (e,e)=2");
    }
  }

  const std::string& name() const { return name_; }
  const Sector& sector() const { return engine_->module(); }
  FieldEngine& engine() const { return *engine_; }
  int parity() const { return parity_; }

  State J(const State& s) const {
    State out;
    for (const auto& [m, c] : s) {
      std::size_t f = 0;
      for (const auto& x : m)
        if (!(x.gen == split_ && x.mode.is_zero())) ++f;
      out.add_scaled(sector().apply(split_, FracIndex(0), State(m)), f % 2 ? -c : c);
    }
    return out;
  }

  /// Degrees with a nonzero piece, up to W.
  std::vector<FracIndex> degrees(const FracIndex& W) const {
    std::set<FracIndex> ds;
    for (const auto& m : sector().enumerate_basis(W)) ds.insert(weight(m));
    return {ds.begin(), ds.end()};
  }

  /// Basis of M(d) (echelon form, so deterministic).
  std::vector<State> piece(const FracIndex& d) const {
    auto it = pieces_.find(d);
    if (it != pieces_.end()) return it->second;
    std::vector<State> out;
    std::vector<Monomial> monos;
    for (const auto& m : sector().enumerate_basis(d))
      if (weight(m) == d) monos.push_back(m);
    if (parity_ == 0) {
      for (const auto& m : monos) out.emplace_back(m);
    } else {
      std::vector<State> gens;
      for (const auto& m : monos) {
        State s(m);
        s.add_scaled(J(s), Scalar(parity_));
        gens.push_back(std::move(s));
      }
      out = rank_and_basis(gens, monos).echelon;
    }
    pieces_.emplace(d, out);
    return out;
  }

  std::vector<std::pair<FracIndex, std::size_t>> graded_dims(const FracIndex& W) const {
    std::vector<std::pair<FracIndex, std::size_t>> out;
    for (const auto& d : degrees(W)) out.emplace_back(d, piece(d).size());
    return out;
  }

  /// Coordinates of s in the basis of M(d); nullopt if s is not in M(d).
  std::optional<std::vector<Scalar>> coordinates(const FracIndex& d, const State& s) const {
    auto basis = piece(d);
    std::vector<Monomial> monos;
    std::map<Monomial, std::size_t> idx;
    auto add = [&](const Monomial& m) {
      if (idx.emplace(m, monos.size()).second) monos.push_back(m);
    };
    for (const auto& b : basis)
      for (const auto& [m, c] : b) add(m);
    for (const auto& [m, c] : s) add(m);
    Matrix a = zero_matrix(monos.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
      for (const auto& [m, c] : basis[j]) a[idx[m]][j] = c;
    std::vector<Scalar> b(monos.size(), Scalar(0));
    for (const auto& [m, c] : s) b[idx[m]] = c;
    return solve(a, b);
  }

 private:
  const Sector& sector_() const { return engine_->module(); }

  std::string name_;
  std::shared_ptr<FieldEngine> engine_;
  int parity_;
  int split_;
  mutable std::map<FracIndex, std::vector<State>> pieces_;
};

/// Ramond sector on the polarized space: b_i(0) annihilate, b_i*(0) create, e(0)
/// is clifford-split.
inline Sector sigma_sector(int l) {
  auto sp = std::make_shared<const FermionSpace>(FermionSpace::polarized(l));
  int k = l / 2;
  std::vector<ZeroMode> z;
  for (int i = 0; i < k; ++i) z.push_back(ZeroMode::Annihilation);
  for (int i = 0; i < k; ++i) z.push_back(ZeroMode::Creation);
  if (l % 2) z.push_back(ZeroMode::CliffordSplit);
  return Sector(sp, std::vector<FracIndex>(l, FracIndex(0)), z);
}

/// V(H,Z) for even l; the pair V+(H,Z), V-(H,Z) for odd l.
inline std::vector<TwistedModule> build_sigma_modules(int l) {
  if (l < 1) throw std::invalid_argument("l must be positive");
  Sector s = sigma_sector(l);
  if (l % 2 == 0) return {TwistedModule("V(H,Z)", s)};
  return {TwistedModule("V+(H,Z)", s, +1, l - 1), TwistedModule("V-(H,Z)", s, -1, l - 1)};
}

/// One generator of a twist table: label, mode offset rho (modes in rho + Z)
/// and an optional partner label.
struct TwistEntry {
  std::string label;
  FracIndex offset;
  std::string partner;  // empty: self-paired
};

/// Parses "c:1/2;e:0" or "x:1/3~y;y:2/3~x". Self-paired generators get
/// (x,x) = 2, partners (x,y) = 1.
inline std::vector<TwistEntry> parse_twist_table(const std::string& text) {
  std::vector<TwistEntry> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("twist table entry '" + item + "' lacks ':'");
    TwistEntry e;
    e.label = item.substr(0, colon);
    std::string rest = item.substr(colon + 1);
    auto tilde = rest.find('~');
    if (tilde != std::string::npos) {
      e.partner = rest.substr(tilde + 1);
      rest = rest.substr(0, tilde);
    }
    e.offset = FracIndex::parse(rest).frac();
    if (e.label.empty()) throw std::invalid_argument("empty label in twist table");
    out.push_back(e);
  }
  if (out.empty()) throw std::invalid_argument("empty twist table");
  return out;
}

/// Sector for a twist table. Generators in class 0 are polarized: the first of
/// a partner pair annihilates at mode 0, the second creates, self-paired ones
/// are clifford-split.
inline Sector twist_sector(const std::vector<TwistEntry>& table) {
  int n = static_cast<int>(table.size());
  std::vector<std::string> labels;
  for (const auto& e : table) labels.push_back(e.label);
  Matrix g = zero_matrix(n, n);
  std::vector<ZeroMode> z(n, ZeroMode::Annihilation);
  std::vector<FracIndex> offs;
  auto find = [&](const std::string& l) {
    for (int i = 0; i < n; ++i)
      if (labels[i] == l) return i;
    throw std::invalid_argument("unknown partner '" + l + "' in twist table");
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j)
      if (labels[i] == labels[j]) throw std::invalid_argument("duplicate label " + labels[i]);
    offs.push_back(table[i].offset);
    if (table[i].partner.empty()) {
      g[i][i] = 2;
      if (table[i].offset.is_zero()) z[i] = ZeroMode::CliffordSplit;
    } else {
      int j = find(table[i].partner);
      if (j == i) throw std::invalid_argument("generator paired with itself: " + labels[i]);
      if (!table[j].partner.empty() && table[j].partner != labels[i])
        throw std::invalid_argument("asymmetric pairing for " + labels[i]);
      g[i][j] = g[j][i] = 1;
      if (table[i].offset.is_zero()) z[i] = i < j ? ZeroMode::Annihilation : ZeroMode::Creation;
    }
  }
  auto sp = std::make_shared<const FermionSpace>(labels, g);
  return Sector(sp, offs, z);
}

/// The swap tau: b <-> b* on l = 2, written in its eigenbasis c = b + b*
/// (fixed) and e = i(b - b*) (negated), (c,c) = (e,e) = 2. A generator fixed
/// by tau is negated by tau sigma, so its twisted modes are half-integral.
inline std::string tau_swap_table() { return "c:1/2;e:0"; }

/// M for a tau configuration, or M+ and M- when the number of class-0
/// generators is odd.
inline std::vector<TwistedModule> build_tau_modules(const std::vector<TwistEntry>& table) {
  Sector s = twist_sector(table);
  int split = -1, count = 0;
  for (int g = 0; g < s.size(); ++g)
    if (s.offset(g).is_zero() && s.zero_mode(g) == ZeroMode::CliffordSplit) {
      split = g;
      ++count;
    }
  if (count > 1) throw std::invalid_argument("at most one self-paired generator in class 0");
  if (split < 0) return {TwistedModule("M", s)};
  return {TwistedModule("M+", s, +1, split), TwistedModule("M-", s, -1, split)};
}

/// Number of class-0 generators (l0) of a sector.
inline int untwisted_rank(const Sector& s) {
  int l0 = 0;
  for (int g = 0; g < s.size(); ++g)
    if (s.offset(g).is_zero()) ++l0;
  return l0;
}

/// u_m for homogeneous pieces of a; monomials whose class excludes m give 0.
inline State zero_mode(FieldEngine& eng, const State& a, const State& w) {
  State out;
  for (const auto& [m, c] : a) {
    FracIndex idx = weight(m) - FracIndex(1);
    if (!eng.index_allowed(m, idx)) continue;
    out.add_scaled(eng.mode(State(m), idx, w), c);
  }
  return out;
}

/// Lowest weight space: vectors killed by every strictly degree-lowering mode
/// of the chosen fields.
struct OmegaSpace {
  std::vector<State> basis;
  std::vector<FracIndex> degree;  // of each basis vector
  std::size_t dim() const { return basis.size(); }
};

inline std::vector<State> default_omega_fields(const Sector& ns) {
  std::vector<State> f;
  for (int g = 0; g < ns.size(); ++g) f.push_back(generator_state(g));
  f.push_back(conformal_vector(ns));
  return f;
}

/// Fields of weight <= 2 (all basis monomials), for re-checking Omega.
inline std::vector<State> all_fields(const Sector& ns, const FracIndex& W = FracIndex(2)) {
  std::vector<State> f;
  for (const auto& m : ns.enumerate_basis(W)) f.emplace_back(m);
  return f;
}

inline OmegaSpace omega(const TwistedModule& M, const FracIndex& W,
                        const std::vector<State>& fields) {
  OmegaSpace om;
  auto& eng = M.engine();
  for (const auto& d : M.degrees(W)) {
    auto basis = M.piece(d);
    // rows: (operator, output monomial); columns: basis vectors
    std::map<std::pair<int, Monomial>, std::vector<Scalar>> rows;
    int op = 0;
    for (const auto& f : fields) {
      // f is homogeneous; take weight and class from its first monomial
      const Monomial& lead = f.begin()->first;
      FracIndex wt = weight(lead);
      FracIndex lowest = wt - FracIndex(1);  // modes above this lower the degree
      FracIndex q = eng.mode_class(lead) + FracIndex((lowest - eng.mode_class(lead)).floor());
      while (q <= lowest) q += FracIndex(1);
      for (; q <= wt - FracIndex(1) + d; q += FracIndex(1), ++op) {
        for (std::size_t j = 0; j < basis.size(); ++j)
          for (const auto& [m, c] : eng.mode(f, q, basis[j])) {
            auto& row = rows[{op, m}];
            if (row.empty()) row.assign(basis.size(), Scalar(0));
            row[j] += c;
          }
      }
    }
    Matrix a;
    for (auto& [k, r] : rows) a.push_back(std::move(r));
    for (const auto& x : nullspace(a, basis.size())) {
      State v;
      for (std::size_t j = 0; j < basis.size(); ++j) v.add_scaled(basis[j], x[j]);
      om.basis.push_back(std::move(v));
      om.degree.push_back(d);
    }
  }
  return om;
}

inline OmegaSpace omega(const TwistedModule& M, const FracIndex& W = FracIndex(1)) {
  return omega(M, W, default_omega_fields(M.engine().algebra()));
}

/// Matrix of o(a) on Omega (columns = images of basis vectors); throws if Omega
/// is not preserved.
inline Matrix omega_action(const TwistedModule& M, const OmegaSpace& om, const State& a) {
  std::size_t n = om.dim();
  Matrix mat = zero_matrix(n, n);
  // Omega basis vectors sit in single degrees; solve degree by degree
  std::map<Monomial, std::size_t> idx;
  std::vector<Monomial> monos;
  for (const auto& b : om.basis)
    for (const auto& [m, c] : b)
      if (idx.emplace(m, monos.size()).second) monos.push_back(m);
  Matrix A = zero_matrix(monos.size(), n);
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [m, c] : om.basis[j]) A[idx[m]][j] = c;
  for (std::size_t j = 0; j < n; ++j) {
    State img = zero_mode(M.engine(), a, om.basis[j]);
    std::vector<Scalar> b(monos.size(), Scalar(0));
    bool outside = false;
    for (const auto& [m, c] : img) {
      auto it = idx.find(m);
      if (it == idx.end()) {
        outside = true;
        break;
      }
      b[it->second] = c;
    }
    std::optional<std::vector<Scalar>> x;
    if (!outside) x = solve(A, b);
    if (!x) throw std::runtime_error("o(a) does not preserve Omega(" + M.name() + ")");
    for (std::size_t i = 0; i < n; ++i) mat[i][j] = (*x)[i];
  }
  return mat;
}

inline Certifier omega_certifier(const TwistedModule& M, const OmegaSpace& om) {
  return Certifier{M.name(), [&M, om](const Monomial& a) { return omega_action(M, om, State(a)); }};
}

/// o(a) o(b) = o(a *_g b) on Omega for all representatives, o(1) = 1, and
/// o(x) = 0 for sampled O_g elements x.
inline Report verify_zhu_action(ZhuContext& ctx, const ZhuResult& res, const TwistedModule& M,
                                const OmegaSpace& om, const FracIndex& o_weight = FracIndex(2)) {
  Report rep;
  auto& hom = rep.add("o(a)o(b) = o(a*b) on Omega(" + M.name() + ")");
  std::vector<Matrix> mats;
  for (const auto& a : res.basis) mats.push_back(omega_action(M, om, State(a)));
  for (std::size_t i = 0; i < res.basis.size(); ++i)
    for (std::size_t j = 0; j < res.basis.size(); ++j) {
      ++hom.samples;
      Matrix ab = omega_action(M, om, ctx.star(res.basis[i], State(res.basis[j])));
      if (!(multiply(mats[i], mats[j]) == ab)) hom.fail(res.labels[i] + " * " + res.labels[j]);
    }
  auto& unit = rep.add("o(1) = identity on Omega(" + M.name() + ")");
  ++unit.samples;
  if (!(omega_action(M, om, vacuum()) == identity_matrix(om.dim()))) unit.fail("o(1)");
  auto& ker = rep.add("o(O_g) = 0 on Omega(" + M.name() + ")");
  auto basis = ctx.algebra().enumerate_basis(o_weight);
  Matrix zero = zero_matrix(om.dim(), om.dim());
  for (const auto& u : basis)
    for (const auto& v : basis) {
      if (weight(u) + weight(v) > o_weight) continue;
      for (int m = 0; m <= 1; ++m)
        for (int n = 0; n <= m; ++n) {
          ++ker.samples;
          if (!(omega_action(M, om, ctx.circle(u, State(v), m, n)) == zero))
            ker.fail(ctx.algebra().format(u) + " o " + ctx.algebra().format(v));
        }
      // (L(-1)u + L(0)u) * v coincides with u o v for untwisted u
      if (ctx.untwisted(u)) {
        ++ker.samples;
        State omg = conformal_vector(ctx.algebra());
        State lu = ctx.self().mode(omg, FracIndex(0), State(u));
        lu.add_scaled(State(u), weight(u).scalar());
        State lhs = ctx.star(lu, State(v));
        if (!(lhs == ctx.circle(u, State(v))))
          ker.fail("(L(-1)+L(0))u * v != u o v for u=" + ctx.algebra().format(u));
      }
    }
  auto& simple = rep.add("Omega(" + M.name() + ") simple under A_g(V)");
  // commutant of the o(a) action: scalars iff the representation is simple
  // (Omega is split over Q here)
  std::size_t n = om.dim();
  Matrix eq;
  for (const auto& A : mats)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        // (A X - X A)[r][c] as a linear form in X
        std::vector<Scalar> row(n * n, Scalar(0));
        for (std::size_t k = 0; k < n; ++k) {
          row[k * n + c] += A[r][k];
          row[r * n + k] -= A[k][c];
        }
        eq.push_back(std::move(row));
      }
  std::size_t commutant = n == 0 ? 0 : nullspace(eq, n * n).size();
  simple.samples = 1;
  simple.detail = "commutant dimension " + std::to_string(commutant);
  if (commutant != 1) simple.fail("commutant dimension " + std::to_string(commutant));
  return rep;
}

/// Contragredient module M' on the graded duals M(d)^*. For homogeneous a of
/// weight h,
///   a'_m = e^{i pi h} sum_j (1/j!) ((L(1)^j a)_{2h-m-2-j})^T.
/// The phase is a power of i; `rational_part` returns the sum without it, and
/// checks compare rational parts after dividing out the common phase.
class Contragredient {
 public:
  explicit Contragredient(const TwistedModule& M) : M_(M) {
    if (M.parity() != 0)
      throw std::invalid_argument("contragredient needs a monomial (parity-graded) module");
  }

  const TwistedModule& base() const { return M_; }

  /// Graded pieces are the duals of M's, so dims agree by construction.
  std::vector<std::pair<FracIndex, std::size_t>> graded_dims(const FracIndex& W) const {
    return M_.graded_dims(W);
  }

  /// Twice the weight mod 4: a'_m carries the factor i^{phase(a)}.
  static int phase(const FracIndex& h) {
    std::int64_t t = (h * 2).as_integer();
    return static_cast<int>(((t % 4) + 4) % 4);
  }

  /// Rational part of a'_m : M'(d) -> M'(d + h - m - 1), as a matrix in the
  /// dual bases of the monomial-echelon pieces. Rows index M(d_out) basis,
  /// columns M(d) basis (the dual coordinates).
  Matrix rational_part(const State& a, const FracIndex& h, const FracIndex& m,
                       const FracIndex& d) const {
    FracIndex dout = d + h - m - FracIndex(1);
    auto in = M_.piece(d);
    auto out = dout < FracIndex(0) ? std::vector<State>{} : M_.piece(dout);
    Matrix R = zero_matrix(out.size(), in.size());
    if (out.empty() || in.empty() || a.empty()) return R;
    State omg = conformal_vector(M_.engine().algebra());
    State b = a;
    Scalar fact = 1;
    bool odd = is_odd(a.begin()->first);
    for (std::int64_t j = 0; !b.empty(); ++j) {
      if (j > 0) {
        fact *= j;
        b = self_mode(omg, FracIndex(2), b);
        if (b.empty()) break;
      }
      FracIndex idx = h * 2 - m - FracIndex(2 + j);
      // (b_idx)^T: M'(d) -> M'(dout) is the transpose of b_idx: M(dout) -> M(d)
      for (std::size_t r = 0; r < out.size(); ++r) {
        State img = M_.engine().mode(b, idx, out[r]);
        if (img.empty()) continue;
        auto x = M_.coordinates(d, img);
        if (!x) throw std::runtime_error("contragredient: image outside M(d)");
        for (std::size_t c = 0; c < in.size(); ++c) {
          // super transpose: odd a picks up the parity of the dual vector
          bool flip = odd && is_odd(in[c].begin()->first);
          Scalar v = (*x)[c] / fact;
          R[r][c] += flip ? Scalar(-v) : v;
        }
      }
    }
    return R;
  }

  /// [a'_m, b'_n] = sum_i binom(m,i) (a_i b)'_{m+n-i} on M'(d). With the phase
  /// i^{2h} divided out, the term (a_i b)' carries (-1)^{i+1}.
  std::optional<std::string> check_commutator(const Monomial& a, const FracIndex& m,
                                              const Monomial& b, const FracIndex& n,
                                              const FracIndex& d) const {
    FracIndex ha = weight(a), hb = weight(b);
    FracIndex mid = d + hb - n - FracIndex(1);
    FracIndex mid2 = d + ha - m - FracIndex(1);
    FracIndex dout = d + ha + hb - m - n - FracIndex(2);
    if (dout < FracIndex(0)) return std::nullopt;
    std::size_t rows = M_.piece(dout).size(), cols = M_.piece(d).size();
    Matrix lhs = zero_matrix(rows, cols);
    // an empty middle piece leaves a product without columns; it is zero
    auto accumulate = [&](const Matrix& t, const Scalar& s) {
      for (std::size_t r = 0; r < t.size(); ++r)
        for (std::size_t c = 0; c < t[r].size(); ++c) lhs[r][c] += s * t[r][c];
    };
    if (mid >= FracIndex(0))
      accumulate(multiply(rational_part(State(a), ha, m, mid), rational_part(State(b), hb, n, d)),
                 Scalar(1));
    if (mid2 >= FracIndex(0))
      accumulate(multiply(rational_part(State(b), hb, n, mid2), rational_part(State(a), ha, m, d)),
                 -parity_sign(a, b));
    Matrix rhs = zero_matrix(rows, cols);
    for (std::int64_t i = 0; i <= product_cutoff(a, b); ++i) {
      State ab = self_mode(State(a), FracIndex(i), State(b));
      if (ab.empty()) continue;
      Matrix t = rational_part(ab, ha + hb - FracIndex(i + 1), m + n - FracIndex(i), d);
      Scalar coef = gen_binomial(m, i) * ((i % 2) ? Scalar(1) : Scalar(-1));
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) rhs[r][c] += coef * t[r][c];
    }
    if (lhs == rhs) return std::nullopt;
    return "contragredient commutator a=" + M_.engine().algebra().format(a) + "_{" + m.str() +
           "} b=" + M_.engine().algebra().format(b) + "_{" + n.str() + "} at degree " + d.str();
  }

  /// Mode class of a' on M': the indices m with 2h - m - 2 in the class of a.
  FracIndex mode_class(const Monomial& a) const {
    return (weight(a) * 2 - M_.engine().mode_class(a)).frac();
  }

 private:
  State self_mode(const State& u, const FracIndex& q, const State& v) const {
    if (!self_) self_ = std::make_shared<FieldEngine>(M_.engine().algebra());
    return self_->mode(u, q, v);
  }

  const TwistedModule& M_;
  mutable std::shared_ptr<FieldEngine> self_;
};

}  // namespace vosa

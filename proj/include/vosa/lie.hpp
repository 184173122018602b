#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "vosa/field.hpp"
#include "vosa/linalg.hpp"
#include "vosa/verify.hpp"
#include "vosa/zhu.hpp"

namespace vosa {

/// t^q (x) a for a basis monomial a; q must lie in the mode class of a.
struct ModeSymbol {
  Monomial base;
  FracIndex index;

  friend bool operator==(const ModeSymbol&, const ModeSymbol&) = default;
  friend bool operator<(const ModeSymbol& x, const ModeSymbol& y) {
    if (x.base != y.base) return x.base < y.base;
    return x.index < y.index;
  }
};

/// Elements of L(V,g) (not reduced modulo D); V[g] is compared through module
/// actions and, in degree 0, modulo (L(-1)+L(0))V.
using LieElement = SparseVector<ModeSymbol>;

inline FracIndex degree(const ModeSymbol& x) { return weight(x.base) - x.index - FracIndex(1); }

/// Lifts a state of V to sum of a(q) over its monomials.
inline LieElement lie_element(const State& a, const FracIndex& q) {
  LieElement out;
  for (const auto& [m, c] : a) out.add(ModeSymbol{m, q}, c);
  return out;
}

class LieContext {
 public:
  explicit LieContext(const Sector& module)
      : mod_(module),
        self_(Sector::neveu_schwarz(module.space_ptr())),
        omega_(conformal_vector(mod_.algebra())) {}

  FieldEngine& self() { return self_; }
  FieldEngine& module() { return mod_; }
  const State& omega() const { return omega_; }

  bool valid(const ModeSymbol& x) const { return mod_.index_allowed(x.base, x.index); }

  /// [a(q), b(s)] = sum_i binom(q, i) (a_i b)(q + s - i).
  LieElement bracket(const ModeSymbol& x, const ModeSymbol& y) {
    if (!valid(x) || !valid(y)) throw std::invalid_argument("mode symbol index outside its class");
    LieElement out;
    for (std::int64_t i = 0; i <= product_cutoff(x.base, y.base); ++i) {
      State ab = self_.mode(State(x.base), FracIndex(i), State(y.base));
      if (ab.empty()) continue;
      Scalar c = gen_binomial(x.index, i);
      for (const auto& [m, v] : ab) out.add(ModeSymbol{m, x.index + y.index - FracIndex(i)}, c * v);
    }
    return out;
  }

  LieElement bracket(const LieElement& x, const LieElement& y) {
    LieElement out;
    for (const auto& [a, ca] : x)
      for (const auto& [b, cb] : y) out.add_scaled(bracket(a, b), ca * cb);
    return out;
  }

  /// D(t^q a) = q t^{q-1} a + t^q L(-1)a.
  LieElement D(const ModeSymbol& x) {
    LieElement out;
    out.add(ModeSymbol{x.base, x.index - FracIndex(1)}, x.index.scalar());
    out.add_scaled(lie_element(self_.mode(omega_, FracIndex(0), State(x.base)), x.index),
                   Scalar(1));
    return out;
  }

  /// Action of x on a module state: a(q) -> a_q.
  State act(const LieElement& x, const State& w) {
    State out;
    for (const auto& [s, c] : x) out.add_scaled(mod_.mode(State(s.base), s.index, w), c);
    return out;
  }

  static bool odd(const ModeSymbol& x) { return is_odd(x.base); }

  /// o(a) = a(wt a - 1).
  static ModeSymbol zero_mode_symbol(const Monomial& a) {
    return ModeSymbol{a, weight(a) - FracIndex(1)};
  }

 private:
  FieldEngine mod_;
  FieldEngine self_;
  State omega_;
};

/// Splits an element into its positive, zero and negative degree parts.
struct TriangularSplit {
  LieElement positive, zero, negative;
};

inline TriangularSplit triangular(const LieElement& x) {
  TriangularSplit s;
  for (const auto& [m, c] : x) {
    auto d = degree(m);
    if (d > FracIndex(0)) s.positive.add(m, c);
    else if (d.is_zero()) s.zero.add(m, c);
    else s.negative.add(m, c);
  }
  return s;
}

/// Symbols with base weight <= wmax and |index| <= qmax, in valid classes.
inline std::vector<ModeSymbol> sample_symbols(LieContext& ctx, const FracIndex& wmax,
                                              const FracIndex& qmax) {
  std::vector<ModeSymbol> out;
  for (const auto& a : ctx.module().algebra().enumerate_basis(wmax)) {
    FracIndex c = ctx.module().mode_class(a);
    for (FracIndex q = c - FracIndex((qmax + c).floor()); q <= qmax; q += FracIndex(1))
      if (-qmax <= q) out.push_back(ModeSymbol{a, q});
  }
  return out;
}

/// Identities of V[g] checked exactly.
inline Report verify_lie(LieContext& ctx, const FracIndex& wmax, const FracIndex& qmax,
                         const FracIndex& module_degree) {
  Report rep;
  auto syms = sample_symbols(ctx, wmax, qmax);
  auto& A = ctx.module().algebra();

  // [omega(0), a(q)] = -q a(q-1) modulo D, with D(t^q a) as the exact difference
  auto& virasoro_shift = rep.add("[omega(0), a(q)] + q a(q-1) = D(t^q a)");
  LieElement w0 = lie_element(ctx.omega(), FracIndex(0));
  for (const auto& x : syms) {
    ++virasoro_shift.samples;
    LieElement lhs = ctx.bracket(w0, LieElement(x));
    lhs.add(ModeSymbol{x.base, x.index - FracIndex(1)}, x.index.scalar());
    if (!(lhs == ctx.D(x))) virasoro_shift.fail(A.format(x.base) + "(" + x.index.str() + ")");
  }

  auto& central = rep.add("1(-1) is central");
  ModeSymbol one{Monomial{}, FracIndex(-1)};
  for (const auto& x : syms) {
    ++central.samples;
    if (!ctx.bracket(one, x).empty() || !ctx.bracket(x, one).empty())
      central.fail(A.format(x.base) + "(" + x.index.str() + ")");
  }

  auto& graded = rep.add("bracket respects degree");
  auto& leibniz = rep.add("super Jacobi (Leibniz form, exact)");
  auto& cyclic = rep.add("super Jacobi (cyclic form, on module states)");
  auto& rep_ok = rep.add("a(q) -> a_q is a representation");
  auto states = ctx.module().module().enumerate_basis(module_degree);
  // keep the triple sweep modest: pairs from the first symbols
  std::size_t limit = std::min<std::size_t>(syms.size(), 40);
  for (std::size_t i = 0; i < limit; ++i)
    for (std::size_t j = 0; j < limit; ++j) {
      const auto& x = syms[i];
      const auto& y = syms[j];
      LieElement xy = ctx.bracket(x, y);
      ++graded.samples;
      for (const auto& [m, c] : xy)
        if (degree(m) != degree(x) + degree(y)) graded.fail(A.format(m.base));
      Scalar sxy = (LieContext::odd(x) && LieContext::odd(y)) ? -1 : 1;
      for (const auto& w : states) {
        State ws(w);
        ++rep_ok.samples;
        State lhs = ctx.act(LieElement(x), ctx.act(LieElement(y), ws));
        lhs.add_scaled(ctx.act(LieElement(y), ctx.act(LieElement(x), ws)), -sxy);
        if (!(lhs == ctx.act(xy, ws)))
          rep_ok.fail(A.format(x.base) + "(" + x.index.str() + "), " + A.format(y.base) + "(" +
                      y.index.str() + ") on " + ctx.module().module().format(w));
      }
      std::size_t k = (i * 7 + j * 3) % limit;
      const auto& z = syms[k];
      // [x,[y,z]] = [[x,y],z] + (-1)^{xy} [y,[x,z]]
      ++leibniz.samples;
      LieElement l = ctx.bracket(LieElement(x), ctx.bracket(y, z));
      LieElement r = ctx.bracket(xy, LieElement(z));
      r.add_scaled(ctx.bracket(LieElement(y), ctx.bracket(x, z)), sxy);
      if (!(l == r))
        leibniz.fail(A.format(x.base) + "," + A.format(y.base) + "," + A.format(z.base));
      // (-1)^{xz}[x,[y,z]] + (-1)^{yx}[y,[z,x]] + (-1)^{zy}[z,[x,y]] acting on M
      Scalar sxz = (LieContext::odd(x) && LieContext::odd(z)) ? -1 : 1;
      Scalar syz = (LieContext::odd(y) && LieContext::odd(z)) ? -1 : 1;
      LieElement jac = l * sxz;
      jac.add_scaled(ctx.bracket(LieElement(y), ctx.bracket(z, x)), sxy);
      jac.add_scaled(ctx.bracket(LieElement(z), xy), syz);
      for (const auto& w : states) {
        ++cyclic.samples;
        if (!ctx.act(jac, State(w)).empty())
          cyclic.fail(A.format(x.base) + "," + A.format(y.base) + "," + A.format(z.base));
      }
    }

  auto& kernel = rep.add("o((L(-1)+L(0))a) = 0 on module states");
  for (const auto& a : A.enumerate_basis(wmax)) {
    if (!ctx.module().index_allowed(a, weight(a) - FracIndex(1))) continue;
    State la = ctx.self().mode(ctx.omega(), FracIndex(0), State(a));
    for (const auto& w : states) {
      ++kernel.samples;
      State t = ctx.module().mode(la, weight(a), State(w));
      t.add_scaled(ctx.module().mode(State(a), weight(a) - FracIndex(1), State(w)),
                   weight(a).scalar());
      if (!t.empty()) kernel.fail(A.format(a));
    }
  }
  return rep;
}

/// o(a) -> a + O_g(V) maps [o(a), o(b)] = sum_j binom(wt a - 1, j) o(a_j b) to
/// the super commutator of classes; every basis class is hit by o(rep).
inline Report verify_hom_to_zhu(ZhuContext& ctx, const ZhuResult& res, int m_max = 2) {
  Report rep;
  TruncatedQuotient q(ctx, res.max_weight, res.margin, m_max);
  auto& hom = rep.add("[o(a),o(b)] -> super commutator in A_g(V)");
  const auto& alg = res.algebra;
  for (std::size_t i = 0; i < res.basis.size(); ++i)
    for (std::size_t j = 0; j < res.basis.size(); ++j) {
      const auto& a = res.basis[i];
      const auto& b = res.basis[j];
      ++hom.samples;
      if (!ctx.untwisted(a) || !ctx.untwisted(b)) continue;
      State br;
      for (std::int64_t k = 0; k <= product_cutoff(a, b); ++k)
        br.add_scaled(ctx.self().mode(State(a), FracIndex(k), State(b)),
                      gen_binomial(weight(a) - FracIndex(1), k));
      auto nf = q.normal_form(br);
      auto ab = alg.product(static_cast<int>(i), static_cast<int>(j));
      ab.add_scaled(alg.product(static_cast<int>(j), static_cast<int>(i)), -parity_sign(a, b));
      if (!nf.reduced || !(nf.coords == ab)) hom.fail(res.labels[i] + ", " + res.labels[j]);
    }
  auto& onto = rep.add("o(rep) hits every basis class");
  for (std::size_t i = 0; i < res.basis.size(); ++i) {
    ++onto.samples;
    auto nf = q.normal_form(State(res.basis[i]));
    if (!(nf.coords == TableAlgebra::Vec(static_cast<int>(i)))) onto.fail(res.labels[i]);
  }
  return rep;
}

}  // namespace vosa

#pragma once

#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "vosa/fock.hpp"

namespace vosa {

/// Vertex operators of V = V(H, Z+1/2) acting on a Fock sector M (which may be
/// V itself). The generator state a = a(-1/2)1 acts by a_q = a(q+1/2), so on M
/// its modes live in q in frac(offset(a) - 1/2) + Z.
///
/// Modes of a monomial v = a(-k-1/2) w are computed from the twisted
/// Borcherds identity with u = a, p = -k-1, m = alpha (the class of a):
///
///   (a_p w)_q x = sum_i C(k+i,i) a_{alpha+p-i} w_{q-alpha+i} x
///               + (-1)^{k+|w|} sum_i C(k+i,i) w_{p+q-alpha-i} a_{alpha+i} x
///               - sum_{i>=1} binom(alpha,i) (a_{p+i} w)_{q-i} x
///
/// Every sum is finite by the grading bound, and each recursive call lowers
/// the weight of the state whose modes are taken.
class FieldEngine {
 public:
  explicit FieldEngine(Sector module)
      : module_(std::move(module)), algebra_(Sector::neveu_schwarz(module_.space_ptr())) {}

  const Sector& module() const { return module_; }
  const Sector& algebra() const { return algebra_; }

  /// alpha with v_q defined for q in alpha + Z.
  FracIndex mode_class(int gen) const { return (module_.offset(gen) - kHalf).frac(); }
  FracIndex mode_class(const Monomial& v) const {
    FracIndex s;
    for (const auto& f : v) s += module_.offset(f.gen) - kHalf;
    return s.frac();
  }
  /// Exponent r/T of the g sigma eigenvalue on v.
  FracIndex sigma_class(const Monomial& v) const {
    FracIndex s;
    for (const auto& f : v) s += module_.offset(f.gen);
    return s.frac();
  }

  bool index_allowed(const Monomial& v, const FracIndex& q) const {
    return (q - mode_class(v)).is_integer();
  }

  /// u_q x. Monomials of u whose class does not contain q raise an error.
  State mode(const State& u, const FracIndex& q, const State& x) {
    State out;
    for (const auto& [um, uc] : u) {
      if (!index_allowed(um, q))
        throw std::invalid_argument("mode index " + q.str() + " not in class of " +
                                    algebra_.format(um));
      for (const auto& [xm, xc] : x) out.add_scaled(mode_monomial(um, q, xm), uc * xc);
    }
    return out;
  }

  /// a_q for a generator state a = a(-1/2)1.
  State generator_mode(int gen, const FracIndex& q, const State& x) const {
    return module_.apply(gen, q + kHalf, x);
  }

  std::size_t cache_size() const { return memo_.size(); }
  void clear_cache() { memo_.clear(); }

 private:
  struct Key {
    Monomial v;
    FracIndex q;
    Monomial x;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      MonomialHash h;
      return h(k.v) * 31 + std::hash<FracIndex>{}(k.q) * 1000003u + h(k.x);
    }
  };

  State mode_monomial(const Monomial& v, const FracIndex& q, const Monomial& x) {
    FracIndex deg = weight(x);
    FracIndex wt = weight(v);
    if (deg + wt - q - FracIndex(1) < FracIndex(0)) return {};
    if (v.empty()) return q == FracIndex(-1) ? State(x) : State();
    if (v.size() == 1 && v[0].mode == -kHalf) return module_.apply(v[0].gen, q + kHalf, State(x));

    Key key{v, q, x};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    int a = v.front().gen;
    std::int64_t k = (-v.front().mode - kHalf).as_integer();
    Monomial w(v.begin() + 1, v.end());
    FracIndex wtw = weight(w);
    FracIndex alpha = mode_class(a);
    FracIndex n = q - alpha;
    FracIndex p(-k - 1);
    State xs(x);
    State out;

    for (std::int64_t i = 0; n + FracIndex(i) <= deg + wtw - FracIndex(1); ++i) {
      State t = mode_monomial(w, n + FracIndex(i), x);
      if (t.empty()) continue;
      out.add_scaled(module_.apply(a, alpha + p - FracIndex(i) + kHalf, t),
                     gen_binomial(Scalar(k + i), i));
    }

    Scalar sign = ((k + static_cast<std::int64_t>(w.size())) % 2) ? -1 : 1;
    for (std::int64_t i = 0; alpha + FracIndex(i) + kHalf <= deg; ++i) {
      State ax = module_.apply(a, alpha + FracIndex(i) + kHalf, xs);
      if (ax.empty()) continue;
      State t = mode(State(w), p + n - FracIndex(i), ax);
      out.add_scaled(t, sign * gen_binomial(Scalar(k + i), i));
    }

    if (!alpha.is_zero()) {
      for (std::int64_t i = 1; FracIndex(i - k) - kHalf <= wtw; ++i) {
        State aw = algebra_.apply(a, p + FracIndex(i) + kHalf, State(w));
        if (aw.empty()) continue;
        out.add_scaled(mode(aw, q - FracIndex(i), xs), -gen_binomial(alpha, i));
      }
    }

    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  Sector module_;
  Sector algebra_;
  std::unordered_map<Key, State, KeyHash> memo_;
};

/// omega = 1/2 sum_ij (G^-1)_ij a_i(-3/2) a_j(-1/2) 1.
inline State conformal_vector(const Sector& ns) {
  const auto& inv = ns.space().inverse_gram();
  State omega;
  for (int i = 0; i < ns.size(); ++i)
    for (int j = 0; j < ns.size(); ++j) {
      if (sgn(inv[i][j]) == 0) continue;
      Monomial word{{FracIndex(-3, 2), i}, {-kHalf, j}};
      omega.add_scaled(ns.monomial_state(word), inv[i][j] / 2);
    }
  return omega;
}

/// Generator state a(-1/2)1.
inline State generator_state(int gen) { return State(Monomial{{-kHalf, gen}}); }

/// L(n) = omega_{n+1} on the module of `engine`.
inline State virasoro(FieldEngine& engine, const State& omega, std::int64_t n, const State& x) {
  return engine.mode(omega, FracIndex(n + 1), x);
}

/// Central charge read off from omega_3 omega = (c/2) 1 in V.
inline Scalar central_charge(FieldEngine& self) {
  State omega = conformal_vector(self.algebra());
  State t = self.mode(omega, FracIndex(3), omega);
  return 2 * t.coeff(Monomial{});
}

}  // namespace vosa

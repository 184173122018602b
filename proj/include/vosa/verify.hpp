#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vosa/field.hpp"

namespace vosa {

/// Outcome of one named family of exact checks.
struct Check {
  std::string name;
  bool ok = true;
  std::size_t samples = 0;
  std::string detail;  // first counterexample, or a short summary

  void fail(const std::string& what) {
    if (ok) detail = what;
    ok = false;
  }
};

struct Report {
  std::deque<Check> checks;  // add() hands out references that must stay valid
  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
  Check& add(std::string name) {
    checks.push_back({std::move(name), true, 0, ""});
    return checks.back();
  }
};

inline Scalar parity_sign(const Monomial& u, const Monomial& v) {
  return (is_odd(u) && is_odd(v)) ? Scalar(-1) : Scalar(1);
}

/// Largest integer i with u_i v possibly nonzero in V.
inline std::int64_t product_cutoff(const Monomial& u, const Monomial& v) {
  return (weight(u) + weight(v) - FracIndex(1)).floor();
}

/// u_i v inside V.
inline State product(FieldEngine& self, const State& u, std::int64_t i, const State& v) {
  return self.mode(u, FracIndex(i), v);
}

/// [u_m, v_n] x = sum_i binom(m,i) (u_i v)_{m+n-i} x, with the super sign.
inline std::optional<std::string> check_commutator(FieldEngine& self, FieldEngine& mod,
                                                   const Monomial& u, const FracIndex& m,
                                                   const Monomial& v, const FracIndex& n,
                                                   const State& x) {
  State su(u), sv(v);
  State lhs = mod.mode(su, m, mod.mode(sv, n, x));
  lhs.add_scaled(mod.mode(sv, n, mod.mode(su, m, x)), -parity_sign(u, v));
  State rhs;
  for (std::int64_t i = 0; i <= product_cutoff(u, v); ++i) {
    State uv = product(self, su, i, sv);
    if (uv.empty()) continue;
    rhs.add_scaled(mod.mode(uv, m + n - FracIndex(i), x), gen_binomial(m, i));
  }
  if (lhs == rhs) return std::nullopt;
  const auto& A = self.algebra();
  return "[" + A.format(u) + "_{" + m.str() + "}, " + A.format(v) + "_{" + n.str() + "}] on " +
         mod.module().format(x) + ": lhs " + mod.module().format(lhs) + " rhs " +
         mod.module().format(rhs);
}

/// Samples commutator checks on V-states of weight <= vmax and module states
/// of degree <= xmax; indices are chosen so the outputs stay within the
/// truncation `max_weight`.
inline Check sample_commutators(FieldEngine& self, FieldEngine& mod, const FracIndex& vmax,
                                const FracIndex& xmax, const FracIndex& max_weight,
                                std::size_t count, std::uint32_t seed = 1) {
  Check c{"commutator formula", true, 0, ""};
  auto vb = self.algebra().enumerate_basis(vmax);
  auto xb = mod.module().enumerate_basis(xmax);
  std::mt19937 rng(seed);
  std::size_t attempts = 0;
  while (c.samples < count && attempts < 50 * count) {
    ++attempts;
    const auto& u = vb[rng() % vb.size()];
    const auto& v = vb[rng() % vb.size()];
    const auto& x = xb[rng() % xb.size()];
    FracIndex dx = weight(x);
    // m in class(u) near the region where u_m acts nontrivially
    auto pick = [&](const Monomial& s) {
      FracIndex hi = weight(s) - FracIndex(1) + dx;
      FracIndex base = mod.mode_class(s) + FracIndex(hi.floor() + 1);
      return base - FracIndex(1 + static_cast<std::int64_t>(rng() % 4));
    };
    FracIndex m = pick(u), n = pick(v);
    FracIndex out = dx + weight(u) + weight(v) - m - n - FracIndex(2);
    if (out < FracIndex(0) || out > max_weight) continue;
    if (dx + weight(v) - n - FracIndex(1) > max_weight) continue;
    if (dx + weight(u) - m - FracIndex(1) > max_weight) continue;
    ++c.samples;
    if (auto err = check_commutator(self, mod, u, m, v, n, State(x))) c.fail(*err);
  }
  return c;
}

/// [L(m), L(n)] = (m-n) L(m+n) + c/12 (m^3 - m) delta_{m+n,0} on x.
inline std::optional<std::string> check_virasoro(FieldEngine& mod, const State& omega,
                                                 const Scalar& c, std::int64_t m,
                                                 std::int64_t n, const State& x) {
  State lhs = virasoro(mod, omega, m, virasoro(mod, omega, n, x)) -
              virasoro(mod, omega, n, virasoro(mod, omega, m, x));
  State rhs = virasoro(mod, omega, m + n, x) * Scalar(m - n);
  if (m + n == 0) rhs.add_scaled(x, c * Scalar(m * m * m - m) / 12);
  if (lhs == rhs) return std::nullopt;
  return "[L(" + std::to_string(m) + "),L(" + std::to_string(n) + ")] on " +
         mod.module().format(x);
}

/// (L(-1)v)_n = -n v_{n-1} on x.
inline std::optional<std::string> check_translation(FieldEngine& self, FieldEngine& mod,
                                                    const State& omega, const Monomial& v,
                                                    const FracIndex& n, const State& x) {
  State lv = self.mode(omega, FracIndex(0), State(v));
  State lhs = mod.mode(lv, n, x);
  State rhs = mod.mode(State(v), n - FracIndex(1), x) * (-n.scalar());
  if (lhs == rhs) return std::nullopt;
  return "(L(-1)" + self.algebra().format(v) + ")_{" + n.str() + "} on " + mod.module().format(x);
}

/// Y(u,z)v = (-1)^{uv} e^{zL(-1)} Y(v,-z)u, coefficient of z^{-n-1}.
inline std::optional<std::string> check_skew_symmetry(FieldEngine& self, const State& omega,
                                                      const Monomial& u, const Monomial& v,
                                                      std::int64_t n) {
  State su(u), sv(v);
  State lhs = product(self, su, n, sv);
  State rhs;
  Scalar fact = 1;
  for (std::int64_t j = 0; n + j <= product_cutoff(v, u); ++j) {
    if (j > 0) fact *= j;
    State t = product(self, sv, n + j, su);
    for (std::int64_t r = 0; r < j && !t.empty(); ++r) t = self.mode(omega, FracIndex(0), t);
    Scalar sign = ((n + j + 1) % 2 == 0) ? 1 : -1;
    rhs.add_scaled(t, sign / fact);
  }
  rhs *= parity_sign(u, v);
  if (lhs == rhs) return std::nullopt;
  return "skew symmetry " + self.algebra().format(u) + "_" + std::to_string(n) + " " +
         self.algebra().format(v);
}

/// Smallest beta = k + alpha_u (k >= 0 integral) with u_q w = 0 for q >= beta.
inline FracIndex associativity_exponent(FieldEngine& mod, const Monomial& u, const FracIndex& dw) {
  FracIndex alpha = mod.mode_class(u);
  FracIndex need = weight(u) + dw;
  FracIndex beta = alpha;
  while (beta < need) beta += FracIndex(1);
  return beta;
}

/// The same bound using m + s/T with m in wt u + Z, m >= 0, and s/T the g sigma
/// exponent of u.
inline FracIndex associativity_exponent_sigma(FieldEngine& mod, const Monomial& u,
                                              const FracIndex& dw) {
  FracIndex s = mod.sigma_class(u);
  FracIndex m = weight(u).frac();
  FracIndex need = weight(u) + dw;
  while (m + s < need) m += FracIndex(1);
  return m + s;
}

/// Coefficient of z0^a z2^b in
///   (z0+z2)^beta Y(u,z0+z2) Y(v,z2) w  and  (z2+z0)^beta Y(Y(u,z0)v,z2) w.
inline std::optional<std::string> check_associativity(FieldEngine& self, FieldEngine& mod,
                                                      const Monomial& u, const Monomial& v,
                                                      const Monomial& w, const FracIndex& beta,
                                                      std::int64_t a, const FracIndex& b) {
  State su(u), sv(v), sw(w);
  FracIndex dw = weight(w);
  State lhs;
  // sum_s binom(a+s, s) u_{beta-1-s-a} v_{s-b-1} w
  for (std::int64_t s = 0; FracIndex(s) - b - FracIndex(1) <= weight(v) + dw - FracIndex(1); ++s) {
    State t = mod.mode(sv, FracIndex(s) - b - FracIndex(1), sw);
    if (t.empty()) continue;
    lhs.add_scaled(mod.mode(su, beta - FracIndex(1 + s + a), t), gen_binomial(Scalar(a + s), s));
  }
  State rhs;
  // sum_j binom(beta, j) (u_{j-a-1} v)_{beta-j-b-1} w
  for (std::int64_t j = 0; j - a - 1 <= product_cutoff(u, v); ++j) {
    State uv = product(self, su, j - a - 1, sv);
    if (uv.empty()) continue;
    rhs.add_scaled(mod.mode(uv, beta - FracIndex(j) - b - FracIndex(1), sw), gen_binomial(beta, j));
  }
  if (lhs == rhs) return std::nullopt;
  return "associativity u=" + self.algebra().format(u) + " v=" + self.algebra().format(v) +
         " w=" + mod.module().format(w) + " beta=" + beta.str() + " a=" + std::to_string(a) +
         " b=" + b.str();
}

/// Runs associativity on all (a, b) with output degree <= max_out.
inline void associativity_sweep(Check& c, FieldEngine& self, FieldEngine& mod, const Monomial& u,
                                const Monomial& v, const Monomial& w, const FracIndex& beta,
                                const FracIndex& max_out) {
  FracIndex dw = weight(w);
  FracIndex base = dw + weight(u) + weight(v) - beta;  // output degree minus (a + b)
  FracIndex bclass = -mod.mode_class(v);
  for (std::int64_t a = 0; base + FracIndex(a) <= max_out; ++a) {
    // b ranges over -alpha_v + Z with output degree in [0, max_out]
    FracIndex b = bclass + FracIndex((-(base + FracIndex(a)) - bclass).floor());
    while (base + FracIndex(a) + b < FracIndex(0)) b += FracIndex(1);
    for (; base + FracIndex(a) + b <= max_out; b += FracIndex(1)) {
      ++c.samples;
      if (auto err = check_associativity(self, mod, u, v, w, beta, a, b)) c.fail(*err);
    }
  }
}

}  // namespace vosa

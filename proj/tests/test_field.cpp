#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "vosa/field.hpp"
#include "vosa/modules.hpp"
#include "vosa/verify.hpp"

using namespace vosa;

namespace {

Sector ns(int l) {
  return Sector::neveu_schwarz(std::make_shared<const FermionSpace>(FermionSpace::orthonormal(l)));
}

State gen(int g, const FracIndex& mode) { return State(Monomial{{mode, g}}); }

// u_n for u = a_i(-k1) a_j(-k2) 1 in the NS sector, expanded directly from
//   Y(u,z) = :d^(m1) a_i(z) d^(m2) a_j(z):,  m = k - 1/2,
// with d^(m) a(z) = sum_k binom(-k-1/2, m) a(k) z^{-k-1/2-m} and
// :a(k)b(j): = a(k)b(j) for k < 0, -b(j)a(k) for k > 0.
State quadratic_mode_oracle(const Sector& s, const Factor& f1, const Factor& f2, const FracIndex& n,
                            const State& w, const FracIndex& wmax) {
  std::int64_t m1 = (-f1.mode - kHalf).as_integer();
  std::int64_t m2 = (-f2.mode - kHalf).as_integer();
  FracIndex total = n - FracIndex(m1 + m2);  // k + j
  State out;
  FracIndex bound = wmax + FracIndex(12);
  for (FracIndex k = -bound - kHalf; k <= bound; k += FracIndex(1)) {
    FracIndex j = total - k;
    Scalar c = gen_binomial(-k - kHalf, m1) * gen_binomial(-j - kHalf, m2);
    if (c == 0) continue;
    State t;
    if (k < FracIndex(0)) t = s.apply(f1.gen, k, s.apply(f2.gen, j, w));
    else t = -s.apply(f2.gen, j, s.apply(f1.gen, k, w));
    out.add_scaled(t, c);
  }
  return out;
}

}  // namespace

TEST_CASE("generator modes") {
  Sector s = ns(2);
  State a1 = gen(0, -kHalf);
  CHECK(s.apply(0, kHalf, a1) == vacuum());
  CHECK(s.apply(0, kHalf, gen(1, -kHalf)).empty());
  CHECK(s.apply(0, -kHalf, a1).empty());
  FieldEngine e(s);
  CHECK(e.generator_mode(0, FracIndex(0), a1) == vacuum());
  CHECK_THROWS(s.apply(0, FracIndex(1), a1));
}

TEST_CASE("mode examples") {
  FieldEngine e(ns(1));
  State a = gen(0, -kHalf);
  CHECK(e.mode(a, FracIndex(0), a) == vacuum());
  for (int n = -3; n <= 3; ++n) {
    State x = e.mode(vacuum(), FracIndex(n), a);
    if (n == -1) CHECK(x == a);
    else CHECK(x.empty());
  }
  State omega = conformal_vector(e.algebra());
  CHECK(e.mode(omega, FracIndex(1), a) == a * make_scalar(1, 2));
  CHECK_THROWS(e.mode(a, kHalf, a));
}

TEST_CASE("products with omega") {
  for (int l = 1; l <= 4; ++l) {
    FieldEngine e(ns(l));
    State omega = conformal_vector(e.algebra());
    CHECK(e.mode(omega, FracIndex(0), vacuum()).empty());
    CHECK(e.mode(omega, FracIndex(1), omega) == omega * Scalar(2));
    CHECK(e.mode(omega, FracIndex(3), omega) == vacuum() * make_scalar(l, 4));
    CHECK(central_charge(e) == make_scalar(l, 2));
  }
}

TEST_CASE("L(0) is the weight on V") {
  FieldEngine e(ns(3));
  State omega = conformal_vector(e.algebra());
  for (const auto& m : e.algebra().enumerate_basis(FracIndex(5, 2)))
    REQUIRE(virasoro(e, omega, 0, State(m)) == State(m) * weight(m).scalar());
}

TEST_CASE("twisted ground states have conformal weight l/16") {
  for (int l = 1; l <= 4; ++l) {
    FieldEngine e(sigma_sector(l));
    State omega = conformal_vector(e.algebra());
    for (const auto& g : e.module().enumerate_basis(FracIndex(0)))
      REQUIRE(virasoro(e, omega, 0, State(g)) == State(g) * make_scalar(l, 16));
  }
  FieldEngine tau(twist_sector(parse_twist_table(tau_swap_table())));
  State omega = conformal_vector(tau.algebra());
  CHECK(virasoro(tau, omega, 0, vacuum()) == vacuum() * make_scalar(1, 16));
}

TEST_CASE("quadratic fields agree with the direct normal ordered expansion") {
  Sector s = ns(2);
  FieldEngine e(s);
  auto basis = s.enumerate_basis(FracIndex(2));
  std::vector<Monomial> quads;
  for (const auto& m : s.enumerate_basis(FracIndex(3)))
    if (m.size() == 2) quads.push_back(m);
  std::size_t checked = 0;
  for (const auto& u : quads)
    for (const auto& w : basis)
      for (int k = -3; k <= 4; ++k) {
        FracIndex n(k);
        State got = e.mode(State(u), n, State(w));
        State want = quadratic_mode_oracle(s, u[0], u[1], n, State(w), FracIndex(2));
        INFO(s.format(u) << "_" << k << " on " << s.format(w));
        REQUIRE(got == want);
        if (!got.empty()) ++checked;
      }
  CHECK(checked > 50);
}

TEST_CASE("grading and truncation bounds") {
  std::vector<Sector> sectors = {ns(2), sigma_sector(3),
                                 twist_sector(parse_twist_table(tau_swap_table()))};
  for (const auto& s : sectors) {
    FieldEngine e(s);
    auto vb = e.algebra().enumerate_basis(FracIndex(2));
    auto wb = s.enumerate_basis(FracIndex(3, 2));
    for (const auto& v : vb)
      for (const auto& w : wb) {
        FracIndex top = weight(v) + weight(w) - FracIndex(1);
        FracIndex c = e.mode_class(v);
        FracIndex m = c + FracIndex((top - c).floor()) - FracIndex(2);
        for (int step = 0; step < 6; ++step, m += FracIndex(1)) {
          State x = e.mode(State(v), m, State(w));
          if (m > top) REQUIRE(x.empty());
          for (const auto& [mono, coef] : x) REQUIRE(weight(mono) == weight(w) + weight(v) - m - FracIndex(1));
        }
      }
  }
}

TEST_CASE("mode is linear in u and w") {
  FieldEngine e(sigma_sector(2));
  auto vb = e.algebra().enumerate_basis(FracIndex(2));
  auto wb = e.module().enumerate_basis(FracIndex(1));
  std::mt19937 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto& u1 = vb[rng() % vb.size()];
    const auto& u2 = vb[rng() % vb.size()];
    if (weight(u1) != weight(u2) || e.mode_class(u1) != e.mode_class(u2)) continue;
    State w = State(wb[rng() % wb.size()]) * make_scalar(2, 3);
    w.add(wb[rng() % wb.size()], make_scalar(-5, 7));
    FracIndex m = e.mode_class(u1) + FracIndex(static_cast<int>(rng() % 5) - 3);
    Scalar a = make_scalar(3, 4), b = make_scalar(-1, 5);
    State lhs = e.mode(State(u1) * a + State(u2) * b, m, w);
    State rhs = e.mode(State(u1), m, w) * a + e.mode(State(u2), m, w) * b;
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("commutator formula on every sector") {
  std::vector<Sector> sectors = {ns(2), sigma_sector(1), sigma_sector(2), sigma_sector(3),
                                 twist_sector(parse_twist_table(tau_swap_table()))};
  for (const auto& s : sectors) {
    FieldEngine mod(s);
    FieldEngine self(mod.algebra());
    auto c = sample_commutators(self, mod, FracIndex(3, 2), FracIndex(3, 2), FracIndex(3), 200, 17);
    INFO(s.describe() << ": " << c.detail);
    CHECK(c.samples == 200);
    CHECK(c.ok);
  }
  // u = 1: both sides vanish
  FieldEngine mod(sigma_sector(2));
  FieldEngine self(mod.algebra());
  Monomial b{{-kHalf, 0}};
  for (int k = -2; k <= 2; ++k)
    CHECK_FALSE(check_commutator(self, mod, Monomial{}, FracIndex(k), b,
                                 mod.mode_class(b) + FracIndex(k), State(Monomial{{FracIndex(0), 1}})));
}

TEST_CASE("Virasoro relations and their sensitivity") {
  for (int l = 1; l <= 3; ++l) {
    FieldEngine mod(sigma_sector(l));
    FieldEngine self(mod.algebra());
    State omega = conformal_vector(self.algebra());
    Scalar c = central_charge(self);
    REQUIRE(c == make_scalar(l, 2));
    std::size_t wrong = 0;
    for (const auto& x : mod.module().enumerate_basis(FracIndex(1)))
      for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n) {
          REQUIRE_FALSE(check_virasoro(mod, omega, c, m, n, State(x)));
          if (check_virasoro(mod, omega, c + 1, m, n, State(x))) ++wrong;
        }
    CHECK(wrong > 0);
  }
}

TEST_CASE("translation") {
  FieldEngine e(ns(1));
  State omega = conformal_vector(e.algebra());
  auto xs = e.module().enumerate_basis(FracIndex(3));
  CHECK(e.mode(omega, FracIndex(0), vacuum()).empty());
  for (const auto& x : xs)
    for (int k = -4; k <= 4; ++k) {
      REQUIRE_FALSE(check_translation(e, e, omega, Monomial{}, FracIndex(k), State(x)));
      REQUIRE_FALSE(check_translation(e, e, omega, Monomial{{-kHalf, 0}}, FracIndex(k), State(x)));
      REQUIRE_FALSE(check_translation(e, e, omega, Monomial{{FracIndex(-3, 2), 0}, {-kHalf, 0}},
                                      FracIndex(k), State(x)));
    }
  FieldEngine mod(sigma_sector(2));
  FieldEngine self(mod.algebra());
  omega = conformal_vector(self.algebra());
  for (const auto& v : self.algebra().enumerate_basis(FracIndex(2)))
    for (const auto& x : mod.module().enumerate_basis(FracIndex(1)))
      for (int k = -2; k <= 3; ++k)
        REQUIRE_FALSE(check_translation(self, mod, omega, v, mod.mode_class(v) + FracIndex(k), State(x)));
}

TEST_CASE("associativity with both exponent conventions") {
  FieldEngine mod(sigma_sector(2));
  FieldEngine self(mod.algebra());
  Monomial a{{-kHalf, 0}}, b{{-kHalf, 1}};
  Check c1{"class", true, 0, ""}, c2{"sigma", true, 0, ""};
  for (const auto& u : {a, b})
    for (const auto& v : {a, b})
      for (const auto& w : mod.module().enumerate_basis(FracIndex(0))) {
        associativity_sweep(c1, self, mod, u, v, w, associativity_exponent(mod, u, weight(w)), FracIndex(4));
        associativity_sweep(c2, self, mod, u, v, w, associativity_exponent_sigma(mod, u, weight(w)), FracIndex(4));
      }
  CHECK(c1.ok);
  CHECK(c2.ok);
  CHECK(c1.samples > 50);
  CHECK(c2.samples > 50);

  // u = 1 is trivially associative; an exponent that is too small breaks it
  Check trivial{"unit", true, 0, ""};
  associativity_sweep(trivial, self, mod, Monomial{}, a, Monomial{}, FracIndex(0), FracIndex(3));
  CHECK(trivial.ok);
  std::size_t broken = 0;
  for (const auto& w : mod.module().enumerate_basis(FracIndex(1))) {
    FracIndex beta = associativity_exponent(mod, a, weight(w)) - FracIndex(2);
    Check c{"small", true, 0, ""};
    associativity_sweep(c, self, mod, a, a, w, beta, FracIndex(3));
    if (!c.ok) ++broken;
  }
  CHECK(broken > 0);
}

TEST_CASE("skew symmetry on V") {
  FieldEngine self(ns(2));
  State omega = conformal_vector(self.algebra());
  auto b = self.algebra().enumerate_basis(FracIndex(2));
  for (const auto& u : b)
    for (const auto& v : b)
      for (std::int64_t n = -2; n <= product_cutoff(u, v); ++n)
        REQUIRE_FALSE(check_skew_symmetry(self, omega, u, v, n));
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vosa/field.hpp"
#include "vosa/induce.hpp"
#include "vosa/lie.hpp"
#include "vosa/modules.hpp"
#include "vosa/verify.hpp"
#include "vosa/zhu.hpp"

namespace vosa {

enum class Twist { Identity, Sigma, Tau };

inline Twist parse_twist(const std::string& s) {
  if (s == "id" || s == "identity") return Twist::Identity;
  if (s == "sigma") return Twist::Sigma;
  if (s == "tau") return Twist::Tau;
  throw std::invalid_argument("unknown twist '" + s + "' (expected id, sigma or tau)");
}

inline const char* to_string(Twist t) {
  switch (t) {
    case Twist::Identity: return "id";
    case Twist::Sigma: return "sigma";
    case Twist::Tau: return "tau";
  }
  return "?";
}

/// The sector realizing g-twisted modules together with the simple modules
/// built on it. For g = 1 the module is V itself.
struct Setup {
  Twist twist;
  int l;
  std::string tau_table;
  Sector sector;
  std::vector<TwistedModule> modules;
};

inline Setup make_setup(Twist t, int l, const std::string& tau_table = tau_swap_table()) {
  switch (t) {
    case Twist::Identity: {
      if (l < 1) throw std::invalid_argument("l must be positive");
      auto ns = Sector::neveu_schwarz(std::make_shared<const FermionSpace>(FermionSpace::orthonormal(l)));
      return Setup{t, l, "", ns, {TwistedModule("V", ns)}};
    }
    case Twist::Sigma:
      return Setup{t, l, "", sigma_sector(l), build_sigma_modules(l)};
    case Twist::Tau: {
      auto table = parse_twist_table(tau_table);
      if (static_cast<int>(table.size()) != l)
        throw std::invalid_argument("tau table has " + std::to_string(table.size()) +
                                    " generators but l = " + std::to_string(l));
      return Setup{t, l, tau_table, twist_sector(table), build_tau_modules(table)};
    }
  }
  throw std::logic_error("unreachable");
}

/// Expected dim Omega of each simple module: 2^{floor(l0/2)} with l0 the
/// number of generators carrying zero modes.
inline std::size_t expected_omega_dim(const Setup& s) {
  return std::size_t{1} << (untwisted_rank(s.sector) / 2);
}

struct ZhuRun {
  ZhuResult result;
  std::vector<OmegaSpace> omegas;  // one per module
  Report checks;                   // module action checks when certifying
};

inline ZhuRun run_zhu(Setup& s, const ZhuOptions& opt, bool check_actions) {
  ZhuRun run;
  for (const auto& M : s.modules) run.omegas.push_back(omega(M));
  std::vector<Certifier> certs;
  for (std::size_t i = 0; i < s.modules.size(); ++i)
    certs.push_back(omega_certifier(s.modules[i], run.omegas[i]));
  ZhuContext ctx(s.sector);
  run.result = build_algebra(ctx, opt, certs);
  if (check_actions)
    for (std::size_t i = 0; i < s.modules.size(); ++i) {
      auto r = verify_zhu_action(ctx, run.result, s.modules[i], run.omegas[i]);
      for (auto& c : r.checks) run.checks.checks.push_back(std::move(c));
    }
  return run;
}

inline void merge(Report& into, Report from, const std::string& prefix = {}) {
  for (auto& c : from.checks) {
    if (!prefix.empty()) c.name = prefix + ": " + c.name;
    into.checks.push_back(std::move(c));
  }
}

/// Commutator formula, associativity with both exponents, L(-1)-derivative and
/// skew symmetry.
inline Report suite_jacobi(Setup& s, std::size_t commutator_samples = 200) {
  Report rep;
  FieldEngine mod(s.sector);
  FieldEngine self(mod.algebra());
  State omg = conformal_vector(self.algebra());
  auto c = sample_commutators(self, mod, FracIndex(3, 2), FracIndex(3, 2), FracIndex(3),
                              commutator_samples, 7);
  c.name = "commutator formula (W <= 3)";
  if (c.samples < commutator_samples) c.fail("only " + std::to_string(c.samples) + " samples");
  rep.checks.push_back(c);

  auto vb = self.algebra().enumerate_basis(FracIndex(1));
  auto wb = mod.module().enumerate_basis(FracIndex(1));
  auto& a1 = rep.add("associativity, exponent in class of u");
  auto& a2 = rep.add("associativity, exponent m + s/T with m in wt u + Z");
  for (const auto& u : vb)
    for (const auto& v : vb)
      for (const auto& w : wb) {
        associativity_sweep(a1, self, mod, u, v, w,
                            associativity_exponent(mod, u, weight(w)), FracIndex(2));
        associativity_sweep(a2, self, mod, u, v, w,
                            associativity_exponent_sigma(mod, u, weight(w)), FracIndex(2));
      }

  auto& tr = rep.add("(L(-1)v)_n = -n v_{n-1}");
  for (const auto& v : self.algebra().enumerate_basis(FracIndex(3, 2)))
    for (const auto& x : wb) {
      FracIndex top = weight(v) + weight(x);
      FracIndex n = mod.mode_class(v) + FracIndex((top - mod.mode_class(v)).floor());
      for (int k = 0; k < 4; ++k, n -= FracIndex(1)) {
        if (weight(x) + weight(v) - n > FracIndex(3)) break;
        ++tr.samples;
        if (auto e = check_translation(self, mod, omg, v, n, State(x))) tr.fail(*e);
      }
    }

  auto& sk = rep.add("skew symmetry on V");
  auto b2 = self.algebra().enumerate_basis(FracIndex(2));
  for (const auto& u : b2)
    for (const auto& v : b2)
      for (std::int64_t n = -2; n <= product_cutoff(u, v); ++n) {
        ++sk.samples;
        if (auto e = check_skew_symmetry(self, omg, u, v, n)) sk.fail(*e);
      }
  return rep;
}

/// Virasoro relations on module states of degree <= 2, with c computed from
/// omega_3 omega and compared to l/2.
inline Report suite_virasoro(Setup& s, Scalar* central = nullptr) {
  Report rep;
  FieldEngine mod(s.sector);
  FieldEngine self(mod.algebra());
  State omg = conformal_vector(self.algebra());
  Scalar c = central_charge(self);
  if (central) *central = c;
  auto& cc = rep.add("central charge = l/2");
  cc.samples = 1;
  cc.detail = "c = " + c.get_str();
  if (c != make_scalar(s.l, 2)) cc.fail("c = " + c.get_str());
  auto& vir = rep.add("[L(m),L(n)] = (m-n)L(m+n) + c/12 (m^3-m) delta");
  for (auto* e : {&self, &mod})
    for (const auto& x : e->module().enumerate_basis(FracIndex(3, 2)))
      for (std::int64_t m = -2; m <= 2; ++m)
        for (std::int64_t n = -2; n <= 2; ++n) {
          if (weight(x) - FracIndex(m + n) > FracIndex(3)) continue;
          ++vir.samples;
          if (auto err = check_virasoro(*e, omg, c, m, n, State(x))) vir.fail(*err);
        }
  return rep;
}

/// Omega of every module: dimension, agreement with the all-fields definition,
/// Omega = M(0), J-invariance of the split pieces and the contragredient
/// commutator formula.
inline Report suite_omega(Setup& s, std::vector<std::size_t>* dims = nullptr) {
  Report rep;
  std::size_t expect = expected_omega_dim(s);
  for (const auto& M : s.modules) {
    auto om = omega(M);
    if (dims) dims->push_back(om.dim());
    auto& d = rep.add("dim Omega(" + M.name() + ") = 2^k");
    d.samples = 1;
    d.detail = std::to_string(om.dim());
    if (om.dim() != expect)
      d.fail(std::to_string(om.dim()) + ", expected " + std::to_string(expect));
    auto& all = rep.add("Omega(" + M.name() + ") from all fields of weight <= 2");
    all.samples = 1;
    auto om2 = omega(M, FracIndex(1), all_fields(M.engine().algebra()));
    if (om2.dim() != om.dim()) all.fail(std::to_string(om2.dim()));
    auto& low = rep.add("Omega(" + M.name() + ") = M(0)");
    low.samples = 1;
    bool at_zero = true;
    for (const auto& deg : om.degree) at_zero = at_zero && deg.is_zero();
    if (!at_zero || om.dim() != M.piece(FracIndex(0)).size()) low.fail("degrees differ");
    if (M.parity() != 0) {
      auto& inv = rep.add(M.name() + " invariant under all generator modes");
      auto& eng = M.engine();
      for (const auto& d0 : M.degrees(FracIndex(3, 2)))
        for (const auto& w : M.piece(d0))
          for (int g = 0; g < M.sector().size(); ++g)
            for (FracIndex n = M.sector().offset(g) - FracIndex(2); n <= FracIndex(2); n += FracIndex(1)) {
              FracIndex out = d0 - n;
              if (out < FracIndex(0) || out > FracIndex(2)) continue;
              ++inv.samples;
              State img = eng.generator_mode(g, n - kHalf, w);
              if (img.empty()) continue;
              if (!M.coordinates(out, img)) inv.fail(M.sector().format(w));
            }
    }
  }
  // contragredient on the full (parity 0) sector
  TwistedModule full("M", s.sector);
  Contragredient dual(full);
  auto& cg = rep.add("contragredient commutator formula");
  auto& eng = full.engine();
  auto vb = eng.algebra().enumerate_basis(FracIndex(1));
  for (const auto& a : vb)
    for (const auto& b : vb) {
      if (a.empty() || b.empty()) continue;
      for (const auto& d : full.degrees(FracIndex(1))) {
        FracIndex ca = dual.mode_class(a), cb = dual.mode_class(b);
        for (FracIndex m = ca - FracIndex(1); m <= ca + FracIndex(1); m += FracIndex(1))
          for (FracIndex n = cb - FracIndex(1); n <= cb + FracIndex(1); n += FracIndex(1)) {
            FracIndex out = d + weight(a) + weight(b) - m - n - FracIndex(2);
            if (out < FracIndex(0) || out > FracIndex(2)) continue;
            ++cg.samples;
            if (auto e = dual.check_commutator(a, m, b, n, d)) cg.fail(*e);
          }
      }
    }
  return rep;
}

/// Associativity, unit and central omega on the full table, certification,
/// residue classes and the Omega actions.
inline Report suite_zhu_axioms(Setup& s, const ZhuOptions& opt) {
  Report rep;
  auto run = run_zhu(s, opt, true);
  const auto& r = run.result;
  auto flag = [&](const std::string& name, bool ok, const std::string& why) {
    auto& c = rep.add(name);
    c.samples = 1;
    if (!ok) c.fail(why);
  };
  flag("table associative", r.associative, r.notes.empty() ? "" : r.notes.front());
  flag("1 is the unit", r.unital, "1 + O_g is not a unit");
  flag("omega is central", r.omega_central, "omega + O_g not central");
  flag("dimension certified", r.certified,
       "upper " + std::to_string(r.dim_upper) + " lower " +
           (r.dim_lower ? std::to_string(*r.dim_lower) : std::string("?")));
  ZhuContext ctx(s.sector);
  TruncatedQuotient q(ctx, opt.max_weight, opt.margin, opt.m_max);
  merge(rep, verify_residue_classes(ctx, q, opt.max_weight));
  std::vector<Monomial> twisted;
  for (const auto& u : ctx.algebra().enumerate_basis(opt.max_weight))
    if (!ctx.untwisted(u)) twisted.push_back(u);
  if (!twisted.empty()) {  // none when g sigma = 1
    auto& tw = rep.add("u *_g v = 0 for twisted u");
    for (const auto& u : twisted) {
      ++tw.samples;
      if (!ctx.star(u, vacuum()).empty()) tw.fail(ctx.algebra().format(u));
    }
  }
  merge(rep, run.checks);
  return rep;
}

/// V[g] identities and the map o(a) -> a + O_g(V).
inline Report suite_lie(Setup& s, const ZhuOptions& opt) {
  Report rep;
  LieContext lc(s.sector);
  merge(rep, verify_lie(lc, FracIndex(2), FracIndex(5, 2), FracIndex(1)));
  ZhuContext ctx(s.sector);
  auto r = build_algebra(ctx, opt);
  merge(rep, verify_hom_to_zhu(ctx, r, opt.m_max));
  return rep;
}

}  // namespace vosa

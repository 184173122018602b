// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "vosa/vosa.hpp"

using namespace vosa;

namespace {

struct Line {
  bool ok = true;
  std::ostringstream why;
  void require(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      why << " [" << msg << "]";
    }
  }
};

std::string blocks_str(const std::vector<int>& b) {
  std::string s = "[";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
  return s + "]";
}

ZhuOptions opts(const FracIndex& W, const FracIndex& margin = FracIndex(2)) {
  ZhuOptions o;
  o.max_weight = W;
  o.margin = margin;
  return o;
}

void zhu_case(Line& line, std::ostringstream& info, int l, const FracIndex& W, std::size_t dim,
              const std::vector<int>& blocks) {
  auto setup = make_setup(Twist::Sigma, l);
  auto run = run_zhu(setup, opts(W), true);
  const auto& r = run.result;
  info << " l=" << l << ": dim " << r.dim_upper << " blocks " << blocks_str(r.blocks)
       << (r.certified ? " certified" : " uncertified") << ";";
  std::string tag = "l=" + std::to_string(l);
  line.require(r.dim_upper == dim, tag + " dim");
  line.require(r.dim_lower && *r.dim_lower == dim, tag + " lower bound");
  line.require(r.blocks == blocks, tag + " blocks");
  line.require(r.certified && run.checks.ok(), tag + " certification");
}

void report(const char* id, const char* title, Line& line, const std::ostringstream& info) {
  std::cout << (line.ok ? "PASS " : "FAIL ") << id << " " << title << ":" << info.str()
            << line.why.str() << "\n";
}

void failed_checks(Line& line, const std::string& prefix, const Report& rep) {
  for (const auto& c : rep.checks) {
    line.require(c.ok, prefix + ": " + c.name + " " + c.detail);
    line.require(c.samples > 0, prefix + ": " + c.name + " has no samples");
  }
}

std::size_t sample_count(const Report& rep) {
  std::size_t n = 0;
  for (const auto& c : rep.checks) n += c.samples;
  return n;
}

}  // namespace

int main() {
  bool all = true;
  auto guard = [&](const char* id, const char* title, auto body) {
    Line line;
    std::ostringstream info;
    try {
      body(line, info);
    } catch (const std::exception& e) {
      line.require(false, std::string("exception: ") + e.what());
    }
    report(id, title, line, info);
    all = all && line.ok;
  };

  guard("AC1", "A_sigma(V) = M_{2^k} for even l", [](Line& line, std::ostringstream& info) {
    zhu_case(line, info, 2, FracIndex(2), 4, {2});
    zhu_case(line, info, 4, FracIndex(5, 2), 16, {4});
  });

  guard("AC2", "A_sigma(V) = M_{2^k} + M_{2^k} for odd l", [](Line& line, std::ostringstream& info) {
    zhu_case(line, info, 1, FracIndex(2), 2, {1, 1});
    zhu_case(line, info, 3, FracIndex(2), 8, {2, 2});
  });

  guard("AC3", "A(V) = C for g = 1", [](Line& line, std::ostringstream& info) {
    for (int l = 1; l <= 3; ++l) {
      auto setup = make_setup(Twist::Identity, l);
      auto r = run_zhu(setup, opts(FracIndex(2)), true).result;
      ZhuContext ctx(setup.sector);
      TruncatedQuotient q(ctx, FracIndex(2), FracIndex(2), 2);
      std::size_t odd = 0, killed = 0;
      for (const auto& m : ctx.algebra().enumerate_basis(FracIndex(2))) {
        if (!is_odd(m)) continue;
        ++odd;
        auto nf = q.normal_form(State(m));
        if (nf.reduced && nf.coords.empty()) ++killed;
      }
      info << " l=" << l << ": dim " << r.dim_upper << ", " << killed << "/" << odd
           << " odd states in O(V);";
      std::string tag = "l=" + std::to_string(l);
      line.require(r.dim_upper == 1 && r.certified, tag + " dim 1 certified");
      line.require(odd > 0 && killed == odd, tag + " odd states vanish");
    }
  });

  guard("AC4", "dim Omega(V(H,Z)) = 2^k and Omega = M(0)", [](Line& line, std::ostringstream& info) {
    for (int l : {2, 4}) {
      auto M = build_sigma_modules(l)[0];
      auto om = omega(M);
      std::size_t m0 = M.piece(FracIndex(0)).size();
      bool at_zero = true;
      for (const auto& d : om.degree) at_zero = at_zero && d.is_zero();
      bool inside = true;
      for (const auto& b : om.basis) inside = inside && M.coordinates(FracIndex(0), b).has_value();
      info << " l=" << l << ": dim Omega " << om.dim() << ", dim M(0) " << m0 << ";";
      std::string tag = "l=" + std::to_string(l);
      line.require(om.dim() == (std::size_t{1} << (l / 2)), tag + " dim 2^k");
      line.require(at_zero && inside && om.dim() == m0, tag + " Omega = M(0)");
    }
  });

  guard("AC5", "tau swapping the polarized pair, l = 2", [](Line& line, std::ostringstream& info) {
    auto setup = make_setup(Twist::Tau, 2);
    int l0 = untwisted_rank(setup.sector);
    std::size_t expect_dim = std::size_t{1} << (l0 / 2);
    std::size_t expect_blocks = l0 % 2 ? 2 : 1;
    auto run = run_zhu(setup, opts(FracIndex(2)), true);
    const auto& r = run.result;
    info << " l0=" << l0 << ", modules";
    for (std::size_t i = 0; i < setup.modules.size(); ++i)
      info << " " << setup.modules[i].name() << " dim Omega " << run.omegas[i].dim();
    info << "; dim A_tau " << r.dim_upper << " (lower "
         << (r.dim_lower ? std::to_string(*r.dim_lower) : std::string("?")) << ") blocks "
         << blocks_str(r.blocks) << ", certification: "
         << (r.certified && run.checks.ok() ? "certified" : "not certified") << ";";
    line.require(setup.modules.size() == expect_blocks, "module count");
    for (const auto& om : run.omegas) line.require(om.dim() == expect_dim, "dim Omega = 2^{k0}");
    line.require(r.blocks.size() == expect_blocks, "block count");
  });

  guard("AC6", "identity suites", [](Line& line, std::ostringstream& info) {
    std::vector<std::pair<Twist, int>> cases = {
        {Twist::Identity, 2}, {Twist::Sigma, 1}, {Twist::Sigma, 2}, {Twist::Sigma, 3}, {Twist::Tau, 2}};
    std::size_t total = 0;
    for (auto [t, l] : cases) {
      auto setup = make_setup(t, l);
      std::string tag = std::string(to_string(t)) + " l=" + std::to_string(l);
      Report jac = suite_jacobi(setup, 200);
      Scalar c;
      Report vir = suite_virasoro(setup, &c);
      line.require(c == make_scalar(l, 2), tag + " c = l/2");
      Report ax = suite_zhu_axioms(setup, opts(FracIndex(2)));
      Report lie = suite_lie(setup, opts(FracIndex(2)));
      failed_checks(line, tag, jac);
      failed_checks(line, tag, vir);
      failed_checks(line, tag, ax);
      failed_checks(line, tag, lie);
      total += sample_count(jac) + sample_count(vir) + sample_count(ax) + sample_count(lie);
      if (t != Twist::Identity) {
        Report om = suite_omega(setup);
        failed_checks(line, tag, om);
        total += sample_count(om);
      }
    }
    info << " " << cases.size() << " configurations, " << total << " exact checks;";
  });

  guard("AC7", "truncated Verma module for sigma, l = 2", [](Line& line, std::ostringstream& info) {
    auto M = build_sigma_modules(2)[0];
    auto om = omega(M);
    FracIndex W(3, 2);
    InducedModule L(M.sector(), zero_mode_rep(M, om), W);
    auto got = L.graded_dims();
    auto want = M.graded_dims(W);
    info << " L(U) dims";
    for (const auto& [d, n] : got) info << " " << d.str() << ":" << n;
    info << ", V(H,Z) dims";
    for (const auto& [d, n] : want) info << " " << d.str() << ":" << n;
    std::size_t singular = 0;
    for (const auto& d : L.degrees())
      if (!d.is_zero()) singular += L.singular_dim(d);
    info << "; Omega(L(U)) = degree 0 of dim " << L.dim(FracIndex(0)) << ", " << singular
         << " singular vectors above;";
    line.require(L.consistent(), "U satisfies the zero-mode relations");
    line.require(got == want, "graded dims");
    line.require(L.dim(FracIndex(0)) == om.dim(), "L(U)(0) = U");
    line.require(singular == 0, "no lowest weight vectors above degree 0");
  });

  return all ? 0 : 1;
}

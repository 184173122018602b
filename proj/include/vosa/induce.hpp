#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vosa/fock.hpp"
#include "vosa/linalg.hpp"
#include "vosa/modules.hpp"
#include "vosa/zhu.hpp"

namespace vosa {

/// A module U for the degree-0 modes: rho[g] is the matrix of x_g(0) for every
/// generator g whose modes include 0, empty for the others.
struct ZeroModeRep {
  std::string name;
  std::size_t dim = 0;
  std::vector<Matrix> rho;
};

/// U = Omega(M) with x(0) acting as o(x(-1/2)1).
inline ZeroModeRep zero_mode_rep(const TwistedModule& M, const OmegaSpace& om) {
  ZeroModeRep U{"Omega(" + M.name() + ")", om.dim(), {}};
  const Sector& s = M.sector();
  for (int g = 0; g < s.size(); ++g)
    U.rho.push_back(s.offset(g).is_zero() ? omega_action(M, om, generator_state(g)) : Matrix{});
  return U;
}

/// U = A_g(V) itself, x(0) acting by left multiplication with the class of x.
inline ZeroModeRep regular_rep(ZhuContext& ctx, const ZhuResult& res, int m_max = 2) {
  TruncatedQuotient q(ctx, res.max_weight, res.margin, m_max);
  ZeroModeRep U{"A_g(V)", res.basis.size(), {}};
  const Sector& s = ctx.module();
  for (int g = 0; g < s.size(); ++g) {
    if (!s.offset(g).is_zero()) {
      U.rho.emplace_back();
      continue;
    }
    auto nf = q.normal_form(generator_state(g));
    if (!nf.reduced) throw std::runtime_error("generator class outside the truncation");
    U.rho.push_back(res.algebra.left_matrix(nf.coords));
  }
  return U;
}

/// Truncation of M(U) = Lambda[x(n), n < 0] (x) U and of its irreducible
/// quotient L(U). Creation modes multiply, positive modes contract and kill U,
/// and x(0) acts as (-1)^{|mono|} mono (x) rho(x) u.
///
/// Degree 0 of the induced module is U modulo the closure of the Clifford
/// relations rho(x)rho(y) + rho(y)rho(x) - (x,y) under the rho's; a nonzero
/// closure means U is not a module for the zero modes. J(d) is the kernel of
/// w -> (x(n) w in L(d - n))_{x, 0 < n <= d}.
class InducedModule {
 public:
  InducedModule(const Sector& sector, ZeroModeRep U, const FracIndex& W)
      : sector_(sector), U_(std::move(U)), W_(W) {
    if (static_cast<int>(U_.rho.size()) != sector_.size())
      throw std::invalid_argument("zero-mode representation needs one entry per generator");
    for (int g = 0; g < sector_.size(); ++g) {
      bool zero = sector_.offset(g).is_zero();
      if (zero && (U_.rho[g].size() != U_.dim ||
                   (U_.dim > 0 && U_.rho[g][0].size() != U_.dim)))
        throw std::invalid_argument("rho(" + sector_.space().label(g) + ") has the wrong shape");
    }
    enumerate();
    build_relations();
    build_quotients();
  }

  const ZeroModeRep& U() const { return U_; }
  const std::vector<FracIndex>& degrees() const { return degrees_; }
  bool consistent() const { return relation_rank_ == 0; }
  std::size_t relation_rank() const { return relation_rank_; }

  std::size_t verma_dim(const FracIndex& d) const { return monos_.at(d).size() * U_.dim; }
  std::size_t dim(const FracIndex& d) const { return quotient_.at(d).size(); }

  std::vector<std::pair<FracIndex, std::size_t>> graded_dims() const {
    std::vector<std::pair<FracIndex, std::size_t>> out;
    for (const auto& d : degrees_) out.emplace_back(d, dim(d));
    return out;
  }
  std::vector<std::pair<FracIndex, std::size_t>> verma_dims() const {
    std::vector<std::pair<FracIndex, std::size_t>> out;
    for (const auto& d : degrees_) out.emplace_back(d, verma_dim(d));
    return out;
  }

  /// Matrix of x_g(n): M(d) -> M(d - n); empty when d - n is outside the
  /// truncation or negative.
  Matrix mode_matrix(int g, const FracIndex& n, const FracIndex& d) const {
    if (!sector_.in_support(g, n)) throw std::invalid_argument("mode outside sector support");
    FracIndex out = d - n;
    const auto& in = monos_.at(d);
    auto it = monos_.find(out);
    std::size_t rows = it == monos_.end() ? 0 : it->second.size() * U_.dim;
    Matrix A = zero_matrix(rows, in.size() * U_.dim);
    if (rows == 0) return A;
    const auto& target = index_.at(out);
    for (std::size_t j = 0; j < in.size(); ++j) {
      const Monomial& m = in[j];
      if (n < FracIndex(0)) {
        Monomial w = m;
        w.insert(w.begin(), Factor{n, g});
        auto nm = normalize(w);
        if (!nm) continue;
        std::size_t r = target.at(nm->first);
        for (std::size_t u = 0; u < U_.dim; ++u) A[r * U_.dim + u][j * U_.dim + u] += nm->second;
      } else if (n.is_zero()) {
        Scalar sign = is_odd(m) ? -1 : 1;
        std::size_t r = target.at(m);
        for (std::size_t u = 0; u < U_.dim; ++u)
          for (std::size_t v = 0; v < U_.dim; ++v)
            A[r * U_.dim + v][j * U_.dim + u] += sign * U_.rho[g][v][u];
      } else {
        // x(n) y(-n) contracts to (x,y); moving past i factors costs (-1)^i
        for (std::size_t i = 0; i < m.size(); ++i) {
          if (m[i].mode != -n) continue;
          const Scalar& p = sector_.space().pairing(g, m[i].gen);
          if (sgn(p) == 0) continue;
          Monomial w = m;
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
          std::size_t r = target.at(w);
          Scalar c = (i % 2) ? Scalar(-p) : p;
          for (std::size_t u = 0; u < U_.dim; ++u) A[r * U_.dim + u][j * U_.dim + u] += c;
        }
      }
    }
    return A;
  }

  /// Rows of the quotient map M(d) -> L(d).
  const Matrix& quotient(const FracIndex& d) const { return quotient_.at(d); }

  /// Lowest weight vectors of L(U) above degree 0 (should be none): the dimension
  /// of the common kernel of the lowering modes on L(d), computed on the lifts
  /// of a basis of L(d).
  std::size_t singular_dim(const FracIndex& d) const {
    const Matrix& Q = quotient_.at(d);
    if (Q.empty()) return 0;
    Matrix R = Q;
    auto piv = rref(R);
    Matrix stacked;
    for (const auto& [g, n] : lowering(d)) {
      Matrix t = multiply(quotient_.at(d - n), mode_matrix(g, n, d));
      for (auto& row : t) {
        std::vector<Scalar> r;
        for (auto p : piv) r.push_back(row[p]);
        stacked.push_back(std::move(r));
      }
    }
    if (stacked.empty()) return piv.size();
    return nullspace(stacked, piv.size()).size();
  }

 private:
  void enumerate() {
    std::vector<Factor> fs;
    for (int g = 0; g < sector_.size(); ++g) {
      FracIndex n = sector_.offset(g) - FracIndex(1);
      for (; -n <= W_; n -= FracIndex(1)) fs.push_back({n, g});
    }
    std::sort(fs.begin(), fs.end());
    Monomial cur;
    std::function<void(std::size_t, FracIndex)> rec = [&](std::size_t start, FracIndex w) {
      monos_[w].push_back(cur);
      for (std::size_t i = start; i < fs.size(); ++i) {
        FracIndex nw = w - fs[i].mode;
        if (nw > W_) continue;
        cur.push_back(fs[i]);
        rec(i + 1, nw);
        cur.pop_back();
      }
    };
    rec(0, FracIndex(0));
    for (auto& [d, ms] : monos_) {
      std::sort(ms.begin(), ms.end());
      degrees_.push_back(d);
      auto& idx = index_[d];
      for (std::size_t i = 0; i < ms.size(); ++i) idx.emplace(ms[i], i);
    }
  }

  void build_relations() {
    std::size_t n = U_.dim;
    std::vector<int> zero;
    for (int g = 0; g < sector_.size(); ++g)
      if (sector_.offset(g).is_zero()) zero.push_back(g);
    Matrix R;
    for (int x : zero)
      for (int y : zero) {
        Matrix a = multiply(U_.rho[x], U_.rho[y]);
        Matrix b = multiply(U_.rho[y], U_.rho[x]);
        for (std::size_t u = 0; u < n; ++u) {
          std::vector<Scalar> col(n);
          bool nz = false;
          for (std::size_t r = 0; r < n; ++r) {
            col[r] = a[r][u] + b[r][u] - (r == u ? sector_.space().pairing(x, y) : Scalar(0));
            nz = nz || sgn(col[r]) != 0;
          }
          if (nz) R.push_back(std::move(col));
        }
      }
    // close under the rho's
    std::size_t rk = R.empty() ? 0 : rank(R);
    while (rk > 0) {
      Matrix next = R;
      for (int x : zero)
        for (const auto& v : R) {
          std::vector<Scalar> w(n, Scalar(0));
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) w[r] += U_.rho[x][r][c] * v[c];
          next.push_back(std::move(w));
        }
      std::size_t nr = rank(next);
      R = std::move(next);
      if (nr == rk) break;
      rk = nr;
    }
    relation_rank_ = rk;
    if (rk == 0) {
      quotient_[FracIndex(0)] = identity_matrix(n);
    } else {
      Matrix q;
      for (auto& v : nullspace(R, n)) q.push_back(std::move(v));
      quotient_[FracIndex(0)] = std::move(q);
    }
  }

  std::vector<std::pair<int, FracIndex>> lowering(const FracIndex& d) const {
    std::vector<std::pair<int, FracIndex>> out;
    for (int g = 0; g < sector_.size(); ++g) {
      FracIndex n = sector_.offset(g).is_zero() ? FracIndex(1) : sector_.offset(g);
      for (; n <= d; n += FracIndex(1))
        if (monos_.count(d - n)) out.emplace_back(g, n);
    }
    return out;
  }

  void build_quotients() {
    for (const auto& d : degrees_) {
      if (d.is_zero()) continue;
      Matrix S;
      for (const auto& [g, n] : lowering(d)) {
        const Matrix& Q = quotient_.at(d - n);
        if (Q.empty()) continue;
        for (auto& row : multiply(Q, mode_matrix(g, n, d))) S.push_back(std::move(row));
      }
      Matrix q;
      if (!S.empty()) {
        auto piv = rref(S);
        for (std::size_t i = 0; i < piv.size(); ++i) q.push_back(S[i]);
      }
      quotient_[d] = std::move(q);
    }
  }

  Sector sector_;
  ZeroModeRep U_;
  FracIndex W_;
  std::vector<FracIndex> degrees_;
  std::map<FracIndex, std::vector<Monomial>> monos_;
  std::map<FracIndex, std::map<Monomial, std::size_t>> index_;
  std::map<FracIndex, Matrix> quotient_;
  std::size_t relation_rank_ = 0;
};

}  // namespace vosa

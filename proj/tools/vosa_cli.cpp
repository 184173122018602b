// vosa: twisted Zhu algebras of free fermion vertex operator superalgebras.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vosa/vosa.hpp"

using json = nlohmann::ordered_json;
using namespace vosa;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kUncertified = 2;

struct RunConfig {
  int l = 2;
  std::string twist = "id";
  std::string tau_table = tau_swap_table();
  std::string max_weight = "2";
  std::string margin = "2";
  int m_max = 2;
  bool certify = false;
  bool regular = false;
  std::string suite;
  std::string cache_dir;
  std::string output;
  std::string format = "json";
};

struct Outcome {
  json body;
  int code = kOk;
};

FracIndex half_integer(const std::string& text, const char* what) {
  FracIndex w = FracIndex::parse(text);
  if (w < FracIndex(0) || !(w * 2).is_integer())
    throw std::invalid_argument(std::string(what) + " must be a nonnegative multiple of 1/2, got " + text);
  return w;
}

json config_json(const RunConfig& c) {
  json j;
  j["l"] = c.l;
  j["twist"] = c.twist;
  if (c.twist == "tau") j["tau_table"] = c.tau_table;
  j["max_weight"] = half_integer(c.max_weight, "max-weight").str();
  return j;
}

json checks_json(const Report& r) {
  json a = json::array();
  for (const auto& c : r.checks)
    a.push_back({{"name", c.name}, {"ok", c.ok}, {"samples", c.samples}, {"detail", c.detail}});
  return a;
}

ZhuOptions zhu_options(const RunConfig& c) {
  ZhuOptions o;
  o.max_weight = half_integer(c.max_weight, "max-weight");
  o.margin = half_integer(c.margin, "margin");
  o.m_max = c.m_max;
  if (o.m_max < 0) throw std::invalid_argument("m-max must be nonnegative");
  return o;
}

Outcome cmd_zhu(const RunConfig& c) {
  Setup s = make_setup(parse_twist(c.twist), c.l, c.tau_table);
  ZhuOptions opt = zhu_options(c);
  Cache cache(c.cache_dir);
  std::string key = Cache::key("zhu", s.sector.describe() + "|" + opt.max_weight.str() + "|" +
                                          opt.margin.str() + "|" + std::to_string(opt.m_max) +
                                          "|" + (c.certify ? "certify" : "plain"));
  if (auto text = cache.load(key)) {
    json j = json::parse(*text, nullptr, false);
    if (!j.is_discarded() && j.value("schema", "") == "vosa-zhu/1") {
      bool ok = j["certified"].get<bool>();
      return {j, ok ? kOk : kUncertified};
    }
  }

  ZhuRun run = run_zhu(s, opt, c.certify);
  const ZhuResult& r = run.result;
  bool certified = r.certified && run.checks.ok();
  json j;
  j["schema"] = "vosa-zhu/1";
  json cfg = config_json(c);
  cfg["margin"] = opt.margin.str();
  cfg["m_max"] = opt.m_max;
  cfg["certify"] = c.certify;
  j["config"] = cfg;
  j["dim"] = r.dim_upper;
  j["certified"] = certified;
  j["dim_upper"] = r.dim_upper;
  j["dim_upper_next"] = r.dim_upper_next ? json(*r.dim_upper_next) : json(nullptr);
  j["dim_lower"] = r.dim_lower ? json(*r.dim_lower) : json(nullptr);
  j["stabilized"] = r.stabilized;
  j["reduced"] = r.reduced;
  j["associative"] = r.associative;
  j["unital"] = r.unital;
  j["omega_central"] = r.omega_central;
  j["center_dim"] = r.center_dim;
  j["semisimple"] = r.semisimple;
  j["blocks"] = r.blocks;
  j["basis_labels"] = r.labels;
  json sc = json::array();
  for (std::size_t i = 0; i < r.basis.size(); ++i)
    for (std::size_t k = 0; k < r.basis.size(); ++k)
      for (const auto& [t, v] : r.algebra.product(static_cast<int>(i), static_cast<int>(k)))
        sc.push_back({i, k, t, v.get_str()});
  j["structure_constants"] = sc;
  json mods = json::array();
  for (std::size_t i = 0; i < s.modules.size(); ++i)
    mods.push_back({{"name", s.modules[i].name()}, {"omega_dim", run.omegas[i].dim()}});
  j["modules"] = mods;
  j["relations"] = r.relations;
  if (c.certify) j["checks"] = checks_json(run.checks);
  j["notes"] = r.notes;
  cache.store(key, j.dump(2));
  return {j, certified ? kOk : kUncertified};
}

Outcome cmd_verify(const RunConfig& c) {
  Setup s = make_setup(parse_twist(c.twist), c.l, c.tau_table);
  json j;
  j["schema"] = "vosa-verify/1";
  j["suite"] = c.suite;
  j["config"] = config_json(c);
  Report rep;
  if (c.suite == "jacobi") {
    rep = suite_jacobi(s);
  } else if (c.suite == "virasoro") {
    Scalar central;
    rep = suite_virasoro(s, &central);
    j["central_charge"] = central.get_str();
  } else if (c.suite == "zhu-axioms") {
    rep = suite_zhu_axioms(s, zhu_options(c));
  } else if (c.suite == "lie") {
    rep = suite_lie(s, zhu_options(c));
  } else if (c.suite == "omega") {
    std::vector<std::size_t> dims;
    rep = suite_omega(s, &dims);
    json od = json::array();
    for (std::size_t i = 0; i < dims.size(); ++i)
      od.push_back({{"module", s.modules[i].name()}, {"dim", dims[i]}});
    j["omega_dims"] = od;
  } else {
    throw std::invalid_argument("unknown suite '" + c.suite + "'");
  }
  j["ok"] = rep.ok();
  j["checks"] = checks_json(rep);
  for (const auto& ch : rep.checks)
    if (!ch.ok) {
      j["first_counterexample"] = ch.name + ": " + ch.detail;
      break;
    }
  return {j, rep.ok() ? kOk : kUncertified};
}

json dims_json(const std::vector<std::pair<FracIndex, std::size_t>>& dims) {
  json a = json::array();
  for (const auto& [d, n] : dims) a.push_back({{"degree", d.str()}, {"dim", n}});
  return a;
}

Outcome cmd_basis(const RunConfig& c) {
  Setup s = make_setup(parse_twist(c.twist), c.l, c.tau_table);
  FracIndex W = half_integer(c.max_weight, "max-weight");
  Cache cache(c.cache_dir);
  auto basis = cached_basis(cache, s.sector, W);
  std::map<FracIndex, std::size_t> by;
  for (const auto& m : basis) ++by[weight(m)];
  json j;
  j["schema"] = "vosa-dims/1";
  j["config"] = config_json(c);
  j["sector"] = s.sector.describe();
  j["dims"] = dims_json({by.begin(), by.end()});
  j["total"] = basis.size();
  return {j, kOk};
}

Outcome cmd_omega(const RunConfig& c) {
  Setup s = make_setup(parse_twist(c.twist), c.l, c.tau_table);
  json j;
  j["schema"] = "vosa-omega/1";
  j["config"] = config_json(c);
  json mods = json::array();
  for (const auto& M : s.modules) {
    auto om = omega(M);
    json b = json::array();
    for (std::size_t i = 0; i < om.dim(); ++i)
      b.push_back({{"degree", om.degree[i].str()}, {"state", M.sector().format(om.basis[i])}});
    mods.push_back({{"name", M.name()}, {"dim", om.dim()}, {"basis", b}});
  }
  j["modules"] = mods;
  return {j, kOk};
}

Outcome cmd_induce(const RunConfig& c) {
  Setup s = make_setup(parse_twist(c.twist), c.l, c.tau_table);
  FracIndex W = half_integer(c.max_weight, "max-weight");
  json j;
  j["schema"] = "vosa-induce/1";
  json cfg = config_json(c);
  cfg["regular"] = c.regular;
  j["config"] = cfg;
  json out = json::array();
  bool ok = true;
  auto emit = [&](const ZeroModeRep& U, const TwistedModule* compare) {
    InducedModule L(s.sector, U, W);
    json e;
    e["U"] = U.name;
    e["dim_U"] = U.dim;
    e["consistent"] = L.consistent();
    e["L"] = dims_json(L.graded_dims());
    e["verma"] = dims_json(L.verma_dims());
    bool lowest = L.dim(FracIndex(0)) == U.dim;
    for (const auto& d : L.degrees())
      if (!d.is_zero() && L.singular_dim(d) != 0) lowest = false;
    e["omega_is_U"] = lowest;
    ok = ok && L.consistent() && lowest;
    if (compare) {
      auto gd = L.graded_dims();
      std::map<FracIndex, std::size_t> mine(gd.begin(), gd.end());
      bool match = true;
      for (const auto& [d, n] : compare->graded_dims(W)) {
        auto it = mine.find(d);
        if ((it == mine.end() ? 0 : it->second) != n) match = false;
      }
      for (const auto& [d, n] : mine)
        if (n != 0 && compare->piece(d).size() != n) match = false;
      e["module"] = compare->name();
      e["module_dims"] = dims_json(compare->graded_dims(W));
      e["matches_module"] = match;
      ok = ok && match;
    }
    out.push_back(e);
  };
  if (c.regular) {
    ZhuContext ctx(s.sector);
    // the Zhu truncation is independent of the induction weight
    ZhuOptions opt;
    opt.margin = half_integer(c.margin, "margin");
    opt.m_max = c.m_max;
    if (c.l >= 4) opt.max_weight = FracIndex(5, 2);
    auto r = build_algebra(ctx, opt);
    emit(regular_rep(ctx, r, opt.m_max), nullptr);
  } else {
    for (const auto& M : s.modules) emit(zero_mode_rep(M, omega(M)), &M);
  }
  j["inductions"] = out;
  j["ok"] = ok;
  return {j, ok ? kOk : kUncertified};
}

// Flattened "key: value" rendering for --format table.
void render_table(std::ostream& os, const json& j, const std::string& prefix = {}) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const json& v = it.value();
    if (v.is_object()) {
      render_table(os, v, key);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      os << key << ":\n";
      for (const auto& row : v) {
        os << "  ";
        bool first = true;
        for (auto r = row.begin(); r != row.end(); ++r) {
          os << (first ? "" : "  ") << r.key() << "=" << (r->is_string() ? r->get<std::string>() : r->dump());
          first = false;
        }
        os << "\n";
      }
    } else {
      os << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

void add_common(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--l", c.l, "number of fermions");
  cmd->add_option("--twist", c.twist, "id, sigma or tau")->check(CLI::IsMember({"id", "sigma", "tau"}));
  cmd->add_option("--tau-table", c.tau_table, "generator offsets, e.g. c:1/2;e:0");
  cmd->add_option("--max-weight", c.max_weight, "truncation weight W (p/q)");
  cmd->add_option("--margin", c.margin, "extra weight for relations (p/q)");
  cmd->add_option("--m-max", c.m_max, "largest m in the residue family");
  cmd->add_flag("--certify", c.certify, "also verify the Omega actions");
  cmd->add_option("--cache-dir", c.cache_dir, "cache directory (VOSA_CACHE_DIR overrides)");
  cmd->add_option("--output", c.output, "write the result to a file");
  cmd->add_option("--format", c.format, "json or table")->check(CLI::IsMember({"json", "table"}));
}

// Fills options not given on the command line from a JSON object.
void apply_config(CLI::App* cmd, const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path);
  json j = json::parse(in);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  auto given = [&](const char* flag) { return cmd->count(flag) > 0; };
  auto str = [&](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    if (k == "l") { if (!given("--l")) c.l = v.get<int>(); }
    else if (k == "twist") { if (!given("--twist")) c.twist = v.get<std::string>(); }
    else if (k == "tau_table") { if (!given("--tau-table")) c.tau_table = v.get<std::string>(); }
    else if (k == "max_weight") { if (!given("--max-weight")) c.max_weight = str(v); }
    else if (k == "margin") { if (!given("--margin")) c.margin = str(v); }
    else if (k == "m_max") { if (!given("--m-max")) c.m_max = v.get<int>(); }
    else if (k == "certify") { if (!given("--certify")) c.certify = v.get<bool>(); }
    else if (k == "cache_dir") { if (!given("--cache-dir")) c.cache_dir = v.get<std::string>(); }
    else if (k == "output") { if (!given("--output")) c.output = v.get<std::string>(); }
    else if (k == "format") { if (!given("--format")) c.format = v.get<std::string>(); }
    else if (k == "suite") { if (!given("--suite")) c.suite = v.get<std::string>(); }
    else if (k == "regular") { if (!given("--regular")) c.regular = v.get<bool>(); }
    else throw std::invalid_argument("unknown config key '" + k + "'");
  }
  if (c.twist != "id" && c.twist != "sigma" && c.twist != "tau")
    throw std::invalid_argument("unknown twist '" + c.twist + "'");
  if (c.format != "json" && c.format != "table")
    throw std::invalid_argument("unknown format '" + c.format + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted Zhu algebras of free fermion vertex operator superalgebras"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; command-line flags win");

  struct Cmd {
    const char* name;
    const char* help;
    Outcome (*run)(const RunConfig&);
  };
  const Cmd cmds[] = {
      {"zhu", "compute and certify A_g(V)", cmd_zhu},
      {"verify", "run an identity suite", cmd_verify},
      {"basis", "graded dimensions of the sector", cmd_basis},
      {"omega", "lowest weight spaces of the simple modules", cmd_omega},
      {"induce", "truncated generalized Verma modules", cmd_induce},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, cfg);
    sub->add_option("--config", config_path, "JSON config file; command-line flags win");
    if (std::string(c.name) == "verify")
      sub->add_option("--suite", cfg.suite, "jacobi, virasoro, zhu-axioms, lie or omega")
          ->check(CLI::IsMember({"jacobi", "virasoro", "zhu-axioms", "lie", "omega"}));
    if (std::string(c.name) == "induce")
      sub->add_flag("--regular", cfg.regular, "induce from the regular A_g(V)-module");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      if (!config_path.empty()) apply_config(subs[i], config_path, cfg);
      if (std::string(cmds[i].name) == "verify" && cfg.suite.empty())
        throw std::invalid_argument("verify needs --suite");
      Outcome out = cmds[i].run(cfg);
      std::ostringstream os;
      if (cfg.format == "table") render_table(os, out.body);
      else os << out.body.dump(2) << "\n";
      if (cfg.output.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream f(cfg.output, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + cfg.output);
        f << os.str();
      }
      return out.code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vosa/fock.hpp"

namespace vosa {

inline constexpr const char* kVersionTag = "vosa-0.1.0";

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Content-addressed files under one directory. Keys hash the full content
/// description together with the version tag, so stale entries never match.
class Cache {
 public:
  /// VOSA_CACHE_DIR wins over `dir`; an empty result disables the cache.
  explicit Cache(std::string dir = {}) {
    if (const char* env = std::getenv("VOSA_CACHE_DIR"); env && *env) dir = env;
    dir_ = dir;
  }

  bool enabled() const { return !dir_.empty(); }
  const std::filesystem::path& dir() const { return dir_; }

  static std::string key(const std::string& kind, const std::string& description) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(kind + "|" + description + "|" + kVersionTag)));
    return kind + "-" + buf;
  }

  std::optional<std::string> load(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    std::ifstream in(dir_ / key, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  }

  /// Writes to a temporary file in the same directory, then renames.
  void store(const std::string& key, const std::string& content) const {
    if (!enabled()) return;
    std::filesystem::create_directories(dir_);
    auto tmp = dir_ / (key + ".tmp" + std::to_string(std::random_device{}()));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
      out << content;
      if (!out) throw std::runtime_error("short write to cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, dir_ / key);
  }

 private:
  std::filesystem::path dir_;
};

// Basis cache text format "vosa-basis/1":
//   vosa-basis/1
//   sector <Sector::describe()>
//   max_weight <p/q>
//   count <n>
//   then n lines, one monomial each: "1" for the vacuum, otherwise
//   space-separated "gen@mode" factors in canonical order.

inline std::string serialize_basis(const Sector& s, const FracIndex& W,
                                   const std::vector<Monomial>& basis) {
  std::ostringstream os;
  os << "vosa-basis/1\nsector " << s.describe() << "\nmax_weight " << W.str() << "\ncount "
     << basis.size() << "\n";
  for (const auto& m : basis) {
    if (m.empty()) {
      os << "1\n";
      continue;
    }
    for (std::size_t i = 0; i < m.size(); ++i)
      os << (i ? " " : "") << m[i].gen << "@" << m[i].mode.str();
    os << "\n";
  }
  return os.str();
}

/// Parses a basis file; nullopt when the header does not match (s, W).
inline std::optional<std::vector<Monomial>> parse_basis(const std::string& text, const Sector& s,
                                                        const FracIndex& W) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "vosa-basis/1") return std::nullopt;
  if (!std::getline(in, line) || line != "sector " + s.describe()) return std::nullopt;
  if (!std::getline(in, line) || line != "max_weight " + W.str()) return std::nullopt;
  if (!std::getline(in, line) || line.rfind("count ", 0) != 0) return std::nullopt;
  std::size_t n = std::stoul(line.substr(6));
  std::vector<Monomial> out;
  while (out.size() < n && std::getline(in, line)) {
    Monomial m;
    if (line != "1") {
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) {
        auto at = tok.find('@');
        if (at == std::string::npos) return std::nullopt;
        m.push_back({FracIndex::parse(tok.substr(at + 1)), std::stoi(tok.substr(0, at))});
      }
    }
    out.push_back(std::move(m));
  }
  if (out.size() != n) return std::nullopt;
  return out;
}

/// enumerate_basis through the cache.
inline std::vector<Monomial> cached_basis(const Cache& cache, const Sector& s, const FracIndex& W,
                                          bool* hit = nullptr) {
  std::string k = Cache::key("basis", s.describe() + "|" + W.str());
  if (auto text = cache.load(k))
    if (auto b = parse_basis(*text, s, W)) {
      if (hit) *hit = true;
      return *b;
    }
  if (hit) *hit = false;
  auto b = s.enumerate_basis(W);
  cache.store(k, serialize_basis(s, W, b));
  return b;
}

}  // namespace vosa

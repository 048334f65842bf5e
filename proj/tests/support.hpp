#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "streamrelay/p2p.hpp"
#include "streamrelay/rational.hpp"

namespace streamrelay::testing {

inline Rational Q(std::int64_t num, std::int64_t den = 1) { return make_rational(num, den); }

inline std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::string golden(const std::string& name) { return std::string(STREAMRELAY_GOLDEN_DIR) + "/" + name; }

inline std::vector<Message> random_messages(int k, int slots, std::uint32_t field_size, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(0, field_size - 1);
  std::vector<Message> out(static_cast<std::size_t>(slots), Message(static_cast<std::size_t>(k)));
  for (auto& m : out) {
    for (auto& s : m) s = static_cast<Symbol>(dist(rng));
  }
  return out;
}

}  // namespace streamrelay::testing

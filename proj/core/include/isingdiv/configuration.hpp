#pragma once

#include <cstdint>
#include <vector>

namespace isingdiv {

/// Spin assignment in {-1,+1}^n, packed one bit per spin (set bit = +1).
class Configuration {
 public:
  explicit Configuration(int n) : n_(n), words_(static_cast<std::size_t>((n + 63) / 64), 0) {}

  /// Builds the configuration whose spin at vertex i is +1 iff bit i of `index`
  /// is set. This is the canonical enumeration order 0 .. 2^n - 1.
  static Configuration from_index(std::uint64_t index, int n) {
    Configuration c(n);
    if (!c.words_.empty()) c.words_[0] = n >= 64 ? index : (index & ((std::uint64_t{1} << n) - 1));
    return c;
  }

  int size() const { return n_; }

  int spin(int v) const {
    return ((words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1) ? +1 : -1;
  }

  void set_spin(int v, int s) {
    const std::uint64_t bit = std::uint64_t{1} << (v & 63);
    auto& w = words_[static_cast<std::size_t>(v) >> 6];
    if (s > 0)
      w |= bit;
    else
      w &= ~bit;
  }

  void flip(int v) { words_[static_cast<std::size_t>(v) >> 6] ^= std::uint64_t{1} << (v & 63); }

  /// Inverse of from_index; only meaningful for n <= 64.
  std::uint64_t index() const { return words_.empty() ? 0 : words_[0]; }

  bool operator==(const Configuration&) const = default;

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

}  // namespace isingdiv

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace gadforge {

/// Counter-based 64-bit generator. Output i of a stream is a keyed hash of
/// the counter i, so streams are cheap to derive, independent of each other,
/// and their state is two integers.
///
/// All distributions below are implemented here rather than taken from
/// <random>, whose distribution algorithms are implementation-defined.
class Rng {
 public:
  /// Stream labelled `name` under `seed`. Distinct names give independent
  /// streams, so e.g. the batching stream is unaffected by how many draws the
  /// injection stream made.
  Rng(std::uint64_t seed, std::string_view name);

  /// Independent child stream, e.g. one per epoch.
  Rng fork(std::uint64_t index) const;

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Unbiased uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p);
  /// Standard normal via Box-Muller (one value per two uniforms).
  double normal();

  /// k distinct values from [0, n), in draw order. Requires k <= n.
  std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n,
                                                        std::uint32_t k);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }
  /// Restores a stream saved via key()/counter().
  static Rng from_state(std::uint64_t key, std::uint64_t counter);

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  Rng() = default;

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace gadforge

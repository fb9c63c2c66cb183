#pragma once

#include <cstdint>
#include <string>

namespace radstein {

// Counter-based splittable generator built on the splitmix64 finalizer.
// Every draw is a pure function of (seed, counter), so a sample stream can
// be partitioned across workers in any order and still produce the same
// values; substreams are derived by hashing the stream id into the seed.
class counter_rng {
 public:
  explicit counter_rng(std::uint64_t seed) : seed_(seed) {}

  static const char* algorithm() { return "splitmix64-counter-v1"; }

  std::uint64_t seed() const { return seed_; }

  // Stateless draw at position `counter`.
  std::uint64_t at(std::uint64_t counter) const {
    return mix(seed_ + (counter + 1) * golden_gamma);
  }

  // Independent substream for a worker / instance id.
  counter_rng split(std::uint64_t stream) const {
    return counter_rng(mix(seed_ ^ mix(stream * golden_gamma + leaf_gamma)));
  }

  double uniform01(std::uint64_t counter) const {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t counter, std::uint64_t n) const {
    return at(counter) % n;
  }

  bool sign(std::uint64_t counter) const { return at(counter) & 1u; }

 private:
  static constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t leaf_gamma = 0xBB67AE8584CAA73BULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

// Small stateful adapter when sequential draws are more convenient.
class rng_stream {
 public:
  explicit rng_stream(counter_rng rng) : rng_(rng), counter_(0) {}
  rng_stream(std::uint64_t seed, std::uint64_t stream)
      : rng_(counter_rng(seed).split(stream)), counter_(0) {}

  std::uint64_t next() { return rng_.at(counter_++); }
  double next_uniform01() { return rng_.uniform01(counter_++); }
  std::uint64_t next_below(std::uint64_t n) { return rng_.below(counter_++, n); }
  long long next_int(long long lo, long long hi) {  // inclusive range
    return lo + static_cast<long long>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  bool next_sign() { return rng_.sign(counter_++); }

 private:
  counter_rng rng_;
  std::uint64_t counter_;
};

}  // namespace radstein

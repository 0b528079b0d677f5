#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace treeshape {

// Seeded random stream. A stream is identified by (seed, path); substream(id)
// extends the path, so every replication or worker can own an independent
// stream that does not depend on how work is scheduled.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed) : seed_(seed) { reseed(); }

  RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
      : seed_(seed), path_(path) {
    reseed();
  }

  RngStream substream(std::uint64_t id) const {
    RngStream child = *this;
    child.path_.push_back(id);
    child.reseed();
    return child;
  }

  std::uint64_t seed() const { return seed_; }
  const std::vector<std::uint64_t>& path() const { return path_; }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform01() {
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * scale;
  }

  // Uniform on {0, ..., bound - 1}; bound > 0.
  std::uint64_t uniform_index(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
  }

  bool coin() { return (engine_() >> 63) != 0; }

  double normal() { return normal_(engine_); }

 private:
  void reseed() {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * path_.size() + 1);
    auto push64 = [&words](std::uint64_t v) {
      words.push_back(static_cast<std::uint32_t>(v));
      words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push64(seed_);
    words.push_back(static_cast<std::uint32_t>(path_.size()));
    for (auto id : path_) push64(id);
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
    normal_.reset();
  }

  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace treeshape

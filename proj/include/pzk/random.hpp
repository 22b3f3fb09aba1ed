#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pzk {

/// A deterministic stream of draws. Copies are independent replicas that
/// continue from the same position.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound). bound must be positive.
  std::size_t below(std::size_t bound);

  /// Uniformly random permutation of {0, ..., k-1}.
  std::vector<std::size_t> permutation(std::size_t k);

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

  bool coin() { return below(2) == 1; }

 private:
  std::mt19937_64 engine_;
};

/// Seed-addressed family of labeled substreams.
///
/// The shuffle functionality, the verifier's challenges and the prover's
/// private coins each draw from their own label, so a change in how many
/// draws one party makes never shifts another party's sequence.
class RandomSource {
 public:
  static constexpr std::string_view kShuffle = "shuffle";
  static constexpr std::string_view kChallenge = "challenge";
  static constexpr std::string_view kProver = "prover";

  explicit RandomSource(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  Stream stream(std::string_view label) const;

  /// Source for one repetition (or one trial) of a protocol.
  RandomSource derive(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace pzk

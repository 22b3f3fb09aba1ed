#include "pzk/random.hpp"

#include <numeric>

namespace pzk {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::size_t Stream::below(std::size_t bound) {
  std::uniform_int_distribution<std::size_t> dist(0, bound - 1);
  return dist(engine_);
}

std::vector<std::size_t> Stream::permutation(std::size_t k) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  shuffle(perm);
  return perm;
}

Stream RandomSource::stream(std::string_view label) const {
  return Stream(splitmix64(seed_ ^ fnv1a(label)));
}

RandomSource RandomSource::derive(std::uint64_t index) const {
  return RandomSource(splitmix64(splitmix64(seed_) + index));
}

}  // namespace pzk

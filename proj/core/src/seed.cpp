#include "mfsde/seed.hpp"

namespace mfsde {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Seed::derived() const {
  // Two rounds so that (root, stream) and (root + 1, stream - 1) decorrelate.
  return mix64(mix64(root) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

Seed Seed::replica(std::uint64_t r) const {
  return Seed{Seed{root, stream::replica_base + r}.derived(), 0};
}

}  // namespace mfsde

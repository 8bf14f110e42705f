#include "rso/rng.hpp"

namespace rso {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = derive_seed(seed, stream);
  for (auto& word : s_) {
    z = mix64(z);
    word = z;
  }
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

}  // namespace rso

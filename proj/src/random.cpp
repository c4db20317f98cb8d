#include "matchmech/random.hpp"

#include <stdexcept>

namespace matchmech {

namespace {
__extension__ using u128 = unsigned __int128;
}

std::uint64_t RandomSource::below(std::uint64_t n) {
    if (n == 0) {
        throw std::domain_error("rand_below: bound must be positive");
    }
    const auto wide = static_cast<u128>(next_u64()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t config, std::uint64_t trial) noexcept {
    RandomSource outer(base);
    RandomSource middle(outer.next_u64() ^ config);
    RandomSource inner(middle.next_u64() ^ trial);
    return inner.next_u64();
}

}  // namespace matchmech

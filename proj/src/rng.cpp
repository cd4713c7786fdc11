#include "epimit/rng.hpp"

namespace epimit {

std::uint64_t Rng::next_below(std::uint64_t bound)
{
    if (bound == 0)
        return 0;
    // rejection sampling to avoid modulo bias
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold)
            return r % bound;
    }
}

namespace {

std::uint64_t mix(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view path)
{
    return mix(root ^ mix(fnv1a(path)));
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a)
{
    return mix(root ^ mix(a + 0x9e3779b97f4a7c15ULL));
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b)
{
    return derive_seed(derive_seed(root, a), b);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view path, std::uint64_t a)
{
    return derive_seed(derive_seed(root, path), a);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view path, std::uint64_t a, std::uint64_t b)
{
    return derive_seed(derive_seed(root, path, a), b);
}

} // namespace epimit

#ifndef EPIMIT_RNG_HPP
#define EPIMIT_RNG_HPP

#include <cstdint>
#include <string_view>

namespace epimit {

// Counter-free splittable generator (splitmix64). Every stochastic routine
// in the library takes an explicit seed or Rng so that results are
// reproducible bit-for-bit regardless of thread count or call order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    // unbiased uniform in [0, bound)
    std::uint64_t next_below(std::uint64_t bound);

    // uniform integer in [lo, hi] inclusive
    long uniform_int(long lo, long hi)
    {
        return lo + static_cast<long>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    std::uint64_t state_;
};

// Derive an independent child seed from a root seed and a path. Task seeds in
// the experiment harness and per-round seeds in the Monte-Carlo estimators are
// derived this way, so execution order never affects results.
std::uint64_t derive_seed(std::uint64_t root, std::string_view path);
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a);
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b);
std::uint64_t derive_seed(std::uint64_t root, std::string_view path, std::uint64_t a);
std::uint64_t derive_seed(std::uint64_t root, std::string_view path, std::uint64_t a, std::uint64_t b);

} // namespace epimit

#endif

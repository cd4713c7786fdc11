#ifndef EPIMIT_STATS_HPP
#define EPIMIT_STATS_HPP

#include <cmath>
#include <stdexcept>

namespace epimit {

// Two-sided Hoeffding half-width for the mean of `rounds` i.i.d. samples
// bounded in [0, range].
inline double hoeffding_half_width(long rounds, int range, double confidence = 0.9)
{
    if (rounds < 1)
        throw std::invalid_argument("hoeffding_half_width: rounds must be positive");
    if (!(confidence > 0.0) || confidence >= 1.0)
        throw std::invalid_argument("hoeffding_half_width: confidence must be in (0,1)");
    return range * std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * rounds));
}

} // namespace epimit

#endif

#pragma once

#include <cstddef>
#include <vector>

namespace dbd {

/// Per-class probabilities; entries sum to 1.
struct ClassDistribution {
    std::vector<double> probabilities;

    /// Index of the most probable class; exact ties go to `tie_preference`
    /// (the positive/"malicious" class in this artifact).
    std::size_t argmax(std::size_t tie_preference) const {
        std::size_t best = tie_preference;
        for (std::size_t i = 0; i < probabilities.size(); ++i)
            if (probabilities[i] > probabilities[best]) best = i;
        return best;
    }
};

} // namespace dbd

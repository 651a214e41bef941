#pragma once

#include <vector>

#include "dbd/classifier.hpp"
#include "dbd/dataset.hpp"

namespace dbd {

/// Gaussian/multinomial Naive Bayes. Numeric likelihoods are normal
/// densities with a stddev floor; discrete likelihoods and class priors
/// are Laplace(+1)-smoothed. Missing cells contribute no term.
struct NBModel {
    static constexpr double kStddevFloor = 1e-3;

    struct Gaussian {
        double mean = 0;
        double stddev = kStddevFloor;
        bool present = false; // class had at least one non-missing value
    };

    struct AttributeModel {
        bool discrete = false;
        std::vector<Gaussian> gaussians;                 // per class (numeric)
        std::vector<std::vector<double>> frequencies;    // [class][value], rows sum 1
    };

    std::vector<double> priors;            // per class, sums to 1
    std::vector<AttributeModel> attributes; // one slot per schema attribute
};

NBModel fit_naive_bayes(const Dataset& d);

ClassDistribution nb_predict(const NBModel& m, const Schema& schema, const Instance& x);

} // namespace dbd

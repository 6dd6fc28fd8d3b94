#pragma once

#include <Eigen/Core>

#include <vector>

namespace scca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

/// Which of the two sparse CCA formulations a fit targets.
enum class Model { Standard, Simplified };

/// One pair of canonical weights plus the objective value u'Cv it attains.
struct CanonicalPair {
    Vector u;
    Vector v;
    double objective = 0.0;
};

}  // namespace scca

#ifndef CLFRL_COMMON_TYPES_H
#define CLFRL_COMMON_TYPES_H

#include <Eigen/Dense>

namespace clfrl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace clfrl

#endif

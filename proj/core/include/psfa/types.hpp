#ifndef PSFA_TYPES_HPP
#define PSFA_TYPES_HPP

#include <Eigen/Dense>

namespace psfa {

// All dense numerics in this library are 64-bit floats in column-major
// storage (row index fastest). Eigen's dynamic double matrix is column-major
// by default, so these aliases pin the one storage convention used everywhere,
// including the binary file formats.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace psfa

#endif

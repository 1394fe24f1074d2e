#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace momentflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Error in user-supplied input (documents, malformed tensors, excluded inputs).
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Relative singular-value cutoff shared by all numerical rank decisions.
inline constexpr double kRankRelTol = 1e-8;

}  // namespace momentflow

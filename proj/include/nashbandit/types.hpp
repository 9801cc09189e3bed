#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace nashbandit {

template <typename Scalar>
struct Types {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  // Rows are arms, columns are sample indices; a row is contiguous.
  using Table = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
};

using Vector = Types<double>::Vector;
using Array = Types<double>::Array;
using Table = Types<double>::Table;

// Arms are 0-based throughout the library.
using ArmIndex = std::size_t;
// Rounds are 1-based, matching the usual t = 1..T convention.
using Round = std::uint64_t;

}  // namespace nashbandit

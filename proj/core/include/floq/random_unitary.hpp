#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "floq/operator.hpp"
#include "floq/state.hpp"
#include "floq/window.hpp"

namespace floq {

/// Seeded complex Gaussian matrix orthonormalized by QR, with the R-diagonal
/// phases absorbed into Q. The Gaussian variates are produced from the raw
/// mt19937_64 stream by Box-Muller, so the matrix is reproducible across
/// platforms for a given seed.
Eigen::MatrixXcd random_unitary_matrix(long dim, std::uint64_t seed);

FloquetOperator random_unitary(const BasisWindow& w, std::uint64_t seed);

StateVector random_state(const BasisWindow& w, std::uint64_t seed);

}  // namespace floq

#pragma once

#include <cstdint>

#include "matrange/linalg.hpp"

namespace matrange {

// K deterministic unit vectors in R^dim, one per row.
//   dim 1: {+1, -1} repeated; dim 2: equally spaced angles; dim 3: Fibonacci
//   lattice; dim >= 4: Halton points pushed through Box-Muller and normalized.
// `seed` applies a Cranley-Patterson rotation (seed 0 = unrotated).
RMat sphere_directions(int dim, int K, std::uint64_t seed = 0);

// Unit vectors in the closed positive orthant of R^dim.
RMat orthant_directions(int dim, int K);

// Orthonormal real basis (w.r.t. Re tr(A^* B)) of the n x n Hermitian matrices.
std::vector<CMat> hermitian_basis(int n);

// K directions at level n for d-tuples of Hermitian matrices, Hilbert-Schmidt
// normalized.
std::vector<MatrixTuple> hermitian_directions(int d, int n, int K, std::uint64_t seed = 0);

// Covering radius (largest angular gap / 2, as chord length) of a grid in R^2.
double circle_covering_radius(const RMat& dirs);

}  // namespace matrange

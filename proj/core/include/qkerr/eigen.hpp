#pragma once

// Dense eigensolvers for the small matrices in this library: implicit-shift QL on
// symmetric tridiagonal matrices, Householder reduction for dense symmetric ones, and
// complex Hermitian matrices through the real embedding [[X, -Y], [Y, X]] of X + iY.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qkerr/matrix.hpp"

namespace qkerr {

/// Eigenpairs of one Hamiltonian block. Column j of `eigenvectors` holds the
/// expansion coefficients of eigenvector j in the block basis m = 0..N.
struct BlockSpectrum {
    std::size_t N = 0;
    std::vector<double> eigenvalues;  // ascending
    RealMatrix eigenvectors;
};

struct SymmetricEigen {
    std::vector<double> eigenvalues;  // ascending
    RealMatrix eigenvectors;          // columns
};

struct HermitianEigen {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // columns, unitary
};

/// Iteration budget per unit of matrix dimension for the QL sweeps.
inline constexpr std::size_t kQLIterationsPerRow = 50;

/// Full spectrum of the symmetric tridiagonal matrix (diag, offdiag).
/// Each eigenvector's first non-negligible component is made positive.
/// `block_label` only decorates the ConvergenceError message.
BlockSpectrum eigh_tridiagonal(std::span<const double> diag, std::span<const double> offdiag,
                               std::optional<std::size_t> block_label = std::nullopt);

/// Full spectrum of a dense real symmetric matrix (lower triangle is read).
SymmetricEigen eigh_symmetric(const RealMatrix& matrix);

/// Full spectrum of a complex Hermitian matrix. The input must be Hermitian to 1e-12
/// (relative to its largest entry, floor 1); it is symmetrized before solving.
/// Throws NumericalError otherwise, or if the doubled embedding spectrum cannot be paired.
HermitianEigen eigh_hermitian(const ComplexMatrix& matrix);

inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kPairingTolerance = 1e-9;

}  // namespace qkerr

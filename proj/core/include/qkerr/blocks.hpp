#pragma once

// Excitation-block structure of H = H_field + H_atom + H_int with
//   H_field = (AA^+ + A^+A)/2,  H_atom = omega (b^+b + 1/2) + chi b^+2 b^2,
//   H_int   = gamma (A^+ b + A b^+).
// H_int moves one quantum between the modes, so the total count N = n + m labels
// invariant blocks spanned by |N-m>_q |m>_a, m = 0..N.

#include <cstddef>
#include <vector>

#include "qkerr/matrix.hpp"
#include "qkerr/qalgebra.hpp"

namespace qkerr {

struct SystemParams {
    double omega = 1.0;  ///< atomic frequency (hbar = 1)
    double chi = 0.0;    ///< Kerr strength
    double gamma = 1.0;  ///< field-atom coupling, sign allowed
    Deformation q{1.0};

    /// Throws DomainError unless omega > 0, chi >= 0 and every value is finite.
    void validate() const;

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Real symmetric tridiagonal block for total excitation N.
struct BlockMatrix {
    std::size_t N = 0;
    std::vector<double> diag;     ///< d_m, m = 0..N
    std::vector<double> offdiag;  ///< g_m couples m-1 and m, m = 1..N (stored at m-1)
};

/// <n|H_field|n> = ([n] + [n+1]) / 2.
double field_energy(std::size_t n, Deformation q);
/// <m|H_atom|m> = omega (m + 1/2) + chi m (m-1).
double atom_energy(std::size_t m, const SystemParams& params);

/// <n+1, m-1| gamma A^+ b |n, m> = gamma sqrt(m) sqrt([n+1]); m >= 1.
double coupling_field_raising(std::size_t n, std::size_t m, const SystemParams& params);
/// <n-1, m+1| gamma A b^+ |n, m> = gamma sqrt([n]) sqrt(m+1); n >= 1.
double coupling_field_lowering(std::size_t n, std::size_t m, const SystemParams& params);

BlockMatrix build_block(const SystemParams& params, std::size_t N);

/// (N+1)x(N+1) dense expansion of a block.
RealMatrix block_matrix_dense(const BlockMatrix& block);

/// Full Hamiltonian on the product lattice n, m in [0, cutoff], index n*(cutoff+1) + m,
/// assembled operator by operator without reference to the block structure. Blocks with
/// N <= cutoff are represented exactly; matrix elements leaving the lattice are dropped.
RealMatrix dense_two_mode_hamiltonian(const SystemParams& params, std::size_t cutoff);

inline std::size_t lattice_index(std::size_t n, std::size_t m, std::size_t cutoff) noexcept {
    return n * (cutoff + 1) + m;
}

}  // namespace qkerr

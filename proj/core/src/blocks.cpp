#include "qkerr/blocks.hpp"

#include <cmath>

#include "qkerr/errors.hpp"

namespace qkerr {

void SystemParams::validate() const {
    if (!std::isfinite(omega) || !(omega > 0.0)) throw DomainError("omega must be finite and > 0");
    if (!std::isfinite(chi) || !(chi >= 0.0)) throw DomainError("chi must be finite and >= 0");
    if (!std::isfinite(gamma)) throw DomainError("gamma must be finite");
}

double field_energy(std::size_t n, Deformation q) { return 0.5 * (box_n(n, q) + box_n(n + 1, q)); }

double atom_energy(std::size_t m, const SystemParams& params) {
    const auto mm = static_cast<double>(m);
    return params.omega * (mm + 0.5) + params.chi * mm * (mm - 1.0);
}

double coupling_field_raising(std::size_t n, std::size_t m, const SystemParams& params) {
    if (m == 0) throw DomainError("b annihilates the atomic vacuum");
    return params.gamma * std::sqrt(static_cast<double>(m)) * ladder_up_element(n, params.q);
}

double coupling_field_lowering(std::size_t n, std::size_t m, const SystemParams& params) {
    return params.gamma * ladder_down_element(n, params.q) * std::sqrt(static_cast<double>(m + 1));
}

BlockMatrix build_block(const SystemParams& params, std::size_t N) {
    params.validate();
    BlockMatrix block;
    block.N = N;
    block.diag.resize(N + 1);
    block.offdiag.resize(N);
    for (std::size_t m = 0; m <= N; ++m)
        block.diag[m] = field_energy(N - m, params.q) + atom_energy(m, params);
    // |N-m+1; m-1> <- A^+ b |N-m; m>
    for (std::size_t m = 1; m <= N; ++m)
        block.offdiag[m - 1] = coupling_field_raising(N - m, m, params);
    return block;
}

RealMatrix block_matrix_dense(const BlockMatrix& block) {
    const std::size_t dim = block.diag.size();
    RealMatrix h(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) h(i, i) = block.diag[i];
    for (std::size_t i = 0; i < block.offdiag.size(); ++i) {
        h(i, i + 1) = block.offdiag[i];
        h(i + 1, i) = block.offdiag[i];
    }
    return h;
}

RealMatrix dense_two_mode_hamiltonian(const SystemParams& params, std::size_t cutoff) {
    params.validate();
    const std::size_t levels = cutoff + 1;
    RealMatrix h(levels * levels, levels * levels);
    for (std::size_t n = 0; n < levels; ++n) {
        for (std::size_t m = 0; m < levels; ++m) {
            const std::size_t col = lattice_index(n, m, cutoff);
            h(col, col) += field_energy(n, params.q) + atom_energy(m, params);
            if (m >= 1 && n + 1 < levels)
                h(lattice_index(n + 1, m - 1, cutoff), col) += coupling_field_raising(n, m, params);
            if (n >= 1 && m + 1 < levels)
                h(lattice_index(n - 1, m + 1, cutoff), col) += coupling_field_lowering(n, m, params);
        }
    }
    return h;
}

}  // namespace qkerr

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qkerr/blocks.hpp"
#include "qkerr/eigen.hpp"
#include "qkerr/matrix.hpp"
#include "qkerr/qalgebra.hpp"

namespace qkerr {

/// Pure state of field (n quanta) and atom (m quanta), truncated to n + m <= n_max.
/// Amplitudes are stored block by block: block N holds psi(N - m, m) for m = 0..N.
class TwoModeState {
public:
    explicit TwoModeState(std::size_t n_max);

    std::size_t n_max() const noexcept { return blocks_.size() - 1; }

    Complex amplitude(std::size_t n, std::size_t m) const;
    void set_amplitude(std::size_t n, std::size_t m, Complex value);

    std::span<Complex> block(std::size_t N) { return blocks_.at(N); }
    std::span<const Complex> block(std::size_t N) const { return blocks_.at(N); }

    double norm() const;

private:
    std::vector<std::vector<Complex>> blocks_;
};

/// Immutable spectra of the blocks N = 0..n_max for one parameter set.
/// Safe to share between threads once constructed.
class SpectralCache {
public:
    SpectralCache(const SystemParams& params, std::size_t n_max);

    const SystemParams& params() const noexcept { return params_; }
    std::size_t n_max() const noexcept { return spectra_.size() - 1; }

    /// Throws DomainError if block N was not computed.
    const BlockSpectrum& spectrum(std::size_t N) const;

private:
    SystemParams params_;
    std::vector<BlockSpectrum> spectra_;
};

/// Reduced density operator of one mode.
struct DensityMatrix {
    ComplexMatrix entries;

    std::size_t dim() const noexcept { return entries.rows(); }
    Complex trace() const;
};

enum class LogBase { bits, nats };

struct EntropyResult {
    double value = 0.0;
    LogBase base = LogBase::bits;
};

/// |N>_q |0>_a.
TwoModeState prepare_fock(std::size_t N);

/// |alpha>_q |0>_a with the cutoff chosen so the discarded weight is below tail_tol.
TwoModeState prepare_coherent(const CoherentSpec& spec, Deformation q,
                              double tail_tol = kDefaultTailTolerance);

/// exp(-i H t) applied block by block through the cached spectra.
TwoModeState evolve(const TwoModeState& state, const SpectralCache& cache, double t);

/// Evolution through the full truncated two-mode Hamiltonian diagonalized as one dense
/// Hermitian matrix. Independent of the block decomposition; used as a cross-check.
/// n_max is limited to kDenseReferenceMaxCutoff.
TwoModeState dense_reference_evolve(const TwoModeState& state, const SystemParams& params,
                                    double t);

inline constexpr std::size_t kDenseReferenceMaxCutoff = 20;

DensityMatrix reduced_field(const TwoModeState& state);
DensityMatrix reduced_atom(const TwoModeState& state);

inline constexpr double kNegativeEigenvalueTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;

/// -sum_k p_k log p_k over the eigenvalues of rho. Eigenvalues in [-1e-10, 0) count as 0;
/// anything more negative, or a trace off by more than 1e-10, throws NumericalError.
EntropyResult von_neumann_entropy(const DensityMatrix& rho, LogBase base);

/// Tr rho^2.
double purity(const DensityMatrix& rho);

}  // namespace qkerr

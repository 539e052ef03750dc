#include "qkerr/dynamics.hpp"

#include <cmath>
#include <string>

#include "qkerr/errors.hpp"

namespace qkerr {

TwoModeState::TwoModeState(std::size_t n_max) : blocks_(n_max + 1) {
    for (std::size_t N = 0; N <= n_max; ++N) blocks_[N].assign(N + 1, Complex{0.0, 0.0});
}

Complex TwoModeState::amplitude(std::size_t n, std::size_t m) const {
    if (n + m > n_max()) return {0.0, 0.0};
    return blocks_[n + m][m];
}

void TwoModeState::set_amplitude(std::size_t n, std::size_t m, Complex value) {
    if (n + m > n_max())
        throw DomainError("amplitude (" + std::to_string(n) + ", " + std::to_string(m) +
                          ") lies outside the truncation n + m <= " + std::to_string(n_max()));
    blocks_[n + m][m] = value;
}

double TwoModeState::norm() const {
    double s = 0.0;
    for (const auto& b : blocks_)
        for (const auto& x : b) s += std::norm(x);
    return std::sqrt(s);
}

SpectralCache::SpectralCache(const SystemParams& params, std::size_t n_max) : params_(params) {
    params_.validate();
    spectra_.reserve(n_max + 1);
    for (std::size_t N = 0; N <= n_max; ++N) {
        const BlockMatrix block = build_block(params_, N);
        spectra_.push_back(eigh_tridiagonal(block.diag, block.offdiag, N));
    }
}

const BlockSpectrum& SpectralCache::spectrum(std::size_t N) const {
    if (N >= spectra_.size())
        throw DomainError("no spectrum cached for block N=" + std::to_string(N) +
                          " (cache covers N <= " + std::to_string(n_max()) + ")");
    return spectra_[N];
}

Complex DensityMatrix::trace() const {
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < dim(); ++i) s += entries(i, i);
    return s;
}

TwoModeState prepare_fock(std::size_t N) {
    TwoModeState state(N);
    state.set_amplitude(N, 0, {1.0, 0.0});
    return state;
}

TwoModeState prepare_coherent(const CoherentSpec& spec, Deformation q, double tail_tol) {
    const std::size_t cutoff = coherent_cutoff(spec, q, tail_tol);
    const auto c = coherent_amplitudes(spec, q, cutoff, tail_tol);
    TwoModeState state(cutoff);
    for (std::size_t n = 0; n <= cutoff; ++n) state.set_amplitude(n, 0, c[n]);
    return state;
}

namespace {

bool block_is_zero(std::span<const Complex> block) {
    for (const auto& x : block)
        if (x != Complex{0.0, 0.0}) return false;
    return true;
}

}  // namespace

TwoModeState evolve(const TwoModeState& state, const SpectralCache& cache, double t) {
    if (!std::isfinite(t)) throw DomainError("evolve: time must be finite");
    TwoModeState out(state.n_max());
    std::vector<Complex> projections;
    for (std::size_t N = 0; N <= state.n_max(); ++N) {
        const auto a0 = state.block(N);
        if (block_is_zero(a0)) continue;
        const BlockSpectrum& spec = cache.spectrum(N);
        const RealMatrix& v = spec.eigenvectors;
        const std::size_t dim = N + 1;

        projections.assign(dim, Complex{0.0, 0.0});
        for (std::size_t j = 0; j < dim; ++j) {
            Complex overlap{0.0, 0.0};
            for (std::size_t m = 0; m < dim; ++m) overlap += v(m, j) * a0[m];
            projections[j] = std::polar(1.0, -spec.eigenvalues[j] * t) * overlap;
        }
        auto a = out.block(N);
        for (std::size_t m = 0; m < dim; ++m) {
            Complex sum{0.0, 0.0};
            for (std::size_t j = 0; j < dim; ++j) sum += v(m, j) * projections[j];
            a[m] = sum;
        }
    }
    return out;
}

TwoModeState dense_reference_evolve(const TwoModeState& state, const SystemParams& params,
                                    double t) {
    const std::size_t cutoff = state.n_max();
    if (cutoff > kDenseReferenceMaxCutoff)
        throw DomainError("dense_reference_evolve supports n_max <= " +
                          std::to_string(kDenseReferenceMaxCutoff));
    if (!std::isfinite(t)) throw DomainError("dense_reference_evolve: time must be finite");

    const RealMatrix h = dense_two_mode_hamiltonian(params, cutoff);
    const std::size_t dim = h.rows();
    ComplexMatrix hc(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) hc(i, j) = h(i, j);
    const HermitianEigen eig = eigh_hermitian(hc);

    std::vector<Complex> psi(dim, Complex{0.0, 0.0});
    for (std::size_t n = 0; n <= cutoff; ++n)
        for (std::size_t m = 0; n + m <= cutoff; ++m)
            psi[lattice_index(n, m, cutoff)] = state.amplitude(n, m);

    std::vector<Complex> rotated(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        Complex overlap{0.0, 0.0};
        for (std::size_t k = 0; k < dim; ++k) overlap += std::conj(eig.eigenvectors(k, j)) * psi[k];
        rotated[j] = std::polar(1.0, -eig.eigenvalues[j] * t) * overlap;
    }

    TwoModeState out(cutoff);
    for (std::size_t n = 0; n <= cutoff; ++n) {
        for (std::size_t m = 0; n + m <= cutoff; ++m) {
            const std::size_t k = lattice_index(n, m, cutoff);
            Complex sum{0.0, 0.0};
            for (std::size_t j = 0; j < dim; ++j) sum += eig.eigenvectors(k, j) * rotated[j];
            out.set_amplitude(n, m, sum);
        }
    }
    return out;
}

DensityMatrix reduced_field(const TwoModeState& state) {
    const std::size_t levels = state.n_max() + 1;
    DensityMatrix rho{ComplexMatrix(levels, levels)};
    for (std::size_t n = 0; n < levels; ++n) {
        for (std::size_t np = 0; np < levels; ++np) {
            Complex s{0.0, 0.0};
            for (std::size_t m = 0; n + m < levels && np + m < levels; ++m)
                s += state.amplitude(n, m) * std::conj(state.amplitude(np, m));
            rho.entries(n, np) = s;
        }
    }
    return rho;
}

DensityMatrix reduced_atom(const TwoModeState& state) {
    const std::size_t levels = state.n_max() + 1;
    DensityMatrix rho{ComplexMatrix(levels, levels)};
    for (std::size_t m = 0; m < levels; ++m) {
        for (std::size_t mp = 0; mp < levels; ++mp) {
            Complex s{0.0, 0.0};
            for (std::size_t n = 0; n + m < levels && n + mp < levels; ++n)
                s += state.amplitude(n, m) * std::conj(state.amplitude(n, mp));
            rho.entries(m, mp) = s;
        }
    }
    return rho;
}

EntropyResult von_neumann_entropy(const DensityMatrix& rho, LogBase base) {
    const Complex tr = rho.trace();
    if (std::abs(tr - Complex{1.0, 0.0}) > kTraceTolerance)
        throw NumericalError("density matrix trace is " + std::to_string(tr.real()) + " + " +
                             std::to_string(tr.imag()) + "i, expected 1");
    const HermitianEigen eig = eigh_hermitian(rho.entries);
    const double log_scale = base == LogBase::bits ? std::log(2.0) : 1.0;
    double s = 0.0;
    for (double p : eig.eigenvalues) {
        if (p < -kNegativeEigenvalueTolerance)
            throw NumericalError("density matrix has eigenvalue " + std::to_string(p) +
                                 " below -1e-10");
        if (p <= 0.0) continue;
        s -= p * std::log(p);
    }
    return EntropyResult{std::max(0.0, s / log_scale), base};
}

double purity(const DensityMatrix& rho) {
    double s = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i)
        for (std::size_t j = 0; j < rho.dim(); ++j) s += std::norm(rho.entries(i, j));
    return s;
}

}  // namespace qkerr

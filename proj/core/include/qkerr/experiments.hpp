#pragma once

// Experiment drivers behind the qkerr command-line tool: entropy time series,
// q sweeps at fixed time, optimal-deformation search and revival-dip detection.

#include <cstddef>
#include <variant>
#include <vector>

#include "qkerr/blocks.hpp"
#include "qkerr/dynamics.hpp"
#include "qkerr/qalgebra.hpp"

namespace qkerr {

struct FockInput {
    std::size_t n = 0;
};

struct CoherentInput {
    CoherentSpec spec;
    double tail_tol = kDefaultTailTolerance;
};

/// Field preparation; the atom always starts in its ground state.
using InitialCondition = std::variant<FockInput, CoherentInput>;

TwoModeState prepare_initial(const InitialCondition& initial, Deformation q);

/// Uniform grid min, min + h, ..., max with `steps` intervals (steps + 1 samples).
/// A zero-step grid is the single point min == max.
struct Grid {
    double min = 0.0;
    double max = 0.0;
    std::size_t steps = 0;

    /// Throws DomainError for non-finite bounds, max < min, or steps == 0 with max != min.
    void validate() const;
    std::size_t size() const noexcept { return steps + 1; }
    double at(std::size_t i) const noexcept;
    std::vector<double> points() const;
};

struct RunOptions {
    LogBase base = LogBase::bits;
    unsigned threads = 0;  ///< 0 picks the hardware concurrency
};

struct EntropyRecord {
    double t = 0.0;
    double gamma_t = 0.0;
    double s_field = 0.0;
    double s_atom = 0.0;
    double purity_field = 0.0;
};
using EntropySeries = std::vector<EntropyRecord>;

/// Evolve psi0 to time t and measure both reduced states.
EntropyRecord measure_at(const TwoModeState& psi0, const SpectralCache& cache, double t,
                         LogBase base);

/// One record per grid time; the block spectra are computed once and shared.
EntropySeries entropy_series(const SystemParams& params, const InitialCondition& initial,
                             const Grid& times, const RunOptions& options = {});

struct SweepPoint {
    double q = 1.0;
    double s_field = 0.0;
};

/// Field entropy at fixed t for a single deformation value.
double field_entropy(const SystemParams& params, const InitialCondition& initial, double t,
                     LogBase base);

/// Field entropy at fixed t for every q in the grid (params.q is ignored).
std::vector<SweepPoint> sweep_q(const SystemParams& params, const InitialCondition& initial,
                                const Grid& q_grid, double t, const RunOptions& options = {});

struct OptimalQ {
    double q_star = 1.0;
    double s_star = 0.0;
    std::vector<SweepPoint> scan;
};

inline constexpr Grid kDefaultOptimalQGrid{0.5, 1.0, 199};

/// Coarse scan followed by successive parabolic refinement around the best grid point.
/// Ties go to the smaller q.
OptimalQ find_optimal_q(const SystemParams& params, const InitialCondition& initial,
                        const Grid& q_grid, double t, const RunOptions& options = {});

enum class DipKind { near_revival, fractional_revival_candidate };

struct RevivalDip {
    double t = 0.0;
    double gamma_t = 0.0;
    double s = 0.0;
    DipKind kind = DipKind::near_revival;
};

struct RevivalWindow {
    double gamma_t_lo = 0.0;
    double gamma_t_hi = 0.0;
};

struct RevivalReport {
    std::vector<RevivalDip> dips;
    double threshold = 0.0;  ///< fraction of the series maximum
    double level = 0.0;      ///< threshold * max S_field

    bool has(DipKind kind) const noexcept;
};

/// Relative tolerance used to match a dip time against k*2pi/chi or (2k+1)*pi/chi.
inline constexpr double kRevivalTimeTolerance = 0.05;

/// Strict local minima of S_field below threshold * max(S_field) whose gamma*t lies in the
/// window. Minima near k*2pi/chi are near revivals, minima near odd multiples of pi/chi are
/// fractional-revival candidates; others are not reported.
RevivalReport detect_revivals(const EntropySeries& series, double threshold,
                              RevivalWindow window, double chi);

const char* to_string(DipKind kind) noexcept;

}  // namespace qkerr

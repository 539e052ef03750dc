#include "qkerr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>

#include "parallel.hpp"
#include "qkerr/errors.hpp"

namespace qkerr {

TwoModeState prepare_initial(const InitialCondition& initial, Deformation q) {
    return std::visit(
        [&](const auto& input) -> TwoModeState {
            using T = std::decay_t<decltype(input)>;
            if constexpr (std::is_same_v<T, FockInput>)
                return prepare_fock(input.n);
            else
                return prepare_coherent(input.spec, q, input.tail_tol);
        },
        initial);
}

void Grid::validate() const {
    if (!std::isfinite(min) || !std::isfinite(max)) throw DomainError("grid bounds must be finite");
    if (steps == 0) {
        if (min != max) throw DomainError("a zero-step grid needs min == max");
        return;
    }
    if (!(max > min)) throw DomainError("grid must be strictly increasing (max > min)");
}

double Grid::at(std::size_t i) const noexcept {
    if (steps == 0) return min;
    if (i == steps) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps);
}

std::vector<double> Grid::points() const {
    std::vector<double> xs(size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = at(i);
    return xs;
}

EntropyRecord measure_at(const TwoModeState& psi0, const SpectralCache& cache, double t,
                         LogBase base) {
    const TwoModeState psi = evolve(psi0, cache, t);
    const DensityMatrix rho_field = reduced_field(psi);
    const DensityMatrix rho_atom = reduced_atom(psi);
    EntropyRecord r;
    r.t = t;
    r.gamma_t = cache.params().gamma * t;
    r.s_field = von_neumann_entropy(rho_field, base).value;
    r.s_atom = von_neumann_entropy(rho_atom, base).value;
    r.purity_field = purity(rho_field);
    return r;
}

EntropySeries entropy_series(const SystemParams& params, const InitialCondition& initial,
                             const Grid& times, const RunOptions& options) {
    params.validate();
    times.validate();
    const TwoModeState psi0 = prepare_initial(initial, params.q);
    const SpectralCache cache(params, psi0.n_max());
    EntropySeries series(times.size());
    detail::parallel_for(series.size(), options.threads, [&](std::size_t i) {
        series[i] = measure_at(psi0, cache, times.at(i), options.base);
    });
    return series;
}

namespace {

// Adds the deformation value to numerical failures so the CLI can report where it happened.
template <typename Fn>
auto with_q_context(double q, Fn&& fn) {
    try {
        return fn();
    } catch (const ConvergenceError& e) {
        throw ConvergenceError("q=" + std::to_string(q) + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError("q=" + std::to_string(q) + ": " + e.what());
    } catch (const TruncationError& e) {
        throw TruncationError("q=" + std::to_string(q) + ": " + e.what());
    }
}

}  // namespace

double field_entropy(const SystemParams& params, const InitialCondition& initial, double t,
                     LogBase base) {
    return with_q_context(params.q.value(), [&] {
        const TwoModeState psi0 = prepare_initial(initial, params.q);
        const SpectralCache cache(params, psi0.n_max());
        const TwoModeState psi = evolve(psi0, cache, t);
        return von_neumann_entropy(reduced_field(psi), base).value;
    });
}

std::vector<SweepPoint> sweep_q(const SystemParams& params, const InitialCondition& initial,
                                const Grid& q_grid, double t, const RunOptions& options) {
    q_grid.validate();
    if (!std::isfinite(t)) throw DomainError("time must be finite");
    std::vector<SweepPoint> points(q_grid.size());
    for (std::size_t i = 0; i < points.size(); ++i) (void)Deformation{q_grid.at(i)};
    detail::parallel_for(points.size(), options.threads, [&](std::size_t i) {
        SystemParams p = params;
        p.q = Deformation{q_grid.at(i)};
        points[i] = SweepPoint{p.q.value(), field_entropy(p, initial, t, options.base)};
    });
    return points;
}

OptimalQ find_optimal_q(const SystemParams& params, const InitialCondition& initial,
                        const Grid& q_grid, double t, const RunOptions& options) {
    OptimalQ result;
    result.scan = sweep_q(params, initial, q_grid, t, options);
    const auto& scan = result.scan;

    std::size_t best = 0;
    for (std::size_t i = 1; i < scan.size(); ++i)
        if (scan[i].s_field > scan[best].s_field) best = i;
    result.q_star = scan[best].q;
    result.s_star = scan[best].s_field;
    if (best == 0 || best + 1 == scan.size()) return result;

    auto entropy_at_q = [&](double q) {
        SystemParams p = params;
        p.q = Deformation{q};
        return field_entropy(p, initial, t, options.base);
    };

    double a = scan[best - 1].q, fa = scan[best - 1].s_field;
    double b = scan[best].q, fb = scan[best].s_field;
    double c = scan[best + 1].q, fc = scan[best + 1].s_field;
    for (int iter = 0; iter < 30; ++iter) {
        const double num = (b - a) * (b - a) * (fb - fc) - (b - c) * (b - c) * (fb - fa);
        const double den = (b - a) * (fb - fc) - (b - c) * (fb - fa);
        if (den == 0.0) break;
        double x = b - 0.5 * num / den;
        if (!(x > a && x < c)) break;
        if (std::abs(x - b) < 1e-12) break;
        const double fx = entropy_at_q(x);
        if (fx > fb) {
            if (x < b) {
                c = b;
                fc = fb;
            } else {
                a = b;
                fa = fb;
            }
            b = x;
            fb = fx;
        } else if (x < b) {
            a = x;
            fa = fx;
        } else {
            c = x;
            fc = fx;
        }
    }
    result.q_star = b;
    result.s_star = fb;
    return result;
}

bool RevivalReport::has(DipKind kind) const noexcept {
    return std::any_of(dips.begin(), dips.end(), [&](const RevivalDip& d) { return d.kind == kind; });
}

const char* to_string(DipKind kind) noexcept {
    switch (kind) {
        case DipKind::near_revival:
            return "near-revival";
        case DipKind::fractional_revival_candidate:
            return "fractional-revival-candidate";
    }
    return "unknown";
}

RevivalReport detect_revivals(const EntropySeries& series, double threshold,
                              RevivalWindow window, double chi) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw DomainError("revival threshold must lie in (0, 1)");
    if (!(chi > 0.0) || !std::isfinite(chi))
        throw DomainError("revival classification needs chi > 0");
    if (!(window.gamma_t_hi >= window.gamma_t_lo))
        throw DomainError("revival window must satisfy lo <= hi");

    RevivalReport report;
    report.threshold = threshold;
    if (series.size() < 3) return report;

    double s_max = 0.0;
    for (const auto& r : series) s_max = std::max(s_max, r.s_field);
    report.level = threshold * s_max;

    const double revival_period = 2.0 * std::numbers::pi / chi;
    const double half_period = std::numbers::pi / chi;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        const auto& r = series[i];
        if (!(r.s_field < series[i - 1].s_field && r.s_field < series[i + 1].s_field)) continue;
        if (!(r.s_field < report.level)) continue;
        if (r.gamma_t < window.gamma_t_lo || r.gamma_t > window.gamma_t_hi) continue;

        const double t = std::abs(r.t);
        const double tol = kRevivalTimeTolerance * t;
        const double k = std::round(t / revival_period);
        const double j = std::round((t / half_period - 1.0) / 2.0);
        if (k >= 1.0 && std::abs(t - k * revival_period) <= tol)
            report.dips.push_back({r.t, r.gamma_t, r.s_field, DipKind::near_revival});
        else if (j >= 0.0 && std::abs(t - (2.0 * j + 1.0) * half_period) <= tol)
            report.dips.push_back({r.t, r.gamma_t, r.s_field, DipKind::fractional_revival_candidate});
    }
    return report;
}

}  // namespace qkerr

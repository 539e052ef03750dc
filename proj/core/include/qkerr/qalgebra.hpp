#pragma once

// Math-type q-deformed oscillator calculus: AA^+ - q^2 A^+A = 1.

#include <cstddef>
#include <vector>

#include "qkerr/matrix.hpp"

namespace qkerr {

/// Deformation parameter q in (0, 1]; q = 1 is the ordinary boson.
class Deformation {
public:
    /// Throws DomainError unless 0 < q <= 1.
    explicit Deformation(double q);

    double value() const noexcept { return q_; }
    bool undeformed() const noexcept { return q_ == 1.0; }

    /// 1 / (1 - q^2); infinite at q = 1.
    double saturation() const noexcept;

    friend bool operator==(Deformation, Deformation) = default;

private:
    double q_;
};

/// |alpha|^2 and arg(alpha) of a q-coherent state.
struct CoherentSpec {
    double alpha_sq = 0.0;
    double alpha_phase = 0.0;

    /// Throws DomainError if alpha_sq is negative or outside the e_q convergence radius.
    void validate(Deformation q) const;
};

/// q-bracket [n] = (1 - q^{2n}) / (1 - q^2), and exactly n at q = 1.
double box_n(std::size_t n, Deformation q);

/// [n]! = [1][2]...[n]; throws NumericalError on overflow.
double q_factorial(std::size_t n, Deformation q);

/// e_q(x) = sum_n x^n / [n]!, summed until |term| < tail_tol * |sum|.
/// Throws ConvergenceError outside the radius 1/(1-q^2) or after 10000 terms.
double q_exponential(double x, Deformation q, double tail_tol = 1e-15);

inline constexpr std::size_t kQExponentialMaxTerms = 10000;

/// <n-1|A|n> = sqrt([n]); n >= 1.
double ladder_down_element(std::size_t n, Deformation q);
/// <n+1|A^+|n> = sqrt([n+1]).
double ladder_up_element(std::size_t n, Deformation q);

inline constexpr double kDefaultTailTolerance = 1e-10;
inline constexpr std::size_t kMaxCoherentCutoff = 512;

/// Amplitudes c_n = alpha^n / sqrt([n]!) for n = 0..n_max, rescaled to unit Euclidean norm.
/// Throws TruncationError when the discarded tail carries more than tail_tol of the
/// unnormalized weight.
std::vector<Complex> coherent_amplitudes(const CoherentSpec& spec, Deformation q, std::size_t n_max,
                                         double tail_tol = kDefaultTailTolerance);

/// Smallest cutoff whose discarded tail weight is below tail_tol (relative),
/// capped at kMaxCoherentCutoff; throws TruncationError past the cap.
std::size_t coherent_cutoff(const CoherentSpec& spec, Deformation q,
                            double tail_tol = kDefaultTailTolerance);

}  // namespace qkerr

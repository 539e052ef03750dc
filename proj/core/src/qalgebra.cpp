#include "qkerr/qalgebra.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "qkerr/errors.hpp"

namespace qkerr {
namespace {

std::string show(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

}  // namespace

Deformation::Deformation(double q) : q_(q) {
    if (!(q > 0.0 && q <= 1.0))
        throw DomainError("deformation parameter q must lie in (0, 1], got " + show(q));
}

double Deformation::saturation() const noexcept {
    if (undeformed()) return std::numeric_limits<double>::infinity();
    return 1.0 / (1.0 - q_ * q_);
}

void CoherentSpec::validate(Deformation q) const {
    if (!(alpha_sq >= 0.0) || !std::isfinite(alpha_sq))
        throw DomainError("|alpha|^2 must be finite and non-negative");
    if (!std::isfinite(alpha_phase)) throw DomainError("arg(alpha) must be finite");
    if (!q.undeformed() && alpha_sq >= q.saturation())
        throw DomainError("|alpha|^2 = " + show(alpha_sq) +
                          " is outside the q-exponential radius 1/(1-q^2) = " +
                          show(q.saturation()));
}

double box_n(std::size_t n, Deformation q) {
    if (q.undeformed()) return static_cast<double>(n);
    // expm1 keeps full relative precision as q -> 1.
    const double log_q2 = 2.0 * std::log(q.value());
    return std::expm1(static_cast<double>(n) * log_q2) / std::expm1(log_q2);
}

double q_factorial(std::size_t n, Deformation q) {
    double product = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        product *= box_n(k, q);
        if (!std::isfinite(product))
            throw NumericalError("[" + std::to_string(n) + "]! overflows double precision");
    }
    return product;
}

double q_exponential(double x, Deformation q, double tail_tol) {
    if (!(tail_tol > 0.0)) throw DomainError("q_exponential: tail tolerance must be positive");
    if (!std::isfinite(x)) throw DomainError("q_exponential: argument must be finite");
    if (!q.undeformed() && std::abs(x) >= q.saturation())
        throw ConvergenceError("q_exponential: |x| = " + show(std::abs(x)) +
                               " is not inside the radius " + show(q.saturation()));

    double sum = 1.0;
    double term = 1.0;
    for (std::size_t n = 1; n < kQExponentialMaxTerms; ++n) {
        term *= x / box_n(n, q);
        sum += term;
        if (std::abs(term) < tail_tol * std::abs(sum)) return sum;
    }
    throw ConvergenceError("q_exponential: no convergence after " +
                           std::to_string(kQExponentialMaxTerms) + " terms");
}

double ladder_down_element(std::size_t n, Deformation q) {
    if (n == 0) throw DomainError("ladder_down_element: A annihilates the vacuum (n must be >= 1)");
    return std::sqrt(box_n(n, q));
}

double ladder_up_element(std::size_t n, Deformation q) { return std::sqrt(box_n(n + 1, q)); }

namespace {

// Weights proportional to |alpha|^{2n}/[n]! until they become negligible against the
// running sum. The common scale is arbitrary; it is lowered whenever the sum grows large.
std::vector<double> coherent_weights(double alpha_sq, Deformation q) {
    std::vector<double> w{1.0};
    if (alpha_sq == 0.0) return w;
    double sum = 1.0;
    double term = 1.0;
    for (std::size_t n = 1; n < kQExponentialMaxTerms; ++n) {
        term *= alpha_sq / box_n(n, q);
        w.push_back(term);
        sum += term;
        if (sum > 1e200) {
            for (auto& x : w) x *= 1e-200;
            sum *= 1e-200;
            term *= 1e-200;
        }
        if (term < 1e-30 * sum && alpha_sq / box_n(n + 1, q) < 1.0) return w;
    }
    throw ConvergenceError("coherent weights did not decay within " +
                           std::to_string(kQExponentialMaxTerms) + " terms");
}

// tails[k] = sum of weights with index > k.
std::vector<double> tail_sums(const std::vector<double>& w) {
    std::vector<double> tails(w.size(), 0.0);
    for (std::size_t k = w.size() - 1; k-- > 0;) tails[k] = tails[k + 1] + w[k + 1];
    return tails;
}

double total_weight(const std::vector<double>& w) {
    double total = 0.0;
    for (double x : w) total += x;
    return total;
}

}  // namespace

std::size_t coherent_cutoff(const CoherentSpec& spec, Deformation q, double tail_tol) {
    spec.validate(q);
    if (!(tail_tol > 0.0)) throw DomainError("coherent_cutoff: tail tolerance must be positive");
    const auto w = coherent_weights(spec.alpha_sq, q);
    const auto tails = tail_sums(w);
    const double total = total_weight(w);
    for (std::size_t k = 0; k < w.size() && k <= kMaxCoherentCutoff; ++k)
        if (tails[k] <= tail_tol * total) return k;
    throw TruncationError("coherent state needs more than " + std::to_string(kMaxCoherentCutoff) +
                          " Fock levels for tail tolerance " + show(tail_tol));
}

std::vector<Complex> coherent_amplitudes(const CoherentSpec& spec, Deformation q, std::size_t n_max,
                                         double tail_tol) {
    spec.validate(q);
    const auto w = coherent_weights(spec.alpha_sq, q);
    const auto tails = tail_sums(w);
    const double total = total_weight(w);
    const double discarded = n_max < w.size() ? tails[n_max] : 0.0;
    if (discarded > tail_tol * total)
        throw TruncationError("cutoff n_max = " + std::to_string(n_max) + " discards weight " +
                              show(discarded / total) + " (> " +
                              show(tail_tol) + ")");

    std::vector<Complex> c(n_max + 1, Complex{0.0, 0.0});
    const double modulus = std::sqrt(spec.alpha_sq);
    const Complex phase = std::polar(1.0, spec.alpha_phase);
    Complex value{1.0, 0.0};
    c[0] = value;
    for (std::size_t n = 1; n <= n_max; ++n) {
        value *= modulus * phase / std::sqrt(box_n(n, q));
        c[n] = value;
    }

    double norm_sq = 0.0;
    for (const auto& x : c) norm_sq += std::norm(x);
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    for (auto& x : c) x *= inv_norm;
    return c;
}

}  // namespace qkerr

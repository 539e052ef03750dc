#include "qkerr/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qkerr/errors.hpp"

namespace qkerr {
namespace {

constexpr double kSignTolerance = 1e-10;

// Householder reduction of the symmetric matrix held in v to tridiagonal form.
// On exit v holds the accumulated orthogonal transform, d the diagonal and
// e[1..n-1] the subdiagonal (e[0] = 0).
void householder_tridiagonalize(RealMatrix& v, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = v.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (std::size_t k = j + 1; k <= i - 1; ++k) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
            for (std::size_t j = 0; j <= i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
                for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
            }
        }
        for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e[1..n-1]); rotations are accumulated into v.
void implicit_ql(std::vector<double>& d, std::vector<double>& e, RealMatrix& v,
                 std::optional<std::size_t> block_label) {
    const std::size_t n = d.size();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    const std::size_t budget = kQLIterationsPerRow * n;
    std::size_t iterations = 0;
    const double eps = std::numeric_limits<double>::epsilon();
    double shift_total = 0.0;
    double tst1 = 0.0;

    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;

        if (m > l) {
            do {
                if (++iterations > budget) {
                    std::string where = block_label ? " in block N=" + std::to_string(*block_label) : "";
                    throw ConvergenceError("implicit QL did not converge after " +
                                           std::to_string(budget) + " iterations" + where);
                }
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                shift_total += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for (std::size_t k = 0; k < v.rows(); ++k) {
                        h = v(k, i + 1);
                        v(k, i + 1) = s * v(k, i) + c * h;
                        v(k, i) = c * v(k, i) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += shift_total;
        e[l] = 0.0;
    }
}

// Ascending order; ties keep their QL order so the output stays deterministic.
void sort_ascending(std::vector<double>& values, RealMatrix& vectors) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> sorted_values(n);
    RealMatrix sorted_vectors(vectors.rows(), n);
    for (std::size_t j = 0; j < n; ++j) {
        sorted_values[j] = values[order[j]];
        for (std::size_t k = 0; k < vectors.rows(); ++k) sorted_vectors(k, j) = vectors(k, order[j]);
    }
    values = std::move(sorted_values);
    vectors = std::move(sorted_vectors);
}

void fix_signs(RealMatrix& vectors) {
    for (std::size_t j = 0; j < vectors.cols(); ++j) {
        for (std::size_t k = 0; k < vectors.rows(); ++k) {
            const double x = vectors(k, j);
            if (std::abs(x) <= kSignTolerance) continue;
            if (x < 0)
                for (std::size_t r = 0; r < vectors.rows(); ++r) vectors(r, j) = -vectors(r, j);
            break;
        }
    }
}

void require_finite(std::span<const double> xs, const char* what) {
    for (double x : xs)
        if (!std::isfinite(x)) throw DomainError(std::string(what) + " contains a non-finite entry");
}

}  // namespace

BlockSpectrum eigh_tridiagonal(std::span<const double> diag, std::span<const double> offdiag,
                               std::optional<std::size_t> block_label) {
    if (diag.empty()) throw DomainError("eigh_tridiagonal: empty matrix");
    if (offdiag.size() + 1 != diag.size())
        throw DomainError("eigh_tridiagonal: off-diagonal length must be one less than the diagonal");
    require_finite(diag, "diagonal");
    require_finite(offdiag, "off-diagonal");

    const std::size_t n = diag.size();
    std::vector<double> d(diag.begin(), diag.end());
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) e[i] = offdiag[i - 1];
    RealMatrix v = RealMatrix::identity(n);

    implicit_ql(d, e, v, block_label);
    sort_ascending(d, v);
    fix_signs(v);
    return BlockSpectrum{n - 1, std::move(d), std::move(v)};
}

SymmetricEigen eigh_symmetric(const RealMatrix& matrix) {
    if (!matrix.square() || matrix.rows() == 0)
        throw DomainError("eigh_symmetric: expected a non-empty square matrix");
    require_finite(matrix.data(), "matrix");
    const std::size_t n = matrix.rows();
    RealMatrix v(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) v(i, j) = v(j, i) = matrix(i, j);

    std::vector<double> d, e;
    if (n == 1) {
        d = {v(0, 0)};
        return SymmetricEigen{std::move(d), RealMatrix::identity(1)};
    }
    householder_tridiagonalize(v, d, e);
    implicit_ql(d, e, v, std::nullopt);
    sort_ascending(d, v);
    fix_signs(v);
    return SymmetricEigen{std::move(d), std::move(v)};
}

namespace {

using ComplexVector = std::vector<Complex>;

Complex inner(const ComplexVector& a, const ComplexVector& b) {
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm(const ComplexVector& a) { return std::sqrt(std::real(inner(a, a))); }

void project_out(ComplexVector& z, const std::vector<ComplexVector>& basis) {
    for (const auto& q : basis) {
        const Complex overlap = inner(q, z);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] -= overlap * q[i];
    }
}

// Rotates the global phase so the first non-negligible component is real positive.
void fix_phase(ComplexVector& z) {
    for (const auto& x : z) {
        const double mag = std::abs(x);
        if (mag <= kSignTolerance) continue;
        const Complex rotation = std::conj(x) / mag;
        for (auto& y : z) y *= rotation;
        return;
    }
}

}  // namespace

HermitianEigen eigh_hermitian(const ComplexMatrix& matrix) {
    if (!matrix.square() || matrix.rows() == 0)
        throw DomainError("eigh_hermitian: expected a non-empty square matrix");
    const std::size_t d = matrix.rows();

    double scale = 1.0;
    for (const auto& x : matrix.data()) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw DomainError("eigh_hermitian: matrix contains a non-finite entry");
        scale = std::max(scale, std::abs(x));
    }
    double defect = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            defect = std::max(defect, std::abs(matrix(i, j) - std::conj(matrix(j, i))));
    if (defect > kHermiticityTolerance * scale)
        throw NumericalError("eigh_hermitian: matrix is not Hermitian (defect " +
                             std::to_string(defect) + ")");

    RealMatrix embedding(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const Complex h = 0.5 * (matrix(i, j) + std::conj(matrix(j, i)));
            embedding(i, j) = h.real();
            embedding(d + i, d + j) = h.real();
            embedding(i, d + j) = -h.imag();
            embedding(d + i, j) = h.imag();
        }
    }
    const SymmetricEigen real = eigh_symmetric(embedding);

    HermitianEigen out;
    out.eigenvalues.reserve(d);
    out.eigenvectors = ComplexMatrix(d, d);
    std::size_t column = 0;

    // Every eigenvalue of the embedding appears twice. Group near-equal runs, then pick an
    // orthonormal complex basis of each run from the candidate vectors u + i w.
    std::size_t begin = 0;
    while (begin < 2 * d) {
        std::size_t end = begin + 1;
        while (end < 2 * d &&
               real.eigenvalues[end] - real.eigenvalues[end - 1] <
                   kPairingTolerance * (1.0 + std::abs(real.eigenvalues[end])))
            ++end;
        const std::size_t size = end - begin;
        if (size % 2 != 0)
            throw NumericalError("eigh_hermitian: embedding eigenvalue near " +
                                 std::to_string(real.eigenvalues[begin]) + " is not doubled");

        std::vector<ComplexVector> candidates;
        for (std::size_t c = begin; c < end; ++c) {
            ComplexVector z(d);
            for (std::size_t i = 0; i < d; ++i)
                z[i] = Complex{real.eigenvectors(i, c), real.eigenvectors(d + i, c)};
            candidates.push_back(std::move(z));
        }

        std::vector<ComplexVector> basis;
        std::vector<bool> used(size, false);
        for (std::size_t k = 0; k < size / 2; ++k) {
            std::size_t best = size;
            double best_norm = -1.0;
            ComplexVector best_vector;
            for (std::size_t c = 0; c < size; ++c) {
                if (used[c]) continue;
                ComplexVector z = candidates[c];
                project_out(z, basis);
                const double r = norm(z);
                if (r > best_norm) {
                    best_norm = r;
                    best = c;
                    best_vector = std::move(z);
                }
            }
            if (best == size || best_norm < 1e-3)
                throw NumericalError("eigh_hermitian: could not pair embedding eigenvectors");
            used[best] = true;
            project_out(best_vector, basis);
            const double r = norm(best_vector);
            for (auto& x : best_vector) x /= r;
            fix_phase(best_vector);
            basis.push_back(std::move(best_vector));

            out.eigenvalues.push_back(
                0.5 * (real.eigenvalues[begin + 2 * k] + real.eigenvalues[begin + 2 * k + 1]));
        }
        for (const auto& q : basis) {
            for (std::size_t i = 0; i < d; ++i) out.eigenvectors(i, column) = q[i];
            ++column;
        }
        begin = end;
    }
    return out;
}

}  // namespace qkerr

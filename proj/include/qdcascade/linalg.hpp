#pragma once

// Small dense complex linear algebra for the 4-level system and its
// 16-dimensional superoperator space. Dimensions are template parameters;
// nothing here allocates except Spectrum.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qdcascade/errors.hpp"

namespace qdcascade {

using cplx = std::complex<double>;

template <std::size_t N>
using Vector = std::array<cplx, N>;

/// Square complex matrix, row-major, value semantics.
template <std::size_t N>
class Matrix {
public:
    static constexpr std::size_t dim = N;

    constexpr Matrix() = default;

    static Matrix zero() { return Matrix{}; }

    static Matrix identity()
    {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const Vector<N>& d)
    {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }

    /// |i><j|
    static Matrix unit(std::size_t i, std::size_t j)
    {
        Matrix m;
        m(i, j) = 1.0;
        return m;
    }

    /// Row-major construction; throws DimensionError unless entries.size() == N*N.
    static Matrix from_entries(std::span<const cplx> entries)
    {
        if (entries.size() != N * N)
            throw DimensionError("expected " + std::to_string(N * N) + " entries, got " +
                                 std::to_string(entries.size()));
        Matrix m;
        std::copy(entries.begin(), entries.end(), m.a_.begin());
        return m;
    }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * N + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * N + j]; }

    std::span<const cplx, N * N> entries() const { return a_; }

    Matrix& operator+=(const Matrix& o)
    {
        for (std::size_t k = 0; k < N * N; ++k) a_[k] += o.a_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o)
    {
        for (std::size_t k = 0; k < N * N; ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Matrix& operator*=(cplx s)
    {
        for (auto& x : a_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }
    friend Matrix operator-(Matrix a)
    {
        for (auto& x : a.a_) x = -x;
        return a;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        Matrix c;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < N; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Vector<N> operator*(const Matrix& a, const Vector<N>& v)
    {
        Vector<N> r{};
        for (std::size_t i = 0; i < N; ++i) {
            cplx s{};
            for (std::size_t j = 0; j < N; ++j) s += a(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

    Matrix adjoint() const
    {
        Matrix r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    Matrix transpose() const
    {
        Matrix r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Matrix conjugate() const
    {
        Matrix r = *this;
        for (auto& x : r.a_) x = std::conj(x);
        return r;
    }

    cplx trace() const
    {
        cplx t{};
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    /// Largest entry modulus.
    double max_abs() const
    {
        double m = 0.0;
        for (const auto& x : a_) m = std::max(m, std::abs(x));
        return m;
    }

    /// Maximum absolute column sum.
    double norm1() const
    {
        double best = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < N; ++i) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    bool all_finite() const
    {
        return std::all_of(a_.begin(), a_.end(), [](const cplx& x) {
            return std::isfinite(x.real()) && std::isfinite(x.imag());
        });
    }

private:
    std::array<cplx, N * N> a_{};
};

using DensityMatrix4 = Matrix<4>;
using Superoperator16 = Matrix<16>;

/// Eigenvalues sorted descending by real part (ties: descending imaginary part).
struct Spectrum {
    std::vector<cplx> eigenvalues;

    std::size_t size() const { return eigenvalues.size(); }
    const cplx& operator[](std::size_t i) const { return eigenvalues[i]; }
};

template <std::size_t N>
Matrix<N> hermitize(const Matrix<N>& m)
{
    Matrix<N> r = m + m.adjoint();
    r *= 0.5;
    return r;
}

/// max |m - m^dagger| entrywise.
template <std::size_t N>
double hermiticity_defect(const Matrix<N>& m)
{
    return (m - m.adjoint()).max_abs();
}

template <std::size_t N, std::size_t M>
Matrix<N * M> kron(const Matrix<N>& a, const Matrix<M>& b)
{
    Matrix<N * M> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < M; ++k)
                for (std::size_t l = 0; l < M; ++l) r(i * M + k, j * M + l) = aij * b(k, l);
        }
    return r;
}

/// Column stacking: v[i + j*N] = m(i, j), so vec(A X B) = (B^T kron A) vec(X).
template <std::size_t N>
Vector<N * N> vectorize(const Matrix<N>& m)
{
    Vector<N * N> v{};
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t i = 0; i < N; ++i) v[i + j * N] = m(i, j);
    return v;
}

template <std::size_t N>
Matrix<N> devectorize(std::span<const cplx> v)
{
    if (v.size() != N * N)
        throw DimensionError("devectorize: length " + std::to_string(v.size()) + " is not " +
                             std::to_string(N) + "^2");
    Matrix<N> m;
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t i = 0; i < N; ++i) m(i, j) = v[i + j * N];
    return m;
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
template <std::size_t N>
Matrix<N> expm(const Matrix<N>& m)
{
    const double norm = m.norm1();
    if (!std::isfinite(norm)) throw NumericError("expm: non-finite input");
    if (norm == 0.0) return Matrix<N>::identity();

    int squarings = 0;
    if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    if (squarings > 1000) throw NumericError("expm: norm out of representable range");

    const Matrix<N> a = m * std::ldexp(1.0, -squarings);
    Matrix<N> sum = Matrix<N>::identity();
    Matrix<N> term = Matrix<N>::identity();
    // ||a|| <= 1/4, so 24 terms are far below double epsilon.
    for (int k = 1; k <= 24; ++k) {
        term = term * a;
        term *= 1.0 / k;
        sum += term;
        if (term.max_abs() <= 1e-18 * sum.max_abs()) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    if (!sum.all_finite()) throw NumericError("expm: overflow during squaring");
    return sum;
}

namespace detail {

// Unitary similarity to upper Hessenberg form by Householder reflections.
template <std::size_t N>
void reduce_to_hessenberg(Matrix<N>& h)
{
    for (std::size_t k = 0; k + 2 < N; ++k) {
        double xnorm = 0.0;
        for (std::size_t i = k + 1; i < N; ++i) xnorm += std::norm(h(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;

        const cplx x0 = h(k + 1, k);
        const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0};
        const cplx alpha = -phase * xnorm;

        std::array<cplx, N> v{};
        for (std::size_t i = k + 1; i < N; ++i) v[i] = h(i, k);
        v[k + 1] -= alpha;
        double vnorm = 0.0;
        for (std::size_t i = k + 1; i < N; ++i) vnorm += std::norm(v[i]);
        vnorm = std::sqrt(vnorm);
        if (vnorm == 0.0) continue;
        for (std::size_t i = k + 1; i < N; ++i) v[i] /= vnorm;

        // h <- (I - 2 v v^H) h
        for (std::size_t j = 0; j < N; ++j) {
            cplx s{};
            for (std::size_t i = k + 1; i < N; ++i) s += std::conj(v[i]) * h(i, j);
            for (std::size_t i = k + 1; i < N; ++i) h(i, j) -= 2.0 * v[i] * s;
        }
        // h <- h (I - 2 v v^H)
        for (std::size_t i = 0; i < N; ++i) {
            cplx s{};
            for (std::size_t j = k + 1; j < N; ++j) s += h(i, j) * v[j];
            for (std::size_t j = k + 1; j < N; ++j) h(i, j) -= 2.0 * s * std::conj(v[j]);
        }
        for (std::size_t i = k + 2; i < N; ++i) h(i, k) = 0.0;
    }
}

inline cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d)
{
    // eigenvalue of [[a b][c d]] closest to d
    const cplx tr_half = 0.5 * (a + d);
    const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    const cplx l1 = tr_half + disc;
    const cplx l2 = tr_half - disc;
    return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

} // namespace detail

/// All eigenvalues of a general complex matrix: Hessenberg reduction followed
/// by single-shift QR with Wilkinson shifts and deflation.
template <std::size_t N>
Spectrum eigenvalues_general(const Matrix<N>& m, int max_iterations_per_eigenvalue = 60)
{
    if (!m.all_finite()) throw NumericError("eigenvalues_general: non-finite input");
    Matrix<N> h = m;
    detail::reduce_to_hessenberg(h);

    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max(h.max_abs(), std::numeric_limits<double>::min());
    std::vector<cplx> eig(N);

    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(N) - 1;
    int iter = 0;
    int total_iter = 0;
    while (hi >= 0) {
        // locate the start of the unreduced block ending at hi
        std::ptrdiff_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            const double diag = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
            if (sub <= eps * (diag > 0.0 ? diag : scale)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eig[static_cast<std::size_t>(hi)] = h(hi, hi);
            --hi;
            iter = 0;
            continue;
        }
        if (iter >= max_iterations_per_eigenvalue)
            throw NumericError("eigenvalues_general: QR iteration did not converge after " +
                               std::to_string(total_iter) + " iterations");
        ++iter;
        ++total_iter;

        cplx mu;
        if (iter % 11 == 0) {
            // exceptional shift to break cycles
            mu = h(hi, hi) + cplx{std::abs(h(hi, hi - 1)), 0.0} * 0.75;
        } else {
            mu = detail::wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        }

        const auto l = static_cast<std::size_t>(lo);
        const auto u = static_cast<std::size_t>(hi);
        for (std::size_t i = l; i <= u; ++i) h(i, i) -= mu;

        std::vector<double> cs(u - l);
        std::vector<cplx> sn(u - l);
        for (std::size_t k = l; k < u; ++k) {
            const cplx a = h(k, k);
            const cplx b = h(k + 1, k);
            const double nrm = std::hypot(std::abs(a), std::abs(b));
            double c;
            cplx s;
            if (nrm == 0.0) {
                c = 1.0;
                s = 0.0;
            } else if (std::abs(a) == 0.0) {
                c = 0.0;
                s = std::conj(b) / std::abs(b);
            } else {
                c = std::abs(a) / nrm;
                s = (a / std::abs(a)) * std::conj(b) / nrm;
            }
            cs[k - l] = c;
            sn[k - l] = s;
            for (std::size_t j = k; j <= u; ++j) {
                const cplx x = h(k, j);
                const cplx y = h(k + 1, j);
                h(k, j) = c * x + s * y;
                h(k + 1, j) = -std::conj(s) * x + c * y;
            }
        }
        for (std::size_t k = l; k < u; ++k) {
            const double c = cs[k - l];
            const cplx s = sn[k - l];
            const std::size_t rmax = std::min(k + 2, u);
            for (std::size_t i = l; i <= rmax; ++i) {
                const cplx x = h(i, k);
                const cplx y = h(i, k + 1);
                h(i, k) = x * c + y * std::conj(s);
                h(i, k + 1) = -x * s + y * c;
            }
        }
        for (std::size_t i = l; i <= u; ++i) h(i, i) += mu;
    }

    std::sort(eig.begin(), eig.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return Spectrum{std::move(eig)};
}

} // namespace qdcascade

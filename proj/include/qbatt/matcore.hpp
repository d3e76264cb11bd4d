// matcore.hpp — Dense complex matrices, Kronecker products, eigensolvers and
// matrix exponentials for the small (<= 64) operators used throughout qbatt.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qbatt/error.hpp"

namespace qbatt {

using cplx = std::complex<double>;

inline constexpr cplx I_UNIT{0.0, 1.0};

// Row-major dense complex matrix. Column vectors are n x 1 matrices.
class CMatrix {
public:
    CMatrix() = default;

    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument("CMatrix: entry count does not match shape");
        }
    }

    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) {
                throw std::invalid_argument("CMatrix: ragged initializer");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMatrix diagonal(std::span<const cplx> d) {
        CMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static CMatrix diagonal(std::span<const double> d) {
        CMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static CMatrix column(std::span<const cplx> v) {
        return CMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    // Linear access, row-major.
    cplx& operator[](std::size_t k) { return data_[k]; }
    const cplx& operator[](std::size_t k) const { return data_[k]; }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    CMatrix col(std::size_t j) const {
        CMatrix c(rows_, 1);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void set_col(std::size_t j, const CMatrix& c) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

    CMatrix adjoint() const {
        CMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    CMatrix transpose() const {
        CMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    CMatrix conj() const {
        CMatrix r = *this;
        for (auto& z : r.data_) z = std::conj(z);
        return r;
    }

    cplx trace() const {
        cplx t{0.0, 0.0};
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double norm_fro() const {
        double s = 0.0;
        for (const auto& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    // Maximum absolute column sum.
    double norm_one() const {
        double best = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
            return std::isfinite(z.real()) && std::isfinite(z.imag());
        });
    }

    CMatrix& operator+=(const CMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    CMatrix& operator-=(const CMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    CMatrix& operator*=(cplx s) {
        for (auto& z : data_) z *= s;
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
    friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(CMatrix a, double s) { return a *= cplx{s, 0.0}; }
    friend CMatrix operator*(double s, CMatrix a) { return a *= cplx{s, 0.0}; }
    friend CMatrix operator-(CMatrix a) { return a *= cplx{-1.0, 0.0}; }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("CMatrix: inner dimensions differ in product");
        }
        CMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        }
        return r;
    }

    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    void check_same_shape(const CMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw std::invalid_argument("CMatrix: shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

// (a (x) b)[(i*p + k), (j*q + l)] = a[i,j] * b[k,l] for b of shape p x q.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    const std::size_t p = b.rows();
    const std::size_t q = b.cols();
    CMatrix r(a.rows() * p, a.cols() * q);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < p; ++k)
                for (std::size_t l = 0; l < q; ++l) r(i * p + k, j * q + l) = aij * b(k, l);
        }
    return r;
}

// Hermitian inner product <a|b> of two column vectors.
inline cplx inner(const CMatrix& a, const CMatrix& b) {
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

// ||a - a^dagger||_F / ||a||_F (0 for the zero matrix).
inline double hermiticity_defect(const CMatrix& a) {
    const double n = a.norm_fro();
    if (n == 0.0) return 0.0;
    return (a - a.adjoint()).norm_fro() / n;
}

// ---------------------------------------------------------------------------
// LU factorization with partial pivoting

struct LUFactor {
    CMatrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
    bool singular = false;
};

inline LUFactor lu_factor(const CMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("lu_factor: matrix not square");
    const std::size_t n = a.rows();
    LUFactor f{a, std::vector<std::size_t>(n), 1, false};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    auto& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(m(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(m(i, k)) > best) {
                best = std::abs(m(i, k));
                piv = i;
            }
        }
        if (best == 0.0) {
            f.singular = true;
            continue;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx factor = m(i, k) / m(k, k);
            m(i, k) = factor;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= factor * m(k, j);
        }
    }
    return f;
}

inline cplx determinant(const CMatrix& a) {
    const auto f = lu_factor(a);
    if (f.singular) return {0.0, 0.0};
    cplx d{static_cast<double>(f.sign), 0.0};
    for (std::size_t i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
    return d;
}

// Solves a x = b for every column of b.
inline CMatrix solve(const CMatrix& a, const CMatrix& b) {
    const auto f = lu_factor(a);
    if (f.singular) throw DomainError("solve: matrix is singular");
    const std::size_t n = a.rows();
    CMatrix x(n, b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        std::vector<cplx> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = b(f.perm[i], c);
            for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
            y[i] = s;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            cplx s = y[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * x(j, c);
            x(ii, c) = s / f.lu(ii, ii);
        }
    }
    return x;
}

inline CMatrix inverse(const CMatrix& a) { return solve(a, CMatrix::identity(a.rows())); }

// ---------------------------------------------------------------------------
// Eigensolvers

struct EigenPair {
    cplx value;
    CMatrix vector; // unit 2-norm column
};

struct EigenDecomposition {
    std::vector<EigenPair> pairs;
    // False when the eigenvector matrix is numerically rank deficient, i.e. the
    // input is (close to) defective.
    bool diagonalizable = true;

    CMatrix vectors() const {
        if (pairs.empty()) return {};
        CMatrix v(pairs.front().vector.rows(), pairs.size());
        for (std::size_t k = 0; k < pairs.size(); ++k) v.set_col(k, pairs[k].vector);
        return v;
    }

    std::vector<cplx> values() const {
        std::vector<cplx> out;
        out.reserve(pairs.size());
        for (const auto& p : pairs) out.push_back(p.value);
        return out;
    }
};

struct EigOptions {
    std::size_t max_dim = 64;
    std::size_t iteration_factor = 100; // cap = factor * n^2 QR sweeps
    double defect_tol = 1e-8;           // smallest singular value of V below this => defective
};

struct SvdResult {
    std::vector<double> singular_values; // unsorted, matches columns of v
    CMatrix v;                           // right singular vectors (columns)
};

namespace detail {

// Givens rotation G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0].
struct Givens {
    double c = 1.0;
    cplx s{0.0, 0.0};
};

inline Givens make_givens(cplx a, cplx b) {
    const double ab = std::abs(b);
    if (ab == 0.0) return {};
    const double aa = std::abs(a);
    const double nrm = std::hypot(aa, ab);
    if (aa == 0.0) return {0.0, std::conj(b) / ab};
    return {aa / nrm, (a / aa) * std::conj(b) / nrm};
}

// Householder reduction to upper Hessenberg form; q accumulates the similarity.
inline void hessenberg(CMatrix& h, CMatrix& q) {
    const std::size_t n = h.rows();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;
        const cplx x0 = h(k + 1, k);
        const cplx phase = std::abs(x0) == 0.0 ? cplx{1.0, 0.0} : x0 / std::abs(x0);
        const cplx alpha = -phase * xnorm;
        std::vector<cplx> v(n, cplx{});
        for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
        v[k + 1] -= alpha;
        double vnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
        vnorm = std::sqrt(vnorm);
        if (vnorm == 0.0) continue;
        for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;
        // h <- (I - 2 v v^H) h
        for (std::size_t j = 0; j < n; ++j) {
            cplx s{};
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= 2.0 * v[i] * s;
        }
        // h <- h (I - 2 v v^H), q <- q (I - 2 v v^H)
        for (std::size_t i = 0; i < n; ++i) {
            cplx s{}, t{};
            for (std::size_t j = k + 1; j < n; ++j) {
                s += h(i, j) * v[j];
                t += q(i, j) * v[j];
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                h(i, j) -= 2.0 * s * std::conj(v[j]);
                q(i, j) -= 2.0 * t * std::conj(v[j]);
            }
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// Shifted QR iteration on a Hessenberg matrix; leaves the Schur form in h.
inline void schur_qr(CMatrix& h, CMatrix& q, std::size_t max_iter) {
    const std::size_t n = h.rows();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::size_t total = 0;
    std::size_t since_deflation = 0;
    std::size_t hi = n == 0 ? 0 : n - 1;
    while (hi > 0) {
        std::size_t lo = hi;
        while (lo > 0) {
            double scale = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
            if (scale == 0.0) scale = h.norm_fro();
            if (std::abs(h(lo, lo - 1)) <= eps * scale) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            since_deflation = 0;
            continue;
        }
        if (++total > max_iter) {
            throw NonConvergence("eig_general: QR iteration exceeded its iteration cap");
        }
        ++since_deflation;

        cplx mu;
        if (since_deflation % 11 == 0) {
            // Exceptional shift to break cycles.
            mu = h(hi, hi) + cplx{std::abs(h(hi, hi - 1)), 0.0} * 0.75;
        } else {
            const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
            const cplx c = h(hi, hi - 1), d = h(hi, hi);
            const cplx tr_half = 0.5 * (a + d);
            const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
            const cplx e1 = tr_half + disc, e2 = tr_half - disc;
            mu = std::abs(e1 - d) < std::abs(e2 - d) ? e1 : e2;
        }

        for (std::size_t k = lo; k < hi; ++k) {
            cplx x, y;
            if (k == lo) {
                x = h(lo, lo) - mu;
                y = h(lo + 1, lo);
            } else {
                x = h(k, k - 1);
                y = h(k + 1, k - 1);
            }
            const Givens g = make_givens(x, y);
            const std::size_t jstart = k == lo ? lo : k - 1;
            for (std::size_t j = jstart; j < n; ++j) {
                const cplx t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = g.c * t1 + g.s * t2;
                h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
            }
            const std::size_t iend = std::min(k + 2, hi);
            for (std::size_t i = 0; i <= iend; ++i) {
                const cplx t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = g.c * t1 + std::conj(g.s) * t2;
                h(i, k + 1) = -g.s * t1 + g.c * t2;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const cplx t1 = q(i, k), t2 = q(i, k + 1);
                q(i, k) = g.c * t1 + std::conj(g.s) * t2;
                q(i, k + 1) = -g.s * t1 + g.c * t2;
            }
            if (k > lo) h(k + 1, k - 1) = 0.0;
        }
    }
}

// Right eigenvectors of an upper triangular matrix by back substitution.
inline CMatrix triangular_eigenvectors(const CMatrix& t) {
    const std::size_t n = t.rows();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double small = std::max(eps * t.norm_fro(), std::numeric_limits<double>::min());
    CMatrix y(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx lam = t(k, k);
        y(k, k) = 1.0;
        for (std::size_t ii = k; ii-- > 0;) {
            cplx s{};
            for (std::size_t j = ii + 1; j <= k; ++j) s += t(ii, j) * y(j, k);
            cplx denom = t(ii, ii) - lam;
            if (std::abs(denom) < small) denom = small;
            y(ii, k) = -s / denom;
            if (std::abs(y(ii, k)) > 1e100) {
                for (std::size_t j = ii; j <= k; ++j) y(j, k) *= 1e-100;
            }
        }
    }
    return y;
}

} // namespace detail

// One-sided Jacobi SVD. Accurate to eps * ||a||_F in absolute terms, which is
// what kernel detection needs.
inline SvdResult svd_jacobi(const CMatrix& a, std::size_t max_sweeps = 80) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    CMatrix w = a;
    CMatrix v = CMatrix::identity(n);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0;
                cplx gamma{};
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += std::norm(w(i, p));
                    beta += std::norm(w(i, q));
                    gamma += std::conj(w(i, p)) * w(i, q);
                }
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const cplx phase = std::conj(gamma) / g; // e^{-i arg gamma}
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                auto rotate = [&](CMatrix& x, std::size_t rows) {
                    for (std::size_t i = 0; i < rows; ++i) {
                        const cplx xp = x(i, p);
                        const cplx xq = phase * x(i, q);
                        x(i, p) = c * xp - s * xq;
                        x(i, q) = s * xp + c * xq;
                    }
                };
                rotate(w, m);
                rotate(v, n);
            }
        }
        if (!rotated) break;
    }
    SvdResult out{std::vector<double>(n), v};
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::norm(w(i, j));
        out.singular_values[j] = std::sqrt(s);
    }
    return out;
}

// Full set of right eigenpairs of a general square matrix via Hessenberg
// reduction and single-shift complex QR. Eigenvalues are repeated by algebraic
// multiplicity; `diagonalizable` flags a rank-deficient eigenvector set.
inline EigenDecomposition eig_general(const CMatrix& a, const EigOptions& opt = {}) {
    if (!a.is_square()) throw std::invalid_argument("eig_general: matrix not square");
    const std::size_t n = a.rows();
    if (n > opt.max_dim) throw std::invalid_argument("eig_general: dimension exceeds limit");
    EigenDecomposition out;
    if (n == 0) return out;

    CMatrix h = a;
    CMatrix q = CMatrix::identity(n);
    detail::hessenberg(h, q);
    detail::schur_qr(h, q, opt.iteration_factor * n * n);

    const CMatrix v = q * detail::triangular_eigenvectors(h);
    out.pairs.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        CMatrix x = v.col(k);
        const double nrm = x.norm_fro();
        x *= cplx{1.0 / nrm, 0.0};
        out.pairs.push_back({h(k, k), std::move(x)});
    }
    const auto sv = svd_jacobi(out.vectors()).singular_values;
    const double smin = *std::min_element(sv.begin(), sv.end());
    out.diagonalizable = smin >= opt.defect_tol;
    return out;
}

struct HermitianEigen {
    std::vector<double> values; // ascending
    CMatrix vectors;            // orthonormal columns matching values

    EigenPair pair(std::size_t k) const { return {cplx{values[k], 0.0}, vectors.col(k)}; }
};

// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
inline HermitianEigen eig_hermitian(const CMatrix& a, double hermitian_tol = 1e-10) {
    if (!a.is_square()) throw std::invalid_argument("eig_hermitian: matrix not square");
    if (hermiticity_defect(a) > hermitian_tol) {
        throw NotHermitian("eig_hermitian: input is not Hermitian within tolerance");
    }
    const std::size_t n = a.rows();
    CMatrix m = 0.5 * (a + a.adjoint());
    CMatrix v = CMatrix::identity(n);
    const double scale = m.norm_fro();
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += std::norm(m(i, j));
        if (std::sqrt(off) <= eps * scale * 1e-2 || off == 0.0) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(m(p, q));
                if (r == 0.0) continue;
                const cplx ph = std::conj(m(p, q)) / r; // e^{-i alpha}
                const double app = m(p, p).real(), aqq = m(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * r, app - aqq);
                const double c = std::cos(theta), s = std::sin(theta);
                // G = diag(1, ph) * [[c, -s], [s, c]]
                const cplx gpp = c, gpq = -s, gqp = ph * s, gqq = ph * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx mp = m(i, p), mq = m(i, q);
                    m(i, p) = mp * gpp + mq * gqp;
                    m(i, q) = mp * gpq + mq * gqq;
                    const cplx vp = v(i, p), vq = v(i, q);
                    v(i, p) = vp * gpp + vq * gqp;
                    v(i, q) = vp * gpq + vq * gqq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx mp = m(p, j), mq = m(q, j);
                    m(p, j) = std::conj(gpp) * mp + std::conj(gqp) * mq;
                    m(q, j) = std::conj(gpq) * mp + std::conj(gqq) * mq;
                }
                m(p, q) = 0.0;
                m(q, p) = 0.0;
                m(p, p) = m(p, p).real();
                m(q, q) = m(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return m(x, x).real() < m(y, y).real();
    });
    HermitianEigen out{std::vector<double>(n), CMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = m(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

// Orthonormal basis of {v : ||a v|| <= tol * ||a||_F}.
inline std::vector<CMatrix> null_space(const CMatrix& a, double tol = 1e-10) {
    if (!a.is_square()) throw std::invalid_argument("null_space: matrix not square");
    const std::size_t n = a.rows();
    const double scale = a.norm_fro();
    if (scale == 0.0) {
        std::vector<CMatrix> all;
        for (std::size_t j = 0; j < n; ++j) all.push_back(CMatrix::identity(n).col(j));
        return all;
    }
    const auto svd = svd_jacobi(a);
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j) {
        if (svd.singular_values[j] <= tol * scale) idx.push_back(j);
    }
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        return svd.singular_values[x] < svd.singular_values[y];
    });
    std::vector<CMatrix> basis;
    for (std::size_t j : idx) basis.push_back(svd.v.col(j));
    return basis;
}

// ---------------------------------------------------------------------------
// Matrix exponential

// exp(a) by scaling and squaring around a truncated Taylor series.
inline CMatrix expm_scaling_squaring(const CMatrix& a) {
    const std::size_t n = a.rows();
    const double nrm = a.norm_one();
    int squarings = 0;
    if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    if (squarings > 1000) throw NonConvergence("expm: norm too large for scaling and squaring");
    const CMatrix x = a * std::ldexp(1.0, -squarings);

    CMatrix result = CMatrix::identity(n);
    CMatrix term = CMatrix::identity(n);
    for (int k = 1; k <= 30; ++k) {
        term = term * x;
        term *= cplx{1.0 / k, 0.0};
        result += term;
        if (term.norm_fro() <= 1e-18 * result.norm_fro()) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

struct PropagatorOptions {
    double condition_limit = 1e8;  // max ||V||_F ||V^-1||_F for the spectral route
    double residual_tol = 1e-9;    // ||V D V^-1 - l||_F <= tol * ||l||_F
    EigOptions eig{};
};

// exp(l t). Spectral route when l is diagonalizable within tolerance, else
// scaling and squaring.
inline CMatrix propagator(const CMatrix& l, double t, const PropagatorOptions& opt = {}) {
    if (!l.is_square()) throw std::invalid_argument("propagator: matrix not square");
    if (t < 0.0) throw std::invalid_argument("propagator: negative time");
    const std::size_t n = l.rows();
    if (t == 0.0 || l.norm_fro() == 0.0) return CMatrix::identity(n);

    const auto dec = eig_general(l, opt.eig);
    if (dec.diagonalizable) {
        const CMatrix v = dec.vectors();
        const auto f = lu_factor(v);
        if (!f.singular) {
            const CMatrix vinv = inverse(v);
            const double cond = v.norm_fro() * vinv.norm_fro();
            const auto vals = dec.values();
            const CMatrix recon = v * CMatrix::diagonal(vals) * vinv;
            if (cond <= opt.condition_limit &&
                (recon - l).norm_fro() <= opt.residual_tol * l.norm_fro()) {
                std::vector<cplx> ex(n);
                for (std::size_t k = 0; k < n; ++k) ex[k] = std::exp(vals[k] * t);
                CMatrix out = v * CMatrix::diagonal(ex) * vinv;
                if (out.all_finite()) return out;
            }
        }
    }
    CMatrix out = expm_scaling_squaring(l * t);
    if (!out.all_finite()) throw NonConvergence("propagator: non-finite result");
    return out;
}

} // namespace qbatt

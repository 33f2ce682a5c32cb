#pragma once

#include "ospq/scalar.hpp"

#include <functional>
#include <vector>

namespace ospq {

using Vec = std::vector<Scalar>;

inline bool vec_is_zero(const Vec& v) {
    for (const auto& x : v) if (!x.is_zero()) return false;
    return true;
}

// Dense matrix over the active field. All entries share the matrix QSpec.
class Mat {
  public:
    Mat() : r_(0), c_(0) {}
    Mat(long r, long c, const QSpec& spec)
        : r_(r), c_(c), spec_(spec), a_(r * c, Scalar::zero(spec)) {}

    static Mat identity(long n, const QSpec& spec) {
        Mat m(n, n, spec);
        for (long i = 0; i < n; ++i) m(i, i) = Scalar::one(spec);
        return m;
    }

    long rows() const { return r_; }
    long cols() const { return c_; }
    const QSpec& spec() const { return spec_; }

    Scalar& operator()(long i, long j) { return a_[i * c_ + j]; }
    const Scalar& operator()(long i, long j) const { return a_[i * c_ + j]; }

    Vec row(long i) const { return Vec(a_.begin() + i * c_, a_.begin() + (i + 1) * c_); }
    void set_row(long i, const Vec& v) { std::copy(v.begin(), v.end(), a_.begin() + i * c_); }

    bool is_zero() const {
        for (const auto& x : a_) if (!x.is_zero()) return false;
        return true;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

    friend Mat operator+(const Mat& a, const Mat& b) {
        Mat m(a.r_, a.c_, a.spec_);
        for (size_t k = 0; k < a.a_.size(); ++k) m.a_[k] = a.a_[k] + b.a_[k];
        return m;
    }
    friend Mat operator-(const Mat& a, const Mat& b) {
        Mat m(a.r_, a.c_, a.spec_);
        for (size_t k = 0; k < a.a_.size(); ++k) m.a_[k] = a.a_[k] - b.a_[k];
        return m;
    }
    Mat operator-() const {
        Mat m(r_, c_, spec_);
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = -a_[k];
        return m;
    }

    // zero-skipping product; E/F/K style operators are sparse
    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.c_ != b.r_) throw std::logic_error("Mat: dimension mismatch");
        Mat m(a.r_, b.c_, a.spec_);
        for (long i = 0; i < a.r_; ++i)
            for (long k = 0; k < a.c_; ++k) {
                const Scalar& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (long j = 0; j < b.c_; ++j) {
                    const Scalar& bkj = b(k, j);
                    if (!bkj.is_zero()) m(i, j) += aik * bkj;
                }
            }
        return m;
    }

    friend Mat operator*(const Scalar& c, const Mat& a) {
        Mat m(a.r_, a.c_, a.spec_);
        if (c.is_zero()) return m;
        for (size_t k = 0; k < a.a_.size(); ++k)
            if (!a.a_[k].is_zero()) m.a_[k] = c * a.a_[k];
        return m;
    }

    Vec apply(const Vec& v) const {  // matrix times column vector
        Vec out(r_, Scalar::zero(spec_));
        for (long i = 0; i < r_; ++i)
            for (long j = 0; j < c_; ++j) {
                const Scalar& x = (*this)(i, j);
                if (!x.is_zero() && !v[j].is_zero()) out[i] += x * v[j];
            }
        return out;
    }

    Mat transpose() const {
        Mat m(c_, r_, spec_);
        for (long i = 0; i < r_; ++i)
            for (long j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    Mat pow(long k) const {
        Mat acc = identity(r_, spec_), base = *this;
        while (k) {
            if (k & 1) acc = acc * base;
            base = (k >>= 1) ? base * base : base;
        }
        return acc;
    }

  private:
    long r_, c_;
    QSpec spec_;
    std::vector<Scalar> a_;
};

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }
inline Mat anticommutator(const Mat& a, const Mat& b) { return a * b + b * a; }

// In-place reduced row echelon form; returns pivot column per row.
inline std::vector<long> rref(Mat& m) {
    std::vector<long> pivots;
    long row = 0;
    for (long col = 0; col < m.cols() && row < m.rows(); ++col) {
        long p = -1;
        for (long i = row; i < m.rows(); ++i)
            if (!m(i, col).is_zero()) { p = i; break; }
        if (p < 0) continue;
        if (p != row)
            for (long j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        Scalar inv = m(row, col).inv();
        for (long j = col; j < m.cols(); ++j)
            if (!m(row, j).is_zero()) m(row, j) = inv * m(row, j);
        for (long i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col).is_zero()) continue;
            Scalar f = m(i, col);
            for (long j = col; j < m.cols(); ++j)
                if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline long rank(Mat m) { return (long)rref(m).size(); }

// Rows of the returned matrix form an rref basis of ker(m) (column vectors x
// with m x = 0), ordered by free column.
inline Mat kernel_basis(Mat m) {
    std::vector<long> pivots = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (long p : pivots) is_pivot[p] = true;
    long dim = m.cols() - (long)pivots.size();
    Mat ker(dim, m.cols(), m.spec());
    long kr = 0;
    for (long free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        ker(kr, free) = Scalar::one(m.spec());
        for (size_t i = 0; i < pivots.size(); ++i)
            ker(kr, pivots[i]) = -m((long)i, free);
        ++kr;
    }
    return ker;
}

// One solution of A x = b, if any.
inline std::optional<Vec> solve_linear(const Mat& A, const Vec& b) {
    Mat aug(A.rows(), A.cols() + 1, A.spec());
    for (long i = 0; i < A.rows(); ++i) {
        for (long j = 0; j < A.cols(); ++j) aug(i, j) = A(i, j);
        aug(i, A.cols()) = b[i];
    }
    std::vector<long> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == A.cols()) return std::nullopt;
    Vec x(A.cols(), Scalar::zero(A.spec()));
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug((long)i, A.cols());
    return x;
}

// Incremental echelonized span of row vectors; supports membership tests and
// coordinates relative to the stored rref rows.
class SpanBuilder {
  public:
    explicit SpanBuilder(long width, const QSpec& spec) : width_(width), spec_(spec) {}

    long dim() const { return (long)rows_.size(); }
    long width() const { return width_; }
    const std::vector<Vec>& rows() const { return rows_; }
    const std::vector<long>& pivots() const { return pivots_; }

    // Reduce v against the span; returns the residue.
    Vec reduce(Vec v) const {
        for (size_t i = 0; i < rows_.size(); ++i) {
            Scalar c = v[pivots_[i]];  // by value: the loop overwrites v[pivot]
            if (c.is_zero()) continue;
            for (long j = 0; j < width_; ++j)
                if (!rows_[i][j].is_zero()) v[j] -= c * rows_[i][j];
        }
        return v;
    }

    bool contains(const Vec& v) const { return vec_is_zero(reduce(v)); }

    // Insert v; returns true if it enlarged the span.
    bool add(Vec v) {
        v = reduce(std::move(v));
        long piv = -1;
        for (long j = 0; j < width_; ++j)
            if (!v[j].is_zero()) { piv = j; break; }
        if (piv < 0) return false;
        Scalar inv = v[piv].inv();
        for (long j = piv; j < width_; ++j)
            if (!v[j].is_zero()) v[j] = inv * v[j];
        // keep earlier rows reduced against the new one
        for (size_t i = 0; i < rows_.size(); ++i) {
            Scalar c = rows_[i][piv];
            if (c.is_zero()) continue;
            for (long j = 0; j < width_; ++j)
                if (!v[j].is_zero()) rows_[i][j] -= c * v[j];
        }
        // insertion position by pivot order
        size_t pos = 0;
        while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
        rows_.insert(rows_.begin() + pos, std::move(v));
        pivots_.insert(pivots_.begin() + pos, piv);
        return true;
    }

    // Coordinates of v in the rref rows, if v lies in the span.
    std::optional<Vec> coordinates(const Vec& v) const {
        Vec coeff(rows_.size(), Scalar::zero(spec_));
        Vec w = v;
        for (size_t i = 0; i < rows_.size(); ++i) {
            Scalar c = w[pivots_[i]];
            if (c.is_zero()) continue;
            coeff[i] = c;
            for (long j = 0; j < width_; ++j)
                if (!rows_[i][j].is_zero()) w[j] -= c * rows_[i][j];
        }
        if (!vec_is_zero(w)) return std::nullopt;
        return coeff;
    }

    Mat as_matrix() const {
        Mat m((long)rows_.size(), width_, spec_);
        for (size_t i = 0; i < rows_.size(); ++i) m.set_row((long)i, rows_[i]);
        return m;
    }

  private:
    long width_;
    QSpec spec_;
    std::vector<Vec> rows_;
    std::vector<long> pivots_;
};

}  // namespace ospq

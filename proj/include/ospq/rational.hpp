#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace ospq {

// Gaussian rational a + b*i, the coefficient field of everything generic.
struct GaussRat {
    mpq_class re, im;

    GaussRat() : re(0), im(0) {}
    GaussRat(long n) : re(n), im(0) {}
    GaussRat(const mpq_class& r) : re(r), im(0) {}
    GaussRat(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

    static GaussRat unit_i() { return GaussRat(mpq_class(0), mpq_class(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussRat operator-() const { return GaussRat(-re, -im); }
    GaussRat conj() const { return GaussRat(re, -im); }

    // |z|^2, a nonzero rational unless z = 0
    mpq_class norm() const { return re * re + im * im; }

    GaussRat inv() const {
        mpq_class n = norm();
        if (n == 0) throw std::domain_error("GaussRat: division by zero");
        return GaussRat(re / n, -im / n);
    }

    friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
        return GaussRat(a.re + b.re, a.im + b.im);
    }
    friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
        return GaussRat(a.re - b.re, a.im - b.im);
    }
    friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
        return GaussRat(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend GaussRat operator/(const GaussRat& a, const GaussRat& b) { return a * b.inv(); }

    GaussRat& operator+=(const GaussRat& o) { re += o.re; im += o.im; return *this; }
    GaussRat& operator-=(const GaussRat& o) { re -= o.re; im -= o.im; return *this; }
    GaussRat& operator*=(const GaussRat& o) { *this = *this * o; return *this; }

    friend bool operator==(const GaussRat& a, const GaussRat& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

    std::string str() const {
        auto rs = [](const mpq_class& q) { return q.get_str(); };
        if (im == 0) return rs(re);
        std::string imag = (im == 1) ? "i" : (im == -1) ? "-i" : rs(im) + "*i";
        if (re == 0) return imag;
        if (im > 0) return rs(re) + "+" + imag;
        return rs(re) + imag;  // imag already carries the sign
    }
};

}  // namespace ospq

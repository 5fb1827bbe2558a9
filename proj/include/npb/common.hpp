#ifndef NPB_COMMON_HPP
#define NPB_COMMON_HPP

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace npb {

// ---------------------------------------------------------------------
// problem classes
// ---------------------------------------------------------------------

enum class ProblemClass : char { S = 'S', W = 'W', A = 'A', B = 'B', C = 'C' };

// Returns true and sets out when c names a supported class (case
// insensitive single letter).
bool parse_class(const std::string& s, ProblemClass& out);

inline char class_tag(ProblemClass c) { return (char)c; }

// ---------------------------------------------------------------------
// complex value for the FT kernel
// ---------------------------------------------------------------------

struct Complex {
    double re = 0.0;
    double im = 0.0;
};

inline Complex operator+(Complex a, Complex b) { return {a.re + b.re, a.im + b.im}; }
inline Complex operator-(Complex a, Complex b) { return {a.re - b.re, a.im - b.im}; }
inline Complex operator*(Complex a, Complex b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Complex operator*(double s, Complex a) { return {s * a.re, s * a.im}; }
inline double cabs2(Complex a) { return a.re * a.re + a.im * a.im; }

// ---------------------------------------------------------------------
// verification
// ---------------------------------------------------------------------

// Relative comparison against a reference value; absolute when the
// reference is zero. Non-finite computed values never verify.
bool verify_scalar(double computed, double reference, double epsilon);

// ---------------------------------------------------------------------
// benchmark result and report block
// ---------------------------------------------------------------------

struct BenchmarkResult {
    std::string name;        // "EP", "CG", ...
    ProblemClass cls = ProblemClass::S;
    std::string size;        // e.g. "64x64x64" or a key count
    int iterations = 0;
    double seconds = 0.0;    // timed section only
    double mflops = 0.0;
    bool verified = false;
    int workers = 1;
    bool safe_mode = false;
};

// Classic completion banner; returns the formatted block.
std::string report(const BenchmarkResult& r);

// ---------------------------------------------------------------------
// bounds-checked array view for the safe build mode
// ---------------------------------------------------------------------

[[noreturn]] void bounds_fail(long index, long size);

// Raw view over a buffer. The Checked variant validates every access;
// the unchecked variant compiles down to plain pointer arithmetic.
// Hot kernels are templated over Checked and dispatched at run time.
template <class T, bool Checked>
struct ArrayView {
    T* p;
    long n;

    T& operator[](long i) const
    {
        if constexpr (Checked) {
            if (i < 0 || i >= n)
                bounds_fail(i, n);
        }
        return p[i];
    }
};

} // namespace npb

#endif

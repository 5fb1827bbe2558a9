#ifndef NPB_FT_HPP
#define NPB_FT_HPP

#include <vector>

#include "npb/common.hpp"
#include "npb/pool.hpp"

namespace npb::ft {

// Grids are stored x-fastest: element (i, j, k) lives at
// (k * ny + j) * nx + i. All dimensions are powers of two.
struct FtParams {
    int nx;
    int ny;
    int nz;
    int niter;
    std::vector<Complex> csum_ref; // one per iteration
};

FtParams params_for(ProblemClass cls);

// Roots-of-unity table for pencil lengths up to maxdim (a power of
// two). Slot 0 carries log2(maxdim); the levels follow back to back.
std::vector<Complex> fft_init(int maxdim);

// twiddle(i,j,k) = exp(-4 alpha pi^2 (ibar^2 + jbar^2 + kbar^2)) where
// ibar = ((i + n/2) mod n) - n/2 folds indices to signed frequencies.
// One application advances the spectrum by one time step.
void compute_indexmap(double* twiddle, int nx, int ny, int nz,
                      WorkerPool& pool);

// Fills u with nx*ny*nz random complex values, planes generated
// independently by jumping the stream 2*nx*ny positions per plane, so
// the grid is bit-identical for any worker count.
void compute_initial_conditions(Complex* u, int nx, int ny, int nz,
                                WorkerPool& pool);

// Unnormalized 3-d FFT: dir=+1 applies exp(+2 pi i ...) along x, y,
// then z; dir=-1 the conjugate transform in the reverse order. A
// round trip therefore scales by nx*ny*nz. x is used as workspace for
// the first two stages; the final stage writes out (out may alias x).
// u is the table from fft_init(max(nx,ny,nz)).
void fft3d(int dir, const std::vector<Complex>& u, Complex* x, Complex* out,
           int nx, int ny, int nz, WorkerPool& pool, bool safe_mode);

// u0 *= twiddle elementwise, then u1 = u0.
void evolve(Complex* u0, Complex* u1, const double* twiddle, long n,
            WorkerPool& pool);

// Sum of the 1024 probe entries (j mod nx, 3j mod ny, 5j mod nz),
// j = 1..1024, divided by nx*ny*nz. Fixed serial order.
Complex checksum(const Complex* u, int nx, int ny, int nz);

BenchmarkResult run(ProblemClass cls, WorkerPool& pool, bool safe_mode);

} // namespace npb::ft

#endif

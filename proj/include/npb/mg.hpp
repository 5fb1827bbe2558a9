#ifndef NPB_MG_HPP
#define NPB_MG_HPP

#include <array>
#include <vector>

#include "npb/common.hpp"
#include "npb/pool.hpp"

namespace npb::mg {

// V-cycle multigrid solver for a scalar Poisson problem on a periodic
// cube. The right hand side is -1/+1 charges at twenty pseudo-random
// grid points; verification checks the L2 norm of the residual after
// nit cycles.

struct MgParams {
    int nx = 0, ny = 0, nz = 0;
    int nit = 0;
    int lt = 0; // level of the finest grid, log2 of the edge length
    std::array<double, 4> a{}; // residual stencil coefficients
    std::array<double, 4> c{}; // smoother coefficients
    double rnm2_ref = 0.0;
};

MgParams params_for(ProblemClass cls);

// Geometry of the level stack. Levels run 1 (coarsest) .. lt (finest);
// every level is a full box with one ghost shell per face, so level k
// spans m1[k]*m2[k]*m3[k] doubles. u and r store all levels in one
// buffer, finest first, at offsets off[k].
struct GridHierarchy {
    int lt = 0;
    int lb = 1; // coarsest level the cycle descends to
    int n1 = 0, n2 = 0, n3 = 0; // finest extents including ghosts
    std::vector<int> m1, m2, m3; // indexed 1..lt
    std::vector<long> off;
    long total = 0; // doubles in a full level stack
};

GridHierarchy build_hierarchy(int nx, int ny, int nz, int lt);

// All grid kernels below take extents that include the ghost shell and
// treat z/u/r/v as [n3][n2][n1] boxes in row-major order.

void zero3(double* z, int n1, int n2, int n3);

// Periodic boundary exchange: each ghost face is overwritten with the
// interior face from the opposite side, one axis after another.
void comm3(double* u, int n1, int n2, int n3);

// Fills the interior with the benchmark random field, then keeps only
// the ten largest values as +1 and the ten smallest as -1. The fill is
// plane-parallel off jumped seeds and matches the sequential stream
// bit for bit.
void zran3(double* z, int n1, int n2, int n3, WorkerPool& pool);

// L2 norm (scaled by the interior point count of the problem grid) and
// max norm over the interior. Per-plane partials folded in plane order,
// so the result does not depend on the worker count.
void norm2u3(const double* r, int n1, int n2, int n3, double& rnm2,
             double& rnmu, int nx, int ny, int nz, WorkerPool& pool);

// r = v - Au followed by a boundary exchange on r. v and r may alias;
// v is only read at the cell being written.
void resid(const double* u, const double* v, double* r, int n1, int n2,
           int n3, const double* a, WorkerPool& pool, bool safe_mode);

// u = u + Cr followed by a boundary exchange on u.
void psinv(const double* r, double* u, int n1, int n2, int n3,
           const double* c, WorkerPool& pool, bool safe_mode);

// Projects r (extents m1k,m2k,m3k) onto the next coarser grid s.
void rprj3(const double* r, int m1k, int m2k, int m3k, double* s, int m1j,
           int m2j, int m3j, WorkerPool& pool, bool safe_mode);

// Adds the trilinear prolongation of the coarse correction z (extents
// mm1,mm2,mm3) onto the fine grid u.
void interp(const double* z, int mm1, int mm2, int mm3, double* u, int n1,
            int n2, int n3, WorkerPool& pool, bool safe_mode);

// One full V-cycle over the hierarchy: restrict the residual to the
// coarsest level, solve approximately there, then prolongate and
// smooth back up. u and r hold the level stacks, v the finest rhs.
void mg3P(double* u, double* v, double* r, const GridHierarchy& g,
          const double* a, const double* c, WorkerPool& pool,
          bool safe_mode);

BenchmarkResult run(ProblemClass cls, WorkerPool& pool, bool safe_mode);

} // namespace npb::mg

#endif

#ifndef NPB_CG_HPP
#define NPB_CG_HPP

#include <vector>

#include "npb/common.hpp"
#include "npb/pool.hpp"

namespace npb::cg {

// Sparse test matrix in CSR form, zero based. Column order within a
// row follows first-touch order of the generator, not ascending.
struct SparseMatrix {
    int n = 0;
    std::vector<int> rowstr; // n + 1 row pointers
    std::vector<int> colidx;
    std::vector<double> a;

    long nnz() const { return rowstr.empty() ? 0 : rowstr[(std::size_t)n]; }
};

struct CgParams {
    int na;
    int nonzer;
    int niter;
    double shift;
    double zeta_ref;
};

CgParams params_for(ProblemClass cls);

// Builds the eigenvalue test matrix: a sum of n outer products with
// geometrically decaying weights (1 down to rcond), plus
// (rcond - shift) on the diagonal. tran is the generator state and is
// left advanced for the caller. Sequential; runs in setup, untimed.
SparseMatrix makea(int n, int nonzer, double shift, double& tran,
                   double rcond = 0.1);

// out = m * v. Each row is one sequential dot product, so the result
// is bit-identical to a serial sweep for any worker count.
void spmv(const SparseMatrix& m, const double* v, double* out,
          WorkerPool& pool, bool safe_mode);

// 25 unpreconditioned CG iterations on  m z = x  from z = 0; returns
// the explicit residual norm ||x - m z||. p, q, r are caller scratch
// of length n. The matrix is indefinite for the benchmark shifts, so
// this is a fixed amount of arithmetic, not a converging solve.
double conj_grad(const SparseMatrix& m, const double* x, double* z,
                 double* p, double* q, double* r, WorkerPool& pool,
                 bool safe_mode);

BenchmarkResult run(ProblemClass cls, WorkerPool& pool, bool safe_mode);

} // namespace npb::cg

#endif

#ifndef NPB_SP_HPP
#define NPB_SP_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "npb/common.hpp"
#include "npb/pool.hpp"

namespace npb::sp {

// Scalar-pentadiagonal ADI pseudo application. Same residual operator as
// the block-tridiagonal app, but the implicit factor is diagonalized:
// pointwise similarity transforms move rhs into the characteristic basis
// of each sweep direction, so every directional solve reduces to scalar
// pentadiagonal systems along grid lines. The five components decouple
// into three systems per line: components 0-2 share one matrix, the two
// acoustic components get their own (eigenvalues u, u+c, u-c).

struct Params {
    int nx = 0, ny = 0, nz = 0;
    int niter = 0;
    double dt = 0.0;
    double dt_ref = 0.0;
    std::array<double, 5> xcr_ref{}; // residual norm references
    std::array<double, 5> xce_ref{}; // error norm references
};

Params params_for(ProblemClass cls);

// Same analytic flow field as the block solver: tri-quartic polynomial
// in the unit-cube coordinates, one polynomial per component.
void exact_solution(double xi, double eta, double zeta, double out[5]);

struct Coeffs {
    double dt = 0.0;
    double c1 = 0.0, c2 = 0.0, c1c2 = 0.0, c1c5 = 0.0, c3c4 = 0.0;
    double c2iv = 0.0, con43 = 0.0, bt = 0.0;
    double dnxm1 = 0.0, dnym1 = 0.0, dnzm1 = 0.0;
    double tx2 = 0.0, ty2 = 0.0, tz2 = 0.0;
    double dx1 = 0.0, dx2 = 0.0, dx3 = 0.0, dx4 = 0.0, dx5 = 0.0;
    double dy1 = 0.0, dy2 = 0.0, dy3 = 0.0, dy4 = 0.0, dy5 = 0.0;
    double dz1 = 0.0, dz2 = 0.0, dz3 = 0.0, dz4 = 0.0, dz5 = 0.0;
    double dxmax = 0.0, dymax = 0.0, dzmax = 0.0;
    double dssp = 0.0;
    double dttx1 = 0.0, dttx2 = 0.0;
    double dtty1 = 0.0, dtty2 = 0.0;
    double dttz1 = 0.0, dttz2 = 0.0;
    double c2dttx1 = 0.0, c2dtty1 = 0.0, c2dttz1 = 0.0;
    double comz1 = 0.0, comz4 = 0.0, comz5 = 0.0, comz6 = 0.0;
    double dx1tx1 = 0.0, dx2tx1 = 0.0, dx3tx1 = 0.0, dx4tx1 = 0.0, dx5tx1 = 0.0;
    double dy1ty1 = 0.0, dy2ty1 = 0.0, dy3ty1 = 0.0, dy4ty1 = 0.0, dy5ty1 = 0.0;
    double dz1tz1 = 0.0, dz2tz1 = 0.0, dz3tz1 = 0.0, dz4tz1 = 0.0, dz5tz1 = 0.0;
    double xxcon1 = 0.0, xxcon2 = 0.0, xxcon3 = 0.0, xxcon4 = 0.0, xxcon5 = 0.0;
    double yycon1 = 0.0, yycon2 = 0.0, yycon3 = 0.0, yycon4 = 0.0, yycon5 = 0.0;
    double zzcon1 = 0.0, zzcon2 = 0.0, zzcon3 = 0.0, zzcon4 = 0.0, zzcon5 = 0.0;
};

Coeffs make_coeffs(int nx, int ny, int nz, double dt);

// Field storage, laid out as in the block solver. speed = local sound
// speed, needed by the characteristic transforms and the acoustic
// pentadiagonal matrices.
struct State {
    int nx = 0, ny = 0, nz = 0;
    Coeffs cf;
    std::vector<double> u, rhs, forcing;
    std::vector<double> us, vs, ws, qs, rho_i, square, speed;

    State(int nx_, int ny_, int nz_, double dt);
    long cell(long k, long j, long i) const
    {
        return (k * ny + j) * nx + i;
    }
};

void initialize(State& s, WorkerPool& pool);
void exact_rhs(State& s, WorkerPool& pool);
void compute_rhs(State& s, WorkerPool& pool);

// Pointwise basis changes on rhs. txinvr moves the residual into the
// x characteristic basis; ninvr and pinvr rotate between the x/y and
// y/z bases after the respective sweeps; tzetar moves back to
// conserved variables after the z sweep. Composed without the solves
// in between they multiply out to the identity.
void txinvr(State& s, WorkerPool& pool);
void ninvr(State& s, WorkerPool& pool);
void pinvr(State& s, WorkerPool& pool);
void tzetar(State& s, WorkerPool& pool);

// Directional sweeps: per line, assemble the three scalar pentadiagonal
// systems and solve them in place on rhs, then apply the basis change
// that readies rhs for the next sweep. Line scratch lives on the worker
// stacks; class C lines want a bigger reserve (see stack_reserve).
void x_solve(State& s, WorkerPool& pool);
void y_solve(State& s, WorkerPool& pool);
void z_solve(State& s, WorkerPool& pool);

// u += rhs on the interior.
void add(State& s, WorkerPool& pool);

// One full timestep.
void adi(State& s, WorkerPool& pool);

std::array<double, 5> error_norm(const State& s);
std::array<double, 5> rhs_norm(const State& s);

bool verify_norms(const std::array<double, 5>& xcr,
                  const std::array<double, 5>& xce, double dt,
                  const Params& p);

// Gaussian elimination without pivoting on the three pentadiagonal
// systems of one line of cells 0..last, in place on r. lhs carries the
// five bands [sub2 sub1 diag sup1 sup2] per cell for components 0-2,
// lhsp/lhsm the same for components 3 and 4. Cells 0 and last must be
// identity rows. All three band arrays are destroyed.
void solve_line(double* lhs, double* lhsp, double* lhsm, double* r,
                long last);

// Suggested worker stack reserve. The per-line scratch is modest, but
// the sweeps recurse through no allocator, so the size is a
// class-dependent constant rather than something measured.
std::size_t stack_reserve(ProblemClass cls);

BenchmarkResult run(ProblemClass cls, WorkerPool& pool, bool safe_mode);

} // namespace npb::sp

#endif

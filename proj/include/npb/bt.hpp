#ifndef NPB_BT_HPP
#define NPB_BT_HPP

#include <array>
#include <vector>

#include "npb/common.hpp"
#include "npb/pool.hpp"

namespace npb::bt {

// Block-tridiagonal ADI pseudo application. Each timestep evaluates the
// compressible Navier-Stokes residual, then approximately factors the
// implicit operator into three directional sweeps, each of which solves
// independent 5x5 block-tridiagonal systems along grid lines.

struct Params {
    int nx = 0, ny = 0, nz = 0;
    int niter = 0;
    double dt = 0.0;
    double dt_ref = 0.0;
    std::array<double, 5> xcr_ref{}; // residual norm references
    std::array<double, 5> xce_ref{}; // error norm references
};

Params params_for(ProblemClass cls);

// Analytic flow field driving the boundary conditions, the forcing term
// and the error norms. Tri-quartic polynomial in the unit-cube
// coordinates, one polynomial per conserved component.
void exact_solution(double xi, double eta, double zeta, double out[5]);

// Grid-spacing and timestep derived coefficients shared by the flux,
// dissipation and jacobian code.
struct Coeffs {
    double dt = 0.0;
    double c1 = 0.0, c2 = 0.0, c3c4 = 0.0, c1345 = 0.0, con43 = 0.0;
    double dnxm1 = 0.0, dnym1 = 0.0, dnzm1 = 0.0;
    double tx2 = 0.0, ty2 = 0.0, tz2 = 0.0;
    double dx1 = 0.0, dx2 = 0.0, dx3 = 0.0, dx4 = 0.0, dx5 = 0.0;
    double dy1 = 0.0, dy2 = 0.0, dy3 = 0.0, dy4 = 0.0, dy5 = 0.0;
    double dz1 = 0.0, dz2 = 0.0, dz3 = 0.0, dz4 = 0.0, dz5 = 0.0;
    double dssp = 0.0;
    double dttx1 = 0.0, dttx2 = 0.0;
    double dtty1 = 0.0, dtty2 = 0.0;
    double dttz1 = 0.0, dttz2 = 0.0;
    double dx1tx1 = 0.0, dx2tx1 = 0.0, dx3tx1 = 0.0, dx4tx1 = 0.0, dx5tx1 = 0.0;
    double dy1ty1 = 0.0, dy2ty1 = 0.0, dy3ty1 = 0.0, dy4ty1 = 0.0, dy5ty1 = 0.0;
    double dz1tz1 = 0.0, dz2tz1 = 0.0, dz3tz1 = 0.0, dz4tz1 = 0.0, dz5tz1 = 0.0;
    double xxcon1 = 0.0, xxcon2 = 0.0, xxcon3 = 0.0, xxcon4 = 0.0, xxcon5 = 0.0;
    double yycon1 = 0.0, yycon2 = 0.0, yycon3 = 0.0, yycon4 = 0.0, yycon5 = 0.0;
    double zzcon1 = 0.0, zzcon2 = 0.0, zzcon3 = 0.0, zzcon4 = 0.0, zzcon5 = 0.0;
};

Coeffs make_coeffs(int nx, int ny, int nz, double dt);

// Field storage. u/rhs/forcing hold 5 doubles per cell; the auxiliary
// per-cell quantities are refreshed from u at the top of compute_rhs.
// Cell order is (k, j, i) row major with the component innermost.
struct State {
    int nx = 0, ny = 0, nz = 0;
    Coeffs cf;
    std::vector<double> u, rhs, forcing;
    std::vector<double> us, vs, ws, qs, rho_i, square;

    State(int nx_, int ny_, int nz_, double dt);
    long cell(long k, long j, long i) const
    {
        return (k * ny + j) * nx + i;
    }
};

// Trilinear blend of the exact solution over the grid, then exact
// values on the six boundary faces.
void initialize(State& s, WorkerPool& pool);

// Steady forcing term: minus the discrete flux divergence of the exact
// solution, so that field is a stationary point of the scheme.
void exact_rhs(State& s, WorkerPool& pool);

// rhs = forcing - (convective + viscous flux differences + fourth-order
// dissipation), scaled by dt on the interior.
void compute_rhs(State& s, WorkerPool& pool);

// Directional implicit sweeps: per line, assemble the 5x5 block
// tridiagonal system from the flux jacobians of u and solve it in
// place on rhs.
void x_solve(State& s, WorkerPool& pool);
void y_solve(State& s, WorkerPool& pool);
void z_solve(State& s, WorkerPool& pool);

// u += rhs on the interior.
void add(State& s, WorkerPool& pool);

// One full timestep.
void adi(State& s, WorkerPool& pool);

std::array<double, 5> error_norm(const State& s);
std::array<double, 5> rhs_norm(const State& s);

// Reference comparison of the residual and error norms. xcr must
// already be scaled back by 1/dt.
bool verify_norms(const std::array<double, 5>& xcr,
                  const std::array<double, 5>& xce, double dt,
                  const Params& p);

// ---------------------------------------------------------------------
// 5x5 block primitives used by the line solves (row major [row][col]).
// No pivoting: the dt-scaled identity on the diagonal keeps the blocks
// strongly diagonally dominant for benchmark inputs.
// ---------------------------------------------------------------------

// Gauss-Jordan inversion of lhs applied to both c and r in place:
// c <- lhs^-1 c, r <- lhs^-1 r.
void binvcrhs(double lhs[5][5], double c[5][5], double r[5]);
// r <- lhs^-1 r.
void binvrhs(double lhs[5][5], double r[5]);
// b -= a x.
void matvec_sub(const double a[5][5], const double x[5], double b[5]);
// c -= a b.
void matmul_sub(const double a[5][5], const double b[5][5], double c[5][5]);

// Forward elimination and back substitution over one line of cells
// 0..last. lhs holds three blocks per cell in [sub, diag, super] order
// (75 doubles per cell) and is destroyed; r holds 5 doubles per cell
// and receives the solution. Cells 0 and last must carry identity
// diagonal blocks and zero off-diagonal blocks.
void solve_line(double* lhs, double* r, long last);

BenchmarkResult run(ProblemClass cls, WorkerPool& pool, bool safe_mode);

} // namespace npb::bt

#endif

#ifndef NPB_LU_HPP
#define NPB_LU_HPP

#include <array>
#include <vector>

#include "npb/common.hpp"
#include "npb/pool.hpp"

namespace npb::lu {

// Lower-upper symmetric Gauss-Seidel pseudo application. Same analytic
// flow field as the other two apps, but a different discretization,
// and the implicit step is an SSOR relaxation: a forward substitution
// through the lower block triangle (ascending k) followed by a
// backward one through the upper block triangle (descending k). Both
// sweeps carry data dependencies in all three grid directions, so
// they run as wavefront pipelines over (k plane, j block).

struct Params {
    int nx = 0, ny = 0, nz = 0;
    int niter = 0; // SSOR iterations (the reference itmax)
    double dt = 0.0;
    double dt_ref = 0.0;
    std::array<double, 5> xcr_ref{}; // residual norm references
    std::array<double, 5> xce_ref{}; // error norm references
    double xci_ref = 0.0;            // surface integral reference
};

Params params_for(ProblemClass cls);

// Tri-quartic polynomial flow field, one polynomial per component.
void exact_solution(double xi, double eta, double zeta, double out[5]);

struct Coeffs {
    double dt = 0.0;
    double omega = 0.0; // SSOR over-relaxation factor
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0;
    double dxi = 0.0, deta = 0.0, dzeta = 0.0; // unit-cube cell sizes
    double tx1 = 0.0, tx2 = 0.0, tx3 = 0.0;
    double ty1 = 0.0, ty2 = 0.0, ty3 = 0.0;
    double tz1 = 0.0, tz2 = 0.0, tz3 = 0.0;
    double dx[5] = {}, dy[5] = {}, dz[5] = {}; // dissipation weights
    double dssp = 0.0;
    // jacobian shorthands: 4/3, c3*c4, c1*c3*c4*c5
    double r43 = 0.0, c34 = 0.0, c1345 = 0.0;
};

Coeffs make_coeffs(int nx, int ny, int nz, double dt);

// Field storage. u/rsd/frct carry five components per cell; rho_i and
// qs cache 1/density and the specific kinetic energy for the jacobian
// and flux evaluations. a..d hold the 5x5 jacobian blocks of one
// k plane (a,b,c couple to the lagging neighbor in z,y,x for the
// lower sweep; the upper sweep reloads them as the leading x,y,z
// neighbor blocks). tv is the matching plane of back-substitution
// scratch. The plane arrays are shared across pipeline stages: a
// stage only touches rows inside its own j block, and the stage that
// overwrites a row for plane k+1 is ticket-ordered after the one that
// consumed it for plane k, so reuse is race free.
struct State {
    int nx = 0, ny = 0, nz = 0;
    Coeffs cf;
    std::vector<double> u, rsd, frct;
    std::vector<double> rho_i, qs;
    std::vector<double> a, b, c, d;
    std::vector<double> tv;

    State(int nx_, int ny_, int nz_, double dt);
    long cell(long k, long j, long i) const
    {
        return (k * ny + j) * nx + i;
    }
    // index of cell (j,i) within one k plane, for the a..d/tv arrays
    long pcell(long j, long i) const { return j * nx + i; }
};

// Boundary faces take the exact solution; the interior takes the
// trilinear blend of its six face projections.
void initialize(State& s, WorkerPool& pool);

// Forcing term frct: the steady-state operator applied to the exact
// solution, so the residual of the exact field vanishes identically.
void exact_rhs(State& s, WorkerPool& pool);

// rsd = -frct + convective/viscous fluxes + fourth-difference
// dissipation; also refreshes rho_i and qs.
void compute_rhs(State& s, WorkerPool& pool);

// One forward (ascending k) or backward (descending k) block
// triangular solve applied in place to rsd, pipelined over
// (k plane, j block). Passing a log records the stage hand-offs.
void lower_sweep(State& s, WorkerPool& pool, TicketLog* log = nullptr);
void upper_sweep(State& s, WorkerPool& pool, TicketLog* log = nullptr);

// One SSOR iteration: scale rsd by dt, both sweeps, relaxed update of
// u, fresh residual. Leaves rsd holding the new steady-state residual.
void ssor_step(State& s, WorkerPool& pool, TicketLog* lower_log = nullptr,
               TicketLog* upper_log = nullptr);

struct SsorStats {
    std::array<double, 5> rsdnm{}; // final residual norms
    double elapsed = 0.0;          // seconds inside the iteration loop
};

// niter SSOR iterations with the reference norm cadence. The timed
// section excludes the initial residual and norm.
SsorStats ssor(State& s, WorkerPool& pool, int niter);

// Volume-weighted root-mean-square over interior cells, per component.
std::array<double, 5> l2norm(const State& s, const std::vector<double>& v,
                             WorkerPool& pool);

// RMS distance of u from the exact solution over interior cells.
std::array<double, 5> error_norm(const State& s);

// Trapezoidal pressure integral over three window surfaces of the
// verification sub-domain.
double surface_integral(const State& s);

bool verify_norms(const std::array<double, 5>& xcr,
                  const std::array<double, 5>& xce, double xci, double dt,
                  const Params& p);

BenchmarkResult run(ProblemClass cls, WorkerPool& pool, bool safe_mode);

} // namespace npb::lu

#endif

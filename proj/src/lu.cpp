#include "npb/lu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "npb/timers.hpp"

namespace npb::lu {

namespace {

constexpr double kEpsilon = 1.0e-8;

// steady-state tolerance on the five residual norms
constexpr double kTolRsd = 1.0e-8;

// largest class grid; the per-pencil stack scratch is sized statically
constexpr long kMaxLine = 162;

// coefficients of the tri-quartic exact solution, one row per component
const double kCe[5][13] = {
    {2.0, 0.0, 0.0, 4.0, 5.0, 3.0, 0.5, 0.02, 0.01, 0.03, 0.5, 0.4, 0.3},
    {1.0, 0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 0.01, 0.03, 0.02, 0.4, 0.3, 0.5},
    {2.0, 2.0, 0.0, 0.0, 0.0, 2.0, 3.0, 0.04, 0.03, 0.05, 0.3, 0.5, 0.4},
    {2.0, 2.0, 0.0, 0.0, 0.0, 2.0, 3.0, 0.03, 0.05, 0.04, 0.2, 0.1, 0.3},
    {5.0, 4.0, 3.0, 2.0, 0.1, 0.4, 0.3, 0.05, 0.04, 0.03, 0.1, 0.3, 0.2},
};

} // namespace

Params params_for(ProblemClass cls)
{
    Params p;
    switch (cls) {
    case ProblemClass::S:
        p.nx = p.ny = p.nz = 12;
        p.niter = 50;
        p.dt = 0.5;
        p.dt_ref = 0.5;
        p.xcr_ref = {1.6196343210976702e-02, 2.1976745164821318e-03,
                     1.5179927653399185e-03, 1.5029584435994323e-03,
                     3.4264073155896461e-02};
        p.xce_ref = {6.4223319957960924e-04, 8.4144342047347926e-05,
                     5.8588269616485186e-05, 5.8474222595157350e-05,
                     1.3103347914111294e-03};
        p.xci_ref = 7.8418928865937083e+00;
        break;
    case ProblemClass::W:
        p.nx = p.ny = p.nz = 33;
        p.niter = 300;
        p.dt = 1.5e-3;
        p.dt_ref = 1.5e-3;
        p.xcr_ref = {0.1236511638192e+02, 0.1317228477799e+01,
                     0.2550120713095e+01, 0.2326187750252e+01,
                     0.2826799444189e+02};
        p.xce_ref = {0.4867877144216e+00, 0.5064652880982e-01,
                     0.9281818101960e-01, 0.8570126542733e-01,
                     0.1084277417792e+01};
        p.xci_ref = 0.1161399311023e+02;
        break;
    case ProblemClass::A:
        p.nx = p.ny = p.nz = 64;
        p.niter = 250;
        p.dt = 2.0;
        p.dt_ref = 2.0;
        p.xcr_ref = {7.7902107606689367e+02, 6.3402765259692870e+01,
                     1.9499249727292479e+02, 1.7845301160418537e+02,
                     1.8384760349464247e+03};
        p.xce_ref = {2.9964085685471943e+01, 2.8194576365003349e+00,
                     7.3473412698774742e+00, 6.7139225687777051e+00,
                     7.0715315688392578e+01};
        p.xci_ref = 2.6030925604886277e+01;
        break;
    case ProblemClass::B:
        p.nx = p.ny = p.nz = 102;
        p.niter = 250;
        p.dt = 2.0;
        p.dt_ref = 2.0;
        p.xcr_ref = {3.5532672969982736e+03, 2.6214750795310692e+02,
                     8.8333721850952190e+02, 7.7812774739425265e+02,
                     7.3087969592545314e+03};
        p.xce_ref = {1.1401176380212709e+02, 8.1098963655421574e+00,
                     2.8480597317698308e+01, 2.5905394567832939e+01,
                     2.6054907504857413e+02};
        p.xci_ref = 4.7887162703308227e+01;
        break;
    case ProblemClass::C:
        p.nx = p.ny = p.nz = 162;
        p.niter = 250;
        p.dt = 2.0;
        p.dt_ref = 2.0;
        p.xcr_ref = {1.03766980323537846e+04, 8.92212458801008552e+02,
                     2.56238814582660871e+03, 2.19194343857831427e+03,
                     1.78078057261061185e+04};
        p.xce_ref = {2.15986399716949279e+02, 1.55789559239863600e+01,
                     5.41318863077207766e+01, 4.82262643154045421e+01,
                     4.55902910043250358e+02};
        p.xci_ref = 6.66404553572181300e+01;
        break;
    }
    return p;
}

void exact_solution(double xi, double eta, double zeta, double out[5])
{
    for (int m = 0; m < 5; m++) {
        const double* ce = kCe[m];
        out[m] = ce[0] +
                 xi * (ce[1] + xi * (ce[4] + xi * (ce[7] + xi * ce[10]))) +
                 eta * (ce[2] + eta * (ce[5] + eta * (ce[8] + eta * ce[11]))) +
                 zeta * (ce[3] + zeta * (ce[6] + zeta * (ce[9] + zeta * ce[12])));
    }
}

Coeffs make_coeffs(int nx, int ny, int nz, double dt)
{
    Coeffs cf;
    cf.dt = dt;
    cf.omega = 1.2;

    cf.c1 = 1.4;
    cf.c2 = 0.4;
    cf.c3 = 0.1;
    cf.c4 = 1.0;
    cf.c5 = 1.4;

    cf.dxi = 1.0 / (nx - 1);
    cf.deta = 1.0 / (ny - 1);
    cf.dzeta = 1.0 / (nz - 1);

    cf.tx1 = 1.0 / (cf.dxi * cf.dxi);
    cf.tx2 = 1.0 / (2.0 * cf.dxi);
    cf.tx3 = 1.0 / cf.dxi;
    cf.ty1 = 1.0 / (cf.deta * cf.deta);
    cf.ty2 = 1.0 / (2.0 * cf.deta);
    cf.ty3 = 1.0 / cf.deta;
    cf.tz1 = 1.0 / (cf.dzeta * cf.dzeta);
    cf.tz2 = 1.0 / (2.0 * cf.dzeta);
    cf.tz3 = 1.0 / cf.dzeta;

    for (int m = 0; m < 5; m++) {
        cf.dx[m] = 0.75;
        cf.dy[m] = 0.75;
        cf.dz[m] = 1.0;
    }
    cf.dssp = std::max(cf.dx[0], std::max(cf.dy[0], cf.dz[0])) / 4.0;

    cf.r43 = 4.0 / 3.0;
    cf.c34 = cf.c3 * cf.c4;
    cf.c1345 = cf.c1 * cf.c3 * cf.c4 * cf.c5;
    return cf;
}

State::State(int nx_, int ny_, int nz_, double dt)
    : nx(nx_), ny(ny_), nz(nz_), cf(make_coeffs(nx_, ny_, nz_, dt))
{
    std::size_t cells = (std::size_t)nx * (std::size_t)ny * (std::size_t)nz;
    u.assign(cells * 5, 0.0);
    rsd.assign(cells * 5, 0.0);
    frct.assign(cells * 5, 0.0);
    rho_i.assign(cells, 0.0);
    qs.assign(cells, 0.0);
    std::size_t plane = (std::size_t)ny * (std::size_t)nx;
    a.assign(plane * 25, 0.0);
    b.assign(plane * 25, 0.0);
    c.assign(plane * 25, 0.0);
    d.assign(plane * 25, 0.0);
    tv.assign(plane * 5, 0.0);
}

// ---------------------------------------------------------------------
// initial and boundary values
// ---------------------------------------------------------------------

void initialize(State& s, WorkerPool& pool)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    const Coeffs& cf = s.cf;

    pool.par_map({0, nz}, [&](long k) {
        double zeta = (double)k * cf.dzeta;
        for (long j = 0; j < ny; j++) {
            double eta = (double)j * cf.deta;
            for (long i = 0; i < nx; i++) {
                double xi = (double)i * cf.dxi;
                double* uc = &s.u[(std::size_t)(s.cell(k, j, i) * 5)];
                if (k == 0 || k == nz - 1 || j == 0 || j == ny - 1 ||
                    i == 0 || i == nx - 1) {
                    exact_solution(xi, eta, zeta, uc);
                    continue;
                }
                double w0[5], w1[5], s0[5], s1[5], b0[5], b1[5];
                exact_solution(0.0, eta, zeta, w0);
                exact_solution(1.0, eta, zeta, w1);
                exact_solution(xi, 0.0, zeta, s0);
                exact_solution(xi, 1.0, zeta, s1);
                exact_solution(xi, eta, 0.0, b0);
                exact_solution(xi, eta, 1.0, b1);
                for (int m = 0; m < 5; m++) {
                    double pxi = (1.0 - xi) * w0[m] + xi * w1[m];
                    double peta = (1.0 - eta) * s0[m] + eta * s1[m];
                    double pzeta = (1.0 - zeta) * b0[m] + zeta * b1[m];
                    uc[m] = pxi + peta + pzeta - pxi * peta - peta * pzeta -
                            pzeta * pxi + pxi * peta * pzeta;
                }
            }
        }
    });
}

// ---------------------------------------------------------------------
// the spatial operator, shared by the forcing build and the residual
// ---------------------------------------------------------------------

namespace {

// Reciprocal density and specific kinetic energy of field w, over all
// cells including boundaries (the jacobians sample them there).
void cache_point_values(State& s, WorkerPool& pool, const std::vector<double>& w)
{
    pool.par_map({0, s.nz}, [&](long k) {
        for (long j = 0; j < s.ny; j++)
            for (long i = 0; i < s.nx; i++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                const double* wc = &w[c * 5];
                double rho = 1.0 / wc[0];
                s.rho_i[c] = rho;
                s.qs[c] = 0.50 * (wc[1] * wc[1] + wc[2] * wc[2] +
                                  wc[3] * wc[3]) * rho;
            }
    });
}

// Upwind convective first differences, compact viscous second
// differences and fourth-difference dissipation of field w,
// accumulated into the pre-seeded out field. Expects the point value
// caches to describe w. Keeping the forcing and the residual on this
// one routine is what makes the exact field a machine-accuracy root.
void flux_operator(State& s, WorkerPool& pool, const std::vector<double>& w,
                   std::vector<double>& out)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    const Coeffs& cf = s.cf;

    // xi-direction
    pool.par_map({1, nz - 1}, [&](long k) {
        double flux[kMaxLine][5];
        for (long j = 1; j < ny - 1; j++) {
            for (long i = 0; i < nx; i++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                const double* wc = &w[c * 5];
                double u21 = wc[1] * s.rho_i[c];
                double q = s.qs[c];
                flux[i][0] = wc[1];
                flux[i][1] = wc[1] * u21 + cf.c2 * (wc[4] - q);
                flux[i][2] = wc[2] * u21;
                flux[i][3] = wc[3] * u21;
                flux[i][4] = (cf.c1 * wc[4] - cf.c2 * q) * u21;
            }
            for (long i = 1; i < nx - 1; i++) {
                double* o = &out[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++)
                    o[m] -= cf.tx2 * (flux[i + 1][m] - flux[i - 1][m]);
            }
            for (long i = 1; i < nx; i++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                std::size_t cm = (std::size_t)s.cell(k, j, i - 1);
                const double* wc = &w[c * 5];
                const double* wm = &w[cm * 5];
                double t1 = s.rho_i[c], tm = s.rho_i[cm];
                double u21i = t1 * wc[1], u31i = t1 * wc[2];
                double u41i = t1 * wc[3], u51i = t1 * wc[4];
                double u21im1 = tm * wm[1], u31im1 = tm * wm[2];
                double u41im1 = tm * wm[3], u51im1 = tm * wm[4];
                flux[i][1] = (4.0 / 3.0) * cf.tx3 * (u21i - u21im1);
                flux[i][2] = cf.tx3 * (u31i - u31im1);
                flux[i][3] = cf.tx3 * (u41i - u41im1);
                flux[i][4] = 0.50 * (1.0 - cf.c1 * cf.c5) * cf.tx3 *
                                 ((u21i * u21i + u31i * u31i + u41i * u41i) -
                                  (u21im1 * u21im1 + u31im1 * u31im1 +
                                   u41im1 * u41im1)) +
                             (1.0 / 6.0) * cf.tx3 *
                                 (u21i * u21i - u21im1 * u21im1) +
                             cf.c1 * cf.c5 * cf.tx3 * (u51i - u51im1);
            }
            for (long i = 1; i < nx - 1; i++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                const double* wm = &w[(std::size_t)(s.cell(k, j, i - 1) * 5)];
                const double* wc = &w[c * 5];
                const double* wp = &w[(std::size_t)(s.cell(k, j, i + 1) * 5)];
                double* o = &out[c * 5];
                o[0] += cf.dx[0] * cf.tx1 * (wm[0] - 2.0 * wc[0] + wp[0]);
                for (int m = 1; m < 5; m++)
                    o[m] += cf.tx3 * cf.c3 * cf.c4 *
                                (flux[i + 1][m] - flux[i][m]) +
                            cf.dx[m] * cf.tx1 * (wm[m] - 2.0 * wc[m] + wp[m]);
            }
            auto wat = [&](long i, int m) {
                return w[(std::size_t)(s.cell(k, j, i) * 5 + m)];
            };
            for (int m = 0; m < 5; m++) {
                out[(std::size_t)(s.cell(k, j, 1) * 5 + m)] -=
                    cf.dssp * (5.0 * wat(1, m) - 4.0 * wat(2, m) + wat(3, m));
                out[(std::size_t)(s.cell(k, j, 2) * 5 + m)] -=
                    cf.dssp * (-4.0 * wat(1, m) + 6.0 * wat(2, m) -
                               4.0 * wat(3, m) + wat(4, m));
            }
            for (long i = 3; i < nx - 3; i++) {
                double* o = &out[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++)
                    o[m] -= cf.dssp *
                            (wat(i - 2, m) - 4.0 * wat(i - 1, m) +
                             6.0 * wat(i, m) - 4.0 * wat(i + 1, m) +
                             wat(i + 2, m));
            }
            for (int m = 0; m < 5; m++) {
                out[(std::size_t)(s.cell(k, j, nx - 3) * 5 + m)] -=
                    cf.dssp * (wat(nx - 5, m) - 4.0 * wat(nx - 4, m) +
                               6.0 * wat(nx - 3, m) - 4.0 * wat(nx - 2, m));
                out[(std::size_t)(s.cell(k, j, nx - 2) * 5 + m)] -=
                    cf.dssp * (wat(nx - 4, m) - 4.0 * wat(nx - 3, m) +
                               5.0 * wat(nx - 2, m));
            }
        }
    });

    // eta-direction
    pool.par_map({1, nz - 1}, [&](long k) {
        double flux[kMaxLine][5];
        for (long i = 1; i < nx - 1; i++) {
            for (long j = 0; j < ny; j++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                const double* wc = &w[c * 5];
                double u31 = wc[2] * s.rho_i[c];
                double q = s.qs[c];
                flux[j][0] = wc[2];
                flux[j][1] = wc[1] * u31;
                flux[j][2] = wc[2] * u31 + cf.c2 * (wc[4] - q);
                flux[j][3] = wc[3] * u31;
                flux[j][4] = (cf.c1 * wc[4] - cf.c2 * q) * u31;
            }
            for (long j = 1; j < ny - 1; j++) {
                double* o = &out[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++)
                    o[m] -= cf.ty2 * (flux[j + 1][m] - flux[j - 1][m]);
            }
            for (long j = 1; j < ny; j++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                std::size_t cm = (std::size_t)s.cell(k, j - 1, i);
                const double* wc = &w[c * 5];
                const double* wm = &w[cm * 5];
                double t1 = s.rho_i[c], tm = s.rho_i[cm];
                double u21j = t1 * wc[1], u31j = t1 * wc[2];
                double u41j = t1 * wc[3], u51j = t1 * wc[4];
                double u21jm1 = tm * wm[1], u31jm1 = tm * wm[2];
                double u41jm1 = tm * wm[3], u51jm1 = tm * wm[4];
                flux[j][1] = cf.ty3 * (u21j - u21jm1);
                flux[j][2] = (4.0 / 3.0) * cf.ty3 * (u31j - u31jm1);
                flux[j][3] = cf.ty3 * (u41j - u41jm1);
                flux[j][4] = 0.50 * (1.0 - cf.c1 * cf.c5) * cf.ty3 *
                                 ((u21j * u21j + u31j * u31j + u41j * u41j) -
                                  (u21jm1 * u21jm1 + u31jm1 * u31jm1 +
                                   u41jm1 * u41jm1)) +
                             (1.0 / 6.0) * cf.ty3 *
                                 (u31j * u31j - u31jm1 * u31jm1) +
                             cf.c1 * cf.c5 * cf.ty3 * (u51j - u51jm1);
            }
            for (long j = 1; j < ny - 1; j++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                const double* wm = &w[(std::size_t)(s.cell(k, j - 1, i) * 5)];
                const double* wc = &w[c * 5];
                const double* wp = &w[(std::size_t)(s.cell(k, j + 1, i) * 5)];
                double* o = &out[c * 5];
                o[0] += cf.dy[0] * cf.ty1 * (wm[0] - 2.0 * wc[0] + wp[0]);
                for (int m = 1; m < 5; m++)
                    o[m] += cf.ty3 * cf.c3 * cf.c4 *
                                (flux[j + 1][m] - flux[j][m]) +
                            cf.dy[m] * cf.ty1 * (wm[m] - 2.0 * wc[m] + wp[m]);
            }
            auto wat = [&](long j, int m) {
                return w[(std::size_t)(s.cell(k, j, i) * 5 + m)];
            };
            for (int m = 0; m < 5; m++) {
                out[(std::size_t)(s.cell(k, 1, i) * 5 + m)] -=
                    cf.dssp * (5.0 * wat(1, m) - 4.0 * wat(2, m) + wat(3, m));
                out[(std::size_t)(s.cell(k, 2, i) * 5 + m)] -=
                    cf.dssp * (-4.0 * wat(1, m) + 6.0 * wat(2, m) -
                               4.0 * wat(3, m) + wat(4, m));
            }
            for (long j = 3; j < ny - 3; j++) {
                double* o = &out[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++)
                    o[m] -= cf.dssp *
                            (wat(j - 2, m) - 4.0 * wat(j - 1, m) +
                             6.0 * wat(j, m) - 4.0 * wat(j + 1, m) +
                             wat(j + 2, m));
            }
            for (int m = 0; m < 5; m++) {
                out[(std::size_t)(s.cell(k, ny - 3, i) * 5 + m)] -=
                    cf.dssp * (wat(ny - 5, m) - 4.0 * wat(ny - 4, m) +
                               6.0 * wat(ny - 3, m) - 4.0 * wat(ny - 2, m));
                out[(std::size_t)(s.cell(k, ny - 2, i) * 5 + m)] -=
                    cf.dssp * (wat(ny - 4, m) - 4.0 * wat(ny - 3, m) +
                               5.0 * wat(ny - 2, m));
            }
        }
    });

    // zeta-direction; the map index is j so tasks own disjoint slabs
    pool.par_map({1, ny - 1}, [&](long j) {
        double flux[kMaxLine][5];
        for (long i = 1; i < nx - 1; i++) {
            for (long k = 0; k < nz; k++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                const double* wc = &w[c * 5];
                double u41 = wc[3] * s.rho_i[c];
                double q = s.qs[c];
                flux[k][0] = wc[3];
                flux[k][1] = wc[1] * u41;
                flux[k][2] = wc[2] * u41;
                flux[k][3] = wc[3] * u41 + cf.c2 * (wc[4] - q);
                flux[k][4] = (cf.c1 * wc[4] - cf.c2 * q) * u41;
            }
            for (long k = 1; k < nz - 1; k++) {
                double* o = &out[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++)
                    o[m] -= cf.tz2 * (flux[k + 1][m] - flux[k - 1][m]);
            }
            for (long k = 1; k < nz; k++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                std::size_t cm = (std::size_t)s.cell(k - 1, j, i);
                const double* wc = &w[c * 5];
                const double* wm = &w[cm * 5];
                double t1 = s.rho_i[c], tm = s.rho_i[cm];
                double u21k = t1 * wc[1], u31k = t1 * wc[2];
                double u41k = t1 * wc[3], u51k = t1 * wc[4];
                double u21km1 = tm * wm[1], u31km1 = tm * wm[2];
                double u41km1 = tm * wm[3], u51km1 = tm * wm[4];
                flux[k][1] = cf.tz3 * (u21k - u21km1);
                flux[k][2] = cf.tz3 * (u31k - u31km1);
                flux[k][3] = (4.0 / 3.0) * cf.tz3 * (u41k - u41km1);
                flux[k][4] = 0.50 * (1.0 - cf.c1 * cf.c5) * cf.tz3 *
                                 ((u21k * u21k + u31k * u31k + u41k * u41k) -
                                  (u21km1 * u21km1 + u31km1 * u31km1 +
                                   u41km1 * u41km1)) +
                             (1.0 / 6.0) * cf.tz3 *
                                 (u41k * u41k - u41km1 * u41km1) +
                             cf.c1 * cf.c5 * cf.tz3 * (u51k - u51km1);
            }
            for (long k = 1; k < nz - 1; k++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                const double* wm = &w[(std::size_t)(s.cell(k - 1, j, i) * 5)];
                const double* wc = &w[c * 5];
                const double* wp = &w[(std::size_t)(s.cell(k + 1, j, i) * 5)];
                double* o = &out[c * 5];
                o[0] += cf.dz[0] * cf.tz1 * (wm[0] - 2.0 * wc[0] + wp[0]);
                for (int m = 1; m < 5; m++)
                    o[m] += cf.tz3 * cf.c3 * cf.c4 *
                                (flux[k + 1][m] - flux[k][m]) +
                            cf.dz[m] * cf.tz1 * (wm[m] - 2.0 * wc[m] + wp[m]);
            }
            auto wat = [&](long k, int m) {
                return w[(std::size_t)(s.cell(k, j, i) * 5 + m)];
            };
            for (int m = 0; m < 5; m++) {
                out[(std::size_t)(s.cell(1, j, i) * 5 + m)] -=
                    cf.dssp * (5.0 * wat(1, m) - 4.0 * wat(2, m) + wat(3, m));
                out[(std::size_t)(s.cell(2, j, i) * 5 + m)] -=
                    cf.dssp * (-4.0 * wat(1, m) + 6.0 * wat(2, m) -
                               4.0 * wat(3, m) + wat(4, m));
            }
            for (long k = 3; k < nz - 3; k++) {
                double* o = &out[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++)
                    o[m] -= cf.dssp *
                            (wat(k - 2, m) - 4.0 * wat(k - 1, m) +
                             6.0 * wat(k, m) - 4.0 * wat(k + 1, m) +
                             wat(k + 2, m));
            }
            for (int m = 0; m < 5; m++) {
                out[(std::size_t)(s.cell(nz - 3, j, i) * 5 + m)] -=
                    cf.dssp * (wat(nz - 5, m) - 4.0 * wat(nz - 4, m) +
                               6.0 * wat(nz - 3, m) - 4.0 * wat(nz - 2, m));
                out[(std::size_t)(s.cell(nz - 2, j, i) * 5 + m)] -=
                    cf.dssp * (wat(nz - 4, m) - 4.0 * wat(nz - 3, m) +
                               5.0 * wat(nz - 2, m));
            }
        }
    });
}

} // namespace

void exact_rhs(State& s, WorkerPool& pool)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    const Coeffs& cf = s.cf;

    // seed rsd with the exact solution everywhere (it is free scratch
    // here; the first residual evaluation rebuilds it) and apply the
    // operator of that field to an all-zero forcing
    pool.par_map({0, nz}, [&](long k) {
        double zeta = (double)k * cf.dzeta;
        for (long j = 0; j < ny; j++) {
            double eta = (double)j * cf.deta;
            for (long i = 0; i < nx; i++) {
                double xi = (double)i * cf.dxi;
                std::size_t c = (std::size_t)s.cell(k, j, i);
                exact_solution(xi, eta, zeta, &s.rsd[c * 5]);
                for (int m = 0; m < 5; m++)
                    s.frct[c * 5 + m] = 0.0;
            }
        }
    });
    cache_point_values(s, pool, s.rsd);
    flux_operator(s, pool, s.rsd, s.frct);
}

void compute_rhs(State& s, WorkerPool& pool)
{
    cache_point_values(s, pool, s.u);
    pool.par_map({0, s.nz}, [&](long k) {
        for (long j = 0; j < s.ny; j++)
            for (long i = 0; i < s.nx; i++) {
                std::size_t c = (std::size_t)(s.cell(k, j, i) * 5);
                for (int m = 0; m < 5; m++)
                    s.rsd[c + (std::size_t)m] = -s.frct[c + (std::size_t)m];
            }
    });
    flux_operator(s, pool, s.u, s.rsd);
}

// ---------------------------------------------------------------------
// jacobian blocks
// ---------------------------------------------------------------------

namespace {

inline double row_dot(const double* blk, int m, const double* v)
{
    return blk[m * 5 + 0] * v[0] + blk[m * 5 + 1] * v[1] +
           blk[m * 5 + 2] * v[2] + blk[m * 5 + 3] * v[3] +
           blk[m * 5 + 4] * v[4];
}

// Gaussian elimination without pivoting on a copy of the diagonal
// block; for the reference dt values the SSOR diagonal is strongly
// dominant, so no pivot search is needed.
inline void solve5(const double* dblk, double* x)
{
    double t[25];
    std::memcpy(t, dblk, sizeof(t));
    for (int p = 0; p < 4; p++) {
        double inv = 1.0 / t[p * 5 + p];
        for (int r = p + 1; r < 5; r++) {
            double f = inv * t[r * 5 + p];
            for (int q = p + 1; q < 5; q++)
                t[r * 5 + q] -= f * t[p * 5 + q];
            x[r] -= f * x[p];
        }
    }
    for (int m = 4; m >= 0; m--) {
        for (int n = m + 1; n < 5; n++)
            x[m] -= t[m * 5 + n] * x[n];
        x[m] /= t[m * 5 + m];
    }
}

// Diagonal block: identity plus dt times the derivative of the
// viscous and dissipation terms at the cell itself.
void diag_block(const Coeffs& cf, const double* uc, double t1, double* d)
{
    const double r43 = cf.r43, c34 = cf.c34, c1345 = cf.c1345;
    const double dt = cf.dt;
    const double tx1 = cf.tx1, ty1 = cf.ty1, tz1 = cf.tz1;
    const double t2 = t1 * t1, t3 = t1 * t2;

    for (int m = 0; m < 25; m++)
        d[m] = 0.0;

    d[0 * 5 + 0] =
        1.0 + dt * 2.0 * (tx1 * cf.dx[0] + ty1 * cf.dy[0] + tz1 * cf.dz[0]);

    const double sx = tx1 * r43 + ty1 + tz1;
    const double sy = tx1 + ty1 * r43 + tz1;
    const double sz = tx1 + ty1 + tz1 * r43;
    d[1 * 5 + 0] = -dt * 2.0 * sx * c34 * t2 * uc[1];
    d[1 * 5 + 1] =
        1.0 + dt * 2.0 * c34 * t1 * sx +
        dt * 2.0 * (tx1 * cf.dx[1] + ty1 * cf.dy[1] + tz1 * cf.dz[1]);
    d[2 * 5 + 0] = -dt * 2.0 * sy * c34 * t2 * uc[2];
    d[2 * 5 + 2] =
        1.0 + dt * 2.0 * c34 * t1 * sy +
        dt * 2.0 * (tx1 * cf.dx[2] + ty1 * cf.dy[2] + tz1 * cf.dz[2]);
    d[3 * 5 + 0] = -dt * 2.0 * sz * c34 * t2 * uc[3];
    d[3 * 5 + 3] =
        1.0 + dt * 2.0 * c34 * t1 * sz +
        dt * 2.0 * (tx1 * cf.dx[3] + ty1 * cf.dy[3] + tz1 * cf.dz[3]);

    const double fx =
        tx1 * (r43 * c34 - c1345) + ty1 * (c34 - c1345) + tz1 * (c34 - c1345);
    const double fy =
        tx1 * (c34 - c1345) + ty1 * (r43 * c34 - c1345) + tz1 * (c34 - c1345);
    const double fz =
        tx1 * (c34 - c1345) + ty1 * (c34 - c1345) + tz1 * (r43 * c34 - c1345);
    d[4 * 5 + 0] =
        -dt * 2.0 *
        ((fx * uc[1] * uc[1] + fy * uc[2] * uc[2] + fz * uc[3] * uc[3]) * t3 +
         (tx1 + ty1 + tz1) * c1345 * t2 * uc[4]);
    d[4 * 5 + 1] = dt * 2.0 * t2 * uc[1] * fx;
    d[4 * 5 + 2] = dt * 2.0 * t2 * uc[2] * fy;
    d[4 * 5 + 3] = dt * 2.0 * t2 * uc[3] * fz;
    d[4 * 5 + 4] =
        1.0 + dt * 2.0 * (tx1 + ty1 + tz1) * c1345 * t1 +
        dt * 2.0 * (tx1 * cf.dx[4] + ty1 * cf.dy[4] + tz1 * cf.dz[4]);
}

// Off-diagonal coupling block for one grid direction, evaluated at
// the neighbor cell. nrm is the direction's velocity component, s2
// the signed convective weight (-dt*t2 lagging, +dt*t2 leading), dtt1
// the viscous weight dt*t1, dd the direction's dissipation weights.
void flux_jacobian(int nrm, double s2, double dtt1, const double* dd,
                   const double* un, double t1, double qsn, const Coeffs& cf,
                   double* blk)
{
    const double r43 = cf.r43, c34 = cf.c34, c1345 = cf.c1345;
    const double c1 = cf.c1, c2 = cf.c2;
    const double t2 = t1 * t1, t3 = t1 * t2;
    const int p = nrm == 1 ? 2 : 1;
    const int q = nrm == 3 ? 2 : 3;

    for (int m = 0; m < 25; m++)
        blk[m] = 0.0;

    blk[0 * 5 + 0] = -dtt1 * dd[0];
    blk[0 * 5 + nrm] = s2;

    blk[nrm * 5 + 0] =
        s2 * (-(un[nrm] * t1) * (un[nrm] * t1) + c2 * qsn * t1) -
        dtt1 * (-r43 * c34 * t2 * un[nrm]);
    blk[nrm * 5 + nrm] = s2 * ((2.0 - c2) * (un[nrm] * t1)) -
                         dtt1 * (r43 * c34 * t1) - dtt1 * dd[nrm];
    blk[nrm * 5 + p] = s2 * (-c2 * (un[p] * t1));
    blk[nrm * 5 + q] = s2 * (-c2 * (un[q] * t1));
    blk[nrm * 5 + 4] = s2 * c2;

    for (int m : {p, q}) {
        blk[m * 5 + 0] =
            s2 * (-(un[nrm] * un[m]) * t2) - dtt1 * (-c34 * t2 * un[m]);
        blk[m * 5 + nrm] = s2 * (un[m] * t1);
        blk[m * 5 + m] =
            s2 * (un[nrm] * t1) - dtt1 * (c34 * t1) - dtt1 * dd[m];
    }

    double vis0 = 0.0;
    for (int m = 1; m <= 3; m++) {
        double f = m == nrm ? r43 * c34 - c1345 : c34 - c1345;
        vis0 -= f * t3 * (un[m] * un[m]);
    }
    vis0 -= c1345 * t2 * un[4];
    blk[4 * 5 + 0] = s2 * ((c2 * 2.0 * qsn - c1 * un[4]) * un[nrm] * t2) -
                     dtt1 * vis0;
    blk[4 * 5 + nrm] =
        s2 * (c1 * (un[4] * t1) - c2 * (un[nrm] * un[nrm] * t2 + qsn * t1)) -
        dtt1 * (r43 * c34 - c1345) * t2 * un[nrm];
    blk[4 * 5 + p] = s2 * (-c2 * (un[p] * un[nrm]) * t2) -
                     dtt1 * (c34 - c1345) * t2 * un[p];
    blk[4 * 5 + q] = s2 * (-c2 * (un[q] * un[nrm]) * t2) -
                     dtt1 * (c34 - c1345) * t2 * un[q];
    blk[4 * 5 + 4] = s2 * (c1 * (un[nrm] * t1)) - dtt1 * c1345 * t1 -
                     dtt1 * dd[4];
}

// Lower-triangle blocks for rows [jr) of plane k: d at the cell,
// a/b/c at the lagging k-1, j-1, i-1 neighbors.
void jacld_rows(State& s, long k, IndexRange jr)
{
    const Coeffs& cf = s.cf;
    for (long j = jr.begin; j < jr.end; j++)
        for (long i = 1; i < s.nx - 1; i++) {
            std::size_t c0 = (std::size_t)s.cell(k, j, i);
            std::size_t blk = (std::size_t)(s.pcell(j, i) * 25);
            diag_block(cf, &s.u[c0 * 5], s.rho_i[c0], &s.d[blk]);
            std::size_t cz = (std::size_t)s.cell(k - 1, j, i);
            flux_jacobian(3, -cf.dt * cf.tz2, cf.dt * cf.tz1, cf.dz,
                          &s.u[cz * 5], s.rho_i[cz], s.qs[cz], cf, &s.a[blk]);
            std::size_t cy = (std::size_t)s.cell(k, j - 1, i);
            flux_jacobian(2, -cf.dt * cf.ty2, cf.dt * cf.ty1, cf.dy,
                          &s.u[cy * 5], s.rho_i[cy], s.qs[cy], cf, &s.b[blk]);
            std::size_t cx = (std::size_t)s.cell(k, j, i - 1);
            flux_jacobian(1, -cf.dt * cf.tx2, cf.dt * cf.tx1, cf.dx,
                          &s.u[cx * 5], s.rho_i[cx], s.qs[cx], cf, &s.c[blk]);
        }
}

// Upper-triangle blocks: a/b/c now couple to the leading i+1, j+1,
// k+1 neighbors and the convective term flips sign.
void jacu_rows(State& s, long k, IndexRange jr)
{
    const Coeffs& cf = s.cf;
    for (long j = jr.begin; j < jr.end; j++)
        for (long i = 1; i < s.nx - 1; i++) {
            std::size_t c0 = (std::size_t)s.cell(k, j, i);
            std::size_t blk = (std::size_t)(s.pcell(j, i) * 25);
            diag_block(cf, &s.u[c0 * 5], s.rho_i[c0], &s.d[blk]);
            std::size_t cx = (std::size_t)s.cell(k, j, i + 1);
            flux_jacobian(1, cf.dt * cf.tx2, cf.dt * cf.tx1, cf.dx,
                          &s.u[cx * 5], s.rho_i[cx], s.qs[cx], cf, &s.a[blk]);
            std::size_t cy = (std::size_t)s.cell(k, j + 1, i);
            flux_jacobian(2, cf.dt * cf.ty2, cf.dt * cf.ty1, cf.dy,
                          &s.u[cy * 5], s.rho_i[cy], s.qs[cy], cf, &s.b[blk]);
            std::size_t cz = (std::size_t)s.cell(k + 1, j, i);
            flux_jacobian(3, cf.dt * cf.tz2, cf.dt * cf.tz1, cf.dz,
                          &s.u[cz * 5], s.rho_i[cz], s.qs[cz], cf, &s.c[blk]);
        }
}

// Forward substitution on rows [jr) of plane k. The k-1 plane and the
// j-1 row of this plane are fully solved by the pipeline hand-off; row
// order inside the block supplies the i-1 dependency.
void blts_rows(State& s, long k, IndexRange jr)
{
    const double omega = s.cf.omega;
    const long nx = s.nx;
    for (long j = jr.begin; j < jr.end; j++)
        for (long i = 1; i < nx - 1; i++) {
            double* v = &s.rsd[(std::size_t)(s.cell(k, j, i) * 5)];
            const double* vz = &s.rsd[(std::size_t)(s.cell(k - 1, j, i) * 5)];
            const double* az = &s.a[(std::size_t)(s.pcell(j, i) * 25)];
            for (int m = 0; m < 5; m++)
                v[m] -= omega * row_dot(az, m, vz);
        }
    for (long j = jr.begin; j < jr.end; j++)
        for (long i = 1; i < nx - 1; i++) {
            double* v = &s.rsd[(std::size_t)(s.cell(k, j, i) * 5)];
            const double* vy = &s.rsd[(std::size_t)(s.cell(k, j - 1, i) * 5)];
            const double* vx = &s.rsd[(std::size_t)(s.cell(k, j, i - 1) * 5)];
            std::size_t blk = (std::size_t)(s.pcell(j, i) * 25);
            const double* by = &s.b[blk];
            const double* cx = &s.c[blk];
            double t[5];
            for (int m = 0; m < 5; m++)
                t[m] = v[m] - omega * (row_dot(by, m, vy) + row_dot(cx, m, vx));
            solve5(&s.d[blk], t);
            for (int m = 0; m < 5; m++)
                v[m] = t[m];
        }
}

// Backward substitution, descending through rows [jr) of plane k,
// mirroring blts_rows against the leading neighbors.
void buts_rows(State& s, long k, IndexRange jr)
{
    const double omega = s.cf.omega;
    const long nx = s.nx;
    for (long j = jr.end - 1; j >= jr.begin; j--)
        for (long i = nx - 2; i >= 1; i--) {
            const double* vz = &s.rsd[(std::size_t)(s.cell(k + 1, j, i) * 5)];
            const double* cz = &s.c[(std::size_t)(s.pcell(j, i) * 25)];
            double* t = &s.tv[(std::size_t)(s.pcell(j, i) * 5)];
            for (int m = 0; m < 5; m++)
                t[m] = omega * row_dot(cz, m, vz);
        }
    for (long j = jr.end - 1; j >= jr.begin; j--)
        for (long i = nx - 2; i >= 1; i--) {
            const double* vy = &s.rsd[(std::size_t)(s.cell(k, j + 1, i) * 5)];
            const double* vx = &s.rsd[(std::size_t)(s.cell(k, j, i + 1) * 5)];
            std::size_t blk = (std::size_t)(s.pcell(j, i) * 25);
            const double* by = &s.b[blk];
            const double* ax = &s.a[blk];
            double* t = &s.tv[(std::size_t)(s.pcell(j, i) * 5)];
            for (int m = 0; m < 5; m++)
                t[m] += omega * (row_dot(by, m, vy) + row_dot(ax, m, vx));
            solve5(&s.d[blk], t);
            double* v = &s.rsd[(std::size_t)(s.cell(k, j, i) * 5)];
            for (int m = 0; m < 5; m++)
                v[m] -= t[m];
        }
}

} // namespace

// ---------------------------------------------------------------------
// pipelined sweeps
// ---------------------------------------------------------------------

void lower_sweep(State& s, WorkerPool& pool, TicketLog* log)
{
    const int nw = pool.workers();
    const long ny = s.ny;
    pool.ordered_pipeline(
        {1, s.nz - 1}, {0, nw},
        [&](long k, long blk) {
            IndexRange jr = static_partition({1, ny - 1}, (int)blk, nw);
            jacld_rows(s, k, jr);
            blts_rows(s, k, jr);
        },
        SweepDirection::ascending, log);
}

void upper_sweep(State& s, WorkerPool& pool, TicketLog* log)
{
    const int nw = pool.workers();
    const long ny = s.ny;
    pool.ordered_pipeline(
        {1, s.nz - 1}, {0, nw},
        [&](long k, long blk) {
            // hand-off order ascends in the block index; mirroring the
            // j-block selection turns that into descending j, the
            // dependency direction of the backward substitution
            IndexRange jr =
                static_partition({1, ny - 1}, (int)(nw - 1 - blk), nw);
            jacu_rows(s, k, jr);
            buts_rows(s, k, jr);
        },
        SweepDirection::descending, log);
}

// ---------------------------------------------------------------------
// SSOR driver
// ---------------------------------------------------------------------

void ssor_step(State& s, WorkerPool& pool, TicketLog* lower_log,
               TicketLog* upper_log)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    const Coeffs& cf = s.cf;
    const double tmp = 1.0 / (cf.omega * (2.0 - cf.omega));

    pool.par_map({1, nz - 1}, [&](long k) {
        for (long j = 1; j < ny - 1; j++)
            for (long i = 1; i < nx - 1; i++) {
                double* r = &s.rsd[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++)
                    r[m] *= cf.dt;
            }
    });

    lower_sweep(s, pool, lower_log);
    upper_sweep(s, pool, upper_log);

    // relaxed update of the flow field
    pool.par_map({1, nz - 1}, [&](long k) {
        for (long j = 1; j < ny - 1; j++)
            for (long i = 1; i < nx - 1; i++) {
                std::size_t c = (std::size_t)(s.cell(k, j, i) * 5);
                for (int m = 0; m < 5; m++)
                    s.u[c + (std::size_t)m] += tmp * s.rsd[c + (std::size_t)m];
            }
    });

    compute_rhs(s, pool);
}

SsorStats ssor(State& s, WorkerPool& pool, int niter)
{
    compute_rhs(s, pool);
    SsorStats st;
    st.rsdnm = l2norm(s, s.rsd, pool);

    TimerSet timers;
    timers.start(0);
    for (int istep = 1; istep <= niter; istep++) {
        ssor_step(s, pool);
        // the reference inputs put the norm cadence at the full run
        // length, so the refresh lands on the final iterate only
        if (istep == niter)
            st.rsdnm = l2norm(s, s.rsd, pool);
        bool settled = true;
        for (int m = 0; m < 5; m++)
            settled = settled && st.rsdnm[(std::size_t)m] < kTolRsd;
        if (settled)
            break;
    }
    timers.stop(0);
    st.elapsed = timers.read(0);
    return st;
}

// ---------------------------------------------------------------------
// norms and verification
// ---------------------------------------------------------------------

std::array<double, 5> l2norm(const State& s, const std::vector<double>& v,
                             WorkerPool& pool)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    using Sums = std::array<double, 5>;

    // worker-order fold keeps the reported norms stable run to run
    bool det = pool.deterministic_reduction();
    pool.set_deterministic_reduction(true);
    Sums sums = pool.par_map_reduce(
        IndexRange{1, nz - 1},
        [&](long k) {
            Sums acc{};
            for (long j = 1; j < ny - 1; j++)
                for (long i = 1; i < nx - 1; i++) {
                    const double* w =
                        &v[(std::size_t)(s.cell(k, j, i) * 5)];
                    for (int m = 0; m < 5; m++)
                        acc[(std::size_t)m] += w[m] * w[m];
                }
            return acc;
        },
        Sums{},
        [](Sums x, const Sums& y) {
            for (int m = 0; m < 5; m++)
                x[(std::size_t)m] += y[(std::size_t)m];
            return x;
        });
    pool.set_deterministic_reduction(det);

    double cells = (double)(nx - 2) * (double)(ny - 2) * (double)(nz - 2);
    Sums out;
    for (int m = 0; m < 5; m++)
        out[(std::size_t)m] = std::sqrt(sums[(std::size_t)m] / cells);
    return out;
}

std::array<double, 5> error_norm(const State& s)
{
    std::array<double, 5> sums{};
    for (long k = 1; k < s.nz - 1; k++) {
        double zeta = (double)k * s.cf.dzeta;
        for (long j = 1; j < s.ny - 1; j++) {
            double eta = (double)j * s.cf.deta;
            for (long i = 1; i < s.nx - 1; i++) {
                double xi = (double)i * s.cf.dxi;
                double ue[5];
                exact_solution(xi, eta, zeta, ue);
                const double* uc = &s.u[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++) {
                    double diff = ue[m] - uc[m];
                    sums[(std::size_t)m] += diff * diff;
                }
            }
        }
    }
    double cells =
        (double)(s.nx - 2) * (double)(s.ny - 2) * (double)(s.nz - 2);
    std::array<double, 5> out;
    for (int m = 0; m < 5; m++)
        out[(std::size_t)m] = std::sqrt(sums[(std::size_t)m] / cells);
    return out;
}

double surface_integral(const State& s)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    const Coeffs& cf = s.cf;

    // index windows of the verification sub-domain (note the shorter
    // j window and the k window starting one cell deeper)
    const long ibeg = 1, ifin = nx - 2;
    const long jbeg = 1, jfin = ny - 3;
    const long kbeg = 2, kfin = nz - 2;

    auto phi = [&](long k, long j, long i) {
        const double* uc = &s.u[(std::size_t)(s.cell(k, j, i) * 5)];
        return cf.c2 * (uc[4] - 0.50 * (uc[1] * uc[1] + uc[2] * uc[2] +
                                        uc[3] * uc[3]) / uc[0]);
    };

    double frc1 = 0.0;
    for (long j = jbeg; j < jfin; j++)
        for (long i = ibeg; i < ifin; i++)
            frc1 += phi(kbeg, j, i) + phi(kbeg, j, i + 1) +
                    phi(kbeg, j + 1, i) + phi(kbeg, j + 1, i + 1) +
                    phi(kfin, j, i) + phi(kfin, j, i + 1) +
                    phi(kfin, j + 1, i) + phi(kfin, j + 1, i + 1);
    frc1 = cf.dxi * cf.deta * frc1;

    double frc2 = 0.0;
    for (long k = kbeg; k < kfin; k++)
        for (long i = ibeg; i < ifin; i++)
            frc2 += phi(k, jbeg, i) + phi(k, jbeg, i + 1) +
                    phi(k + 1, jbeg, i) + phi(k + 1, jbeg, i + 1) +
                    phi(k, jfin, i) + phi(k, jfin, i + 1) +
                    phi(k + 1, jfin, i) + phi(k + 1, jfin, i + 1);
    frc2 = cf.dxi * cf.dzeta * frc2;

    double frc3 = 0.0;
    for (long k = kbeg; k < kfin; k++)
        for (long j = jbeg; j < jfin; j++)
            frc3 += phi(k, j, ibeg) + phi(k, j + 1, ibeg) +
                    phi(k + 1, j, ibeg) + phi(k + 1, j + 1, ibeg) +
                    phi(k, j, ifin) + phi(k, j + 1, ifin) +
                    phi(k + 1, j, ifin) + phi(k + 1, j + 1, ifin);
    frc3 = cf.deta * cf.dzeta * frc3;

    return 0.25 * (frc1 + frc2 + frc3);
}

bool verify_norms(const std::array<double, 5>& xcr,
                  const std::array<double, 5>& xce, double xci, double dt,
                  const Params& p)
{
    if (!(std::fabs(dt - p.dt_ref) <= kEpsilon))
        return false;
    for (int m = 0; m < 5; m++) {
        double rdiff = std::fabs((xcr[(std::size_t)m] - p.xcr_ref[(std::size_t)m]) /
                                 p.xcr_ref[(std::size_t)m]);
        double ediff = std::fabs((xce[(std::size_t)m] - p.xce_ref[(std::size_t)m]) /
                                 p.xce_ref[(std::size_t)m]);
        if (!(rdiff <= kEpsilon) || !(ediff <= kEpsilon))
            return false;
    }
    double idiff = std::fabs((xci - p.xci_ref) / p.xci_ref);
    return idiff <= kEpsilon;
}

BenchmarkResult run(ProblemClass cls, WorkerPool& pool, bool safe_mode)
{
    const Params prm = params_for(cls);
    State s(prm.nx, prm.ny, prm.nz, prm.dt);

    initialize(s, pool);
    exact_rhs(s, pool);

    // one untimed iteration touches every code path, then the flow
    // field restarts from the initial guess
    ssor(s, pool, 1);
    initialize(s, pool);

    SsorStats st = ssor(s, pool, prm.niter);

    std::array<double, 5> xce = error_norm(s);
    double xci = surface_integral(s);

    double t = st.elapsed;
    double n3 = (double)prm.nx * prm.ny * prm.nz;
    double navg = (prm.nx + prm.ny + prm.nz) / 3.0;

    BenchmarkResult res;
    res.name = "LU";
    res.cls = cls;
    char size[48];
    std::snprintf(size, sizeof(size), "%dx%dx%d", prm.nx, prm.ny, prm.nz);
    res.size = size;
    res.iterations = prm.niter;
    res.seconds = t;
    res.mflops = t > 0.0 ? 1.0e-6 * (double)prm.niter *
                               (1984.77 * n3 - 10923.3 * navg * navg +
                                27770.9 * navg - 144010.0) / t
                         : 0.0;
    res.verified = verify_norms(st.rsdnm, xce, xci, prm.dt, prm);
    res.workers = pool.workers();
    res.safe_mode = safe_mode;
    return res;
}

} // namespace npb::lu

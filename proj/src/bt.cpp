#include "npb/bt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "npb/timers.hpp"

namespace npb::bt {

namespace {

constexpr double kEpsilon = 1.0e-8;

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
        p.dt = 0.010;
        p.niter = 60;
        p.dt_ref = 1.0e-2;
        p.xcr_ref = {1.7034283709541311e-01, 1.2975252070034097e-02,
                     3.2527926989486055e-02, 2.6436421275166801e-02,
                     1.9211784131744430e-01};
        p.xce_ref = {4.9976913345811579e-04, 4.5195666782961927e-05,
                     7.3973765172921357e-05, 7.3821238632439731e-05,
                     8.9269630987491446e-04};
        break;
    case ProblemClass::W:
        p.nx = p.ny = p.nz = 24;
        p.dt = 0.0008;
        p.niter = 200;
        p.dt_ref = 0.8e-3;
        p.xcr_ref = {0.1125590409344e+03, 0.1180007595731e+02,
                     0.2710329767846e+02, 0.2469174937669e+02,
                     0.2638427874317e+03};
        p.xce_ref = {0.4419655736008e+01, 0.4638531260002e+00,
                     0.1011551749967e+01, 0.9235878729944e+00,
                     0.1018045837718e+02};
        break;
    case ProblemClass::A:
        p.nx = p.ny = p.nz = 64;
        p.dt = 0.0008;
        p.niter = 200;
        p.dt_ref = 0.8e-3;
        p.xcr_ref = {1.0806346714637264e+02, 1.1319730901220813e+01,
                     2.5974354511582465e+01, 2.3665622544678910e+01,
                     2.5278963211748344e+02};
        p.xce_ref = {4.2348416040525025e+00, 4.4390282496995698e-01,
                     9.6692480136345650e-01, 8.8302063039765474e-01,
                     9.7379901770829278e+00};
        break;
    case ProblemClass::B:
        p.nx = p.ny = p.nz = 102;
        p.dt = 0.0003;
        p.niter = 200;
        p.dt_ref = 3.0e-4;
        p.xcr_ref = {1.4233597229287254e+03, 9.9330522590150238e+01,
                     3.5646025644535285e+02, 3.2485447959084092e+02,
                     3.2707541254659363e+03};
        p.xce_ref = {5.2969847140936856e+01, 4.4632896115670668e+00,
                     1.3122573342210174e+01, 1.2006925323559144e+01,
                     1.2459576151035986e+02};
        break;
    case ProblemClass::C:
        p.nx = p.ny = p.nz = 162;
        p.dt = 0.0001;
        p.niter = 200;
        p.dt_ref = 1.0e-4;
        p.xcr_ref = {0.62398116551764615e+04, 0.50793239190423964e+03,
                     0.15423530093013596e+04, 0.13302387929291190e+04,
                     0.11604087428436455e+05};
        p.xce_ref = {0.16462008369091265e+03, 0.11497107903824313e+02,
                     0.41207446207461508e+02, 0.37087651059694167e+02,
                     0.36211053051841265e+03};
        break;
    }
    return p;
}

void exact_solution(double xi, double eta, double zeta, double out[5])
{
    for (int m = 0; m < 5; m++)
        out[m] = kCe[m][0] +
                 xi * (kCe[m][1] +
                       xi * (kCe[m][4] + xi * (kCe[m][7] + xi * kCe[m][10]))) +
                 eta * (kCe[m][2] +
                        eta * (kCe[m][5] + eta * (kCe[m][8] + eta * kCe[m][11]))) +
                 zeta * (kCe[m][3] +
                         zeta * (kCe[m][6] + zeta * (kCe[m][9] + zeta * kCe[m][12])));
}

Coeffs make_coeffs(int nx, int ny, int nz, double dt)
{
    Coeffs c;
    c.dt = dt;

    const double c1 = 1.4, c2 = 0.4, c3 = 0.1, c4 = 1.0, c5 = 1.4;
    c.c1 = c1;
    c.c2 = c2;
    c.c3c4 = c3 * c4;
    const double c1c5 = c1 * c5;
    c.c1345 = c1c5 * c.c3c4;
    const double conz1 = 1.0 - c1c5;
    c.con43 = 4.0 / 3.0;
    const double con16 = 1.0 / 6.0;

    c.dnxm1 = 1.0 / ((double)nx - 1.0);
    c.dnym1 = 1.0 / ((double)ny - 1.0);
    c.dnzm1 = 1.0 / ((double)nz - 1.0);

    const double tx1 = 1.0 / (c.dnxm1 * c.dnxm1);
    c.tx2 = 1.0 / (2.0 * c.dnxm1);
    const double tx3 = 1.0 / c.dnxm1;
    const double ty1 = 1.0 / (c.dnym1 * c.dnym1);
    c.ty2 = 1.0 / (2.0 * c.dnym1);
    const double ty3 = 1.0 / c.dnym1;
    const double tz1 = 1.0 / (c.dnzm1 * c.dnzm1);
    c.tz2 = 1.0 / (2.0 * c.dnzm1);
    const double tz3 = 1.0 / c.dnzm1;

    c.dx1 = c.dx2 = c.dx3 = c.dx4 = c.dx5 = 0.75;
    c.dy1 = c.dy2 = c.dy3 = c.dy4 = c.dy5 = 0.75;
    c.dz1 = c.dz2 = c.dz3 = c.dz4 = c.dz5 = 1.0;
    c.dssp = 0.25 * std::max(c.dx1, std::max(c.dy1, c.dz1));

    c.dttx1 = dt * tx1;
    c.dttx2 = dt * c.tx2;
    c.dtty1 = dt * ty1;
    c.dtty2 = dt * c.ty2;
    c.dttz1 = dt * tz1;
    c.dttz2 = dt * c.tz2;

    c.dx1tx1 = c.dx1 * tx1;
    c.dx2tx1 = c.dx2 * tx1;
    c.dx3tx1 = c.dx3 * tx1;
    c.dx4tx1 = c.dx4 * tx1;
    c.dx5tx1 = c.dx5 * tx1;
    c.dy1ty1 = c.dy1 * ty1;
    c.dy2ty1 = c.dy2 * ty1;
    c.dy3ty1 = c.dy3 * ty1;
    c.dy4ty1 = c.dy4 * ty1;
    c.dy5ty1 = c.dy5 * ty1;
    c.dz1tz1 = c.dz1 * tz1;
    c.dz2tz1 = c.dz2 * tz1;
    c.dz3tz1 = c.dz3 * tz1;
    c.dz4tz1 = c.dz4 * tz1;
    c.dz5tz1 = c.dz5 * tz1;

    const double c3c4tx3 = c.c3c4 * tx3;
    const double c3c4ty3 = c.c3c4 * ty3;
    const double c3c4tz3 = c.c3c4 * tz3;

    c.xxcon1 = c3c4tx3 * c.con43 * tx3;
    c.xxcon2 = c3c4tx3 * tx3;
    c.xxcon3 = c3c4tx3 * conz1 * tx3;
    c.xxcon4 = c3c4tx3 * con16 * tx3;
    c.xxcon5 = c3c4tx3 * c1c5 * tx3;
    c.yycon1 = c3c4ty3 * c.con43 * ty3;
    c.yycon2 = c3c4ty3 * ty3;
    c.yycon3 = c3c4ty3 * conz1 * ty3;
    c.yycon4 = c3c4ty3 * con16 * ty3;
    c.yycon5 = c3c4ty3 * c1c5 * ty3;
    c.zzcon1 = c3c4tz3 * c.con43 * tz3;
    c.zzcon2 = c3c4tz3 * tz3;
    c.zzcon3 = c3c4tz3 * conz1 * tz3;
    c.zzcon4 = c3c4tz3 * con16 * tz3;
    c.zzcon5 = c3c4tz3 * c1c5 * tz3;

    return c;
}

State::State(int nx_, int ny_, int nz_, double dt)
    : nx(nx_), ny(ny_), nz(nz_), cf(make_coeffs(nx_, ny_, nz_, dt))
{
    const std::size_t cells = (std::size_t)nx * ny * nz;
    u.assign(cells * 5, 0.0);
    rhs.assign(cells * 5, 0.0);
    forcing.assign(cells * 5, 0.0);
    us.assign(cells, 0.0);
    vs.assign(cells, 0.0);
    ws.assign(cells, 0.0);
    qs.assign(cells, 0.0);
    rho_i.assign(cells, 0.0);
    square.assign(cells, 0.0);
}

void initialize(State& s, WorkerPool& pool)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    const Coeffs& cf = s.cf;

    // compute_rhs later takes 1/u everywhere, so give the unused corner
    // cells something nonzero
    std::fill(s.u.begin(), s.u.end(), 1.0);

    // trilinear blend of the six face solutions over the whole grid
    pool.par_map({0, nz}, [&](long k) {
        double zeta = (double)k * cf.dnzm1;
        double pface[2][3][5];
        for (long j = 0; j < ny; j++) {
            double eta = (double)j * cf.dnym1;
            for (long i = 0; i < nx; i++) {
                double xi = (double)i * cf.dnxm1;
                for (int d = 0; d < 2; d++)
                    exact_solution((double)d, eta, zeta, pface[d][0]);
                for (int d = 0; d < 2; d++)
                    exact_solution(xi, (double)d, zeta, pface[d][1]);
                for (int d = 0; d < 2; d++)
                    exact_solution(xi, eta, (double)d, pface[d][2]);
                double* uc = &s.u[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++) {
                    double pxi = xi * pface[1][0][m] + (1.0 - xi) * pface[0][0][m];
                    double peta = eta * pface[1][1][m] + (1.0 - eta) * pface[0][1][m];
                    double pzeta = zeta * pface[1][2][m] + (1.0 - zeta) * pface[0][2][m];
                    uc[m] = pxi + peta + pzeta - pxi * peta - pxi * pzeta -
                            peta * pzeta + pxi * peta * pzeta;
                }
            }
        }
    });

    // exact values on the boundary faces; shared edges are written more
    // than once with identical values
    pool.par_map({0, nz}, [&](long k) {
        double zeta = (double)k * cf.dnzm1;
        double temp[5];
        for (long j = 0; j < ny; j++) {
            double eta = (double)j * cf.dnym1;
            exact_solution(0.0, eta, zeta, temp);
            std::memcpy(&s.u[(std::size_t)(s.cell(k, j, 0) * 5)], temp, sizeof temp);
            exact_solution(1.0, eta, zeta, temp);
            std::memcpy(&s.u[(std::size_t)(s.cell(k, j, nx - 1) * 5)], temp, sizeof temp);
        }
        for (long i = 0; i < nx; i++) {
            double xi = (double)i * cf.dnxm1;
            exact_solution(xi, 0.0, zeta, temp);
            std::memcpy(&s.u[(std::size_t)(s.cell(k, 0, i) * 5)], temp, sizeof temp);
            exact_solution(xi, 1.0, zeta, temp);
            std::memcpy(&s.u[(std::size_t)(s.cell(k, ny - 1, i) * 5)], temp, sizeof temp);
        }
    });
    pool.par_map({0, ny}, [&](long j) {
        double eta = (double)j * cf.dnym1;
        double temp[5];
        for (long i = 0; i < nx; i++) {
            double xi = (double)i * cf.dnxm1;
            exact_solution(xi, eta, 0.0, temp);
            std::memcpy(&s.u[(std::size_t)(s.cell(0, j, i) * 5)], temp, sizeof temp);
            exact_solution(xi, eta, 1.0, temp);
            std::memcpy(&s.u[(std::size_t)(s.cell(nz - 1, j, i) * 5)], temp, sizeof temp);
        }
    });
}

void exact_rhs(State& s, WorkerPool& pool)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    const Coeffs& cf = s.cf;
    const long nmax = std::max(nx, std::max(ny, nz));

    pool.par_map({0, nz}, [&](long k) {
        std::fill(s.forcing.begin() + s.cell(k, 0, 0) * 5,
                  s.forcing.begin() + s.cell(k + 1, 0, 0) * 5, 0.0);
    });

    // per worker: pencils of exact values, velocities, squared speed and
    // dynamic pressure along one line
    std::vector<std::vector<double>> scratch((std::size_t)pool.workers());
    auto pencils = [&](std::vector<double>& b, double (*&ue)[5],
                       double (*&buf)[5], double*& cuf, double*& q) {
        if (b.empty())
            b.resize((std::size_t)(12 * nmax));
        ue = reinterpret_cast<double(*)[5]>(b.data());
        buf = reinterpret_cast<double(*)[5]>(b.data() + 5 * nmax);
        cuf = b.data() + 10 * nmax;
        q = b.data() + 11 * nmax;
    };

    // xi-direction flux differences, one (k, j) line at a time
    pool.par_map({1, nz - 1}, [&](long k) {
        double(*ue)[5];
        double(*buf)[5];
        double *cuf, *q;
        pencils(scratch[(std::size_t)WorkerPool::current_worker()], ue, buf, cuf, q);
        double zeta = (double)k * cf.dnzm1;
        for (long j = 1; j < ny - 1; j++) {
            double eta = (double)j * cf.dnym1;
            for (long i = 0; i < nx; i++) {
                double xi = (double)i * cf.dnxm1;
                double dtemp[5];
                exact_solution(xi, eta, zeta, dtemp);
                for (int m = 0; m < 5; m++)
                    ue[i][m] = dtemp[m];
                double dtpp = 1.0 / dtemp[0];
                for (int m = 1; m < 5; m++)
                    buf[i][m] = dtpp * dtemp[m];
                cuf[i] = buf[i][1] * buf[i][1];
                buf[i][0] = cuf[i] + buf[i][2] * buf[i][2] + buf[i][3] * buf[i][3];
                q[i] = 0.5 * (buf[i][1] * ue[i][1] + buf[i][2] * ue[i][2] +
                              buf[i][3] * ue[i][3]);
            }
            for (long i = 1; i < nx - 1; i++) {
                long im1 = i - 1, ip1 = i + 1;
                double* fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[0] = fo[0] - cf.tx2 * (ue[ip1][1] - ue[im1][1]) +
                        cf.dx1tx1 * (ue[ip1][0] - 2.0 * ue[i][0] + ue[im1][0]);
                fo[1] = fo[1] -
                        cf.tx2 * ((ue[ip1][1] * buf[ip1][1] +
                                   cf.c2 * (ue[ip1][4] - q[ip1])) -
                                  (ue[im1][1] * buf[im1][1] +
                                   cf.c2 * (ue[im1][4] - q[im1]))) +
                        cf.xxcon1 * (buf[ip1][1] - 2.0 * buf[i][1] + buf[im1][1]) +
                        cf.dx2tx1 * (ue[ip1][1] - 2.0 * ue[i][1] + ue[im1][1]);
                fo[2] = fo[2] -
                        cf.tx2 * (ue[ip1][2] * buf[ip1][1] -
                                  ue[im1][2] * buf[im1][1]) +
                        cf.xxcon2 * (buf[ip1][2] - 2.0 * buf[i][2] + buf[im1][2]) +
                        cf.dx3tx1 * (ue[ip1][2] - 2.0 * ue[i][2] + ue[im1][2]);
                fo[3] = fo[3] -
                        cf.tx2 * (ue[ip1][3] * buf[ip1][1] -
                                  ue[im1][3] * buf[im1][1]) +
                        cf.xxcon2 * (buf[ip1][3] - 2.0 * buf[i][3] + buf[im1][3]) +
                        cf.dx4tx1 * (ue[ip1][3] - 2.0 * ue[i][3] + ue[im1][3]);
                fo[4] = fo[4] -
                        cf.tx2 * (buf[ip1][1] * (cf.c1 * ue[ip1][4] - cf.c2 * q[ip1]) -
                                  buf[im1][1] * (cf.c1 * ue[im1][4] - cf.c2 * q[im1])) +
                        0.5 * cf.xxcon3 * (buf[ip1][0] - 2.0 * buf[i][0] + buf[im1][0]) +
                        cf.xxcon4 * (cuf[ip1] - 2.0 * cuf[i] + cuf[im1]) +
                        cf.xxcon5 * (buf[ip1][4] - 2.0 * buf[i][4] + buf[im1][4]) +
                        cf.dx5tx1 * (ue[ip1][4] - 2.0 * ue[i][4] + ue[im1][4]);
            }
            // fourth-order dissipation with one-sided ends
            for (int m = 0; m < 5; m++) {
                long i = 1;
                double* fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[m] -= cf.dssp * (5.0 * ue[i][m] - 4.0 * ue[i + 1][m] + ue[i + 2][m]);
                i = 2;
                fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[m] -= cf.dssp * (-4.0 * ue[i - 1][m] + 6.0 * ue[i][m] -
                                    4.0 * ue[i + 1][m] + ue[i + 2][m]);
            }
            for (long i = 3; i < nx - 3; i++) {
                double* fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++)
                    fo[m] -= cf.dssp * (ue[i - 2][m] - 4.0 * ue[i - 1][m] +
                                        6.0 * ue[i][m] - 4.0 * ue[i + 1][m] +
                                        ue[i + 2][m]);
            }
            for (int m = 0; m < 5; m++) {
                long i = nx - 3;
                double* fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[m] -= cf.dssp * (ue[i - 2][m] - 4.0 * ue[i - 1][m] +
                                    6.0 * ue[i][m] - 4.0 * ue[i + 1][m]);
                i = nx - 2;
                fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[m] -= cf.dssp * (ue[i - 2][m] - 4.0 * ue[i - 1][m] + 5.0 * ue[i][m]);
            }
        }
    });

    // eta-direction
    pool.par_map({1, nz - 1}, [&](long k) {
        double(*ue)[5];
        double(*buf)[5];
        double *cuf, *q;
        pencils(scratch[(std::size_t)WorkerPool::current_worker()], ue, buf, cuf, q);
        double zeta = (double)k * cf.dnzm1;
        for (long i = 1; i < nx - 1; i++) {
            double xi = (double)i * cf.dnxm1;
            for (long j = 0; j < ny; j++) {
                double eta = (double)j * cf.dnym1;
                double dtemp[5];
                exact_solution(xi, eta, zeta, dtemp);
                for (int m = 0; m < 5; m++)
                    ue[j][m] = dtemp[m];
                double dtpp = 1.0 / dtemp[0];
                for (int m = 1; m < 5; m++)
                    buf[j][m] = dtpp * dtemp[m];
                cuf[j] = buf[j][2] * buf[j][2];
                buf[j][0] = cuf[j] + buf[j][1] * buf[j][1] + buf[j][3] * buf[j][3];
                q[j] = 0.5 * (buf[j][1] * ue[j][1] + buf[j][2] * ue[j][2] +
                              buf[j][3] * ue[j][3]);
            }
            for (long j = 1; j < ny - 1; j++) {
                long jm1 = j - 1, jp1 = j + 1;
                double* fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[0] = fo[0] - cf.ty2 * (ue[jp1][2] - ue[jm1][2]) +
                        cf.dy1ty1 * (ue[jp1][0] - 2.0 * ue[j][0] + ue[jm1][0]);
                fo[1] = fo[1] -
                        cf.ty2 * (ue[jp1][1] * buf[jp1][2] -
                                  ue[jm1][1] * buf[jm1][2]) +
                        cf.yycon2 * (buf[jp1][1] - 2.0 * buf[j][1] + buf[jm1][1]) +
                        cf.dy2ty1 * (ue[jp1][1] - 2.0 * ue[j][1] + ue[jm1][1]);
                fo[2] = fo[2] -
                        cf.ty2 * ((ue[jp1][2] * buf[jp1][2] +
                                   cf.c2 * (ue[jp1][4] - q[jp1])) -
                                  (ue[jm1][2] * buf[jm1][2] +
                                   cf.c2 * (ue[jm1][4] - q[jm1]))) +
                        cf.yycon1 * (buf[jp1][2] - 2.0 * buf[j][2] + buf[jm1][2]) +
                        cf.dy3ty1 * (ue[jp1][2] - 2.0 * ue[j][2] + ue[jm1][2]);
                fo[3] = fo[3] -
                        cf.ty2 * (ue[jp1][3] * buf[jp1][2] -
                                  ue[jm1][3] * buf[jm1][2]) +
                        cf.yycon2 * (buf[jp1][3] - 2.0 * buf[j][3] + buf[jm1][3]) +
                        cf.dy4ty1 * (ue[jp1][3] - 2.0 * ue[j][3] + ue[jm1][3]);
                fo[4] = fo[4] -
                        cf.ty2 * (buf[jp1][2] * (cf.c1 * ue[jp1][4] - cf.c2 * q[jp1]) -
                                  buf[jm1][2] * (cf.c1 * ue[jm1][4] - cf.c2 * q[jm1])) +
                        0.5 * cf.yycon3 * (buf[jp1][0] - 2.0 * buf[j][0] + buf[jm1][0]) +
                        cf.yycon4 * (cuf[jp1] - 2.0 * cuf[j] + cuf[jm1]) +
                        cf.yycon5 * (buf[jp1][4] - 2.0 * buf[j][4] + buf[jm1][4]) +
                        cf.dy5ty1 * (ue[jp1][4] - 2.0 * ue[j][4] + ue[jm1][4]);
            }
            for (int m = 0; m < 5; m++) {
                long j = 1;
                double* fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[m] -= cf.dssp * (5.0 * ue[j][m] - 4.0 * ue[j + 1][m] + ue[j + 2][m]);
                j = 2;
                fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[m] -= cf.dssp * (-4.0 * ue[j - 1][m] + 6.0 * ue[j][m] -
                                    4.0 * ue[j + 1][m] + ue[j + 2][m]);
            }
            for (long j = 3; j < ny - 3; j++) {
                double* fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++)
                    fo[m] -= cf.dssp * (ue[j - 2][m] - 4.0 * ue[j - 1][m] +
                                        6.0 * ue[j][m] - 4.0 * ue[j + 1][m] +
                                        ue[j + 2][m]);
            }
            for (int m = 0; m < 5; m++) {
                long j = ny - 3;
                double* fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[m] -= cf.dssp * (ue[j - 2][m] - 4.0 * ue[j - 1][m] +
                                    6.0 * ue[j][m] - 4.0 * ue[j + 1][m]);
                j = ny - 2;
                fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[m] -= cf.dssp * (ue[j - 2][m] - 4.0 * ue[j - 1][m] + 5.0 * ue[j][m]);
            }
        }
    });

    // zeta-direction; the map index is j so tasks own disjoint slabs
    pool.par_map({1, ny - 1}, [&](long j) {
        double(*ue)[5];
        double(*buf)[5];
        double *cuf, *q;
        pencils(scratch[(std::size_t)WorkerPool::current_worker()], ue, buf, cuf, q);
        double eta = (double)j * cf.dnym1;
        for (long i = 1; i < nx - 1; i++) {
            double xi = (double)i * cf.dnxm1;
            for (long k = 0; k < nz; k++) {
                double zeta = (double)k * cf.dnzm1;
                double dtemp[5];
                exact_solution(xi, eta, zeta, dtemp);
                for (int m = 0; m < 5; m++)
                    ue[k][m] = dtemp[m];
                double dtpp = 1.0 / dtemp[0];
                for (int m = 1; m < 5; m++)
                    buf[k][m] = dtpp * dtemp[m];
                cuf[k] = buf[k][3] * buf[k][3];
                buf[k][0] = cuf[k] + buf[k][1] * buf[k][1] + buf[k][2] * buf[k][2];
                q[k] = 0.5 * (buf[k][1] * ue[k][1] + buf[k][2] * ue[k][2] +
                              buf[k][3] * ue[k][3]);
            }
            for (long k = 1; k < nz - 1; k++) {
                long km1 = k - 1, kp1 = k + 1;
                double* fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[0] = fo[0] - cf.tz2 * (ue[kp1][3] - ue[km1][3]) +
                        cf.dz1tz1 * (ue[kp1][0] - 2.0 * ue[k][0] + ue[km1][0]);
                fo[1] = fo[1] -
                        cf.tz2 * (ue[kp1][1] * buf[kp1][3] -
                                  ue[km1][1] * buf[km1][3]) +
                        cf.zzcon2 * (buf[kp1][1] - 2.0 * buf[k][1] + buf[km1][1]) +
                        cf.dz2tz1 * (ue[kp1][1] - 2.0 * ue[k][1] + ue[km1][1]);
                fo[2] = fo[2] -
                        cf.tz2 * (ue[kp1][2] * buf[kp1][3] -
                                  ue[km1][2] * buf[km1][3]) +
                        cf.zzcon2 * (buf[kp1][2] - 2.0 * buf[k][2] + buf[km1][2]) +
                        cf.dz3tz1 * (ue[kp1][2] - 2.0 * ue[k][2] + ue[km1][2]);
                fo[3] = fo[3] -
                        cf.tz2 * ((ue[kp1][3] * buf[kp1][3] +
                                   cf.c2 * (ue[kp1][4] - q[kp1])) -
                                  (ue[km1][3] * buf[km1][3] +
                                   cf.c2 * (ue[km1][4] - q[km1]))) +
                        cf.zzcon1 * (buf[kp1][3] - 2.0 * buf[k][3] + buf[km1][3]) +
                        cf.dz4tz1 * (ue[kp1][3] - 2.0 * ue[k][3] + ue[km1][3]);
                fo[4] = fo[4] -
                        cf.tz2 * (buf[kp1][3] * (cf.c1 * ue[kp1][4] - cf.c2 * q[kp1]) -
                                  buf[km1][3] * (cf.c1 * ue[km1][4] - cf.c2 * q[km1])) +
                        0.5 * cf.zzcon3 * (buf[kp1][0] - 2.0 * buf[k][0] + buf[km1][0]) +
                        cf.zzcon4 * (cuf[kp1] - 2.0 * cuf[k] + cuf[km1]) +
                        cf.zzcon5 * (buf[kp1][4] - 2.0 * buf[k][4] + buf[km1][4]) +
                        cf.dz5tz1 * (ue[kp1][4] - 2.0 * ue[k][4] + ue[km1][4]);
            }
            for (int m = 0; m < 5; m++) {
                long k = 1;
                double* fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[m] -= cf.dssp * (5.0 * ue[k][m] - 4.0 * ue[k + 1][m] + ue[k + 2][m]);
                k = 2;
                fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[m] -= cf.dssp * (-4.0 * ue[k - 1][m] + 6.0 * ue[k][m] -
                                    4.0 * ue[k + 1][m] + ue[k + 2][m]);
            }
            for (long k = 3; k < nz - 3; k++) {
                double* fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++)
                    fo[m] -= cf.dssp * (ue[k - 2][m] - 4.0 * ue[k - 1][m] +
                                        6.0 * ue[k][m] - 4.0 * ue[k + 1][m] +
                                        ue[k + 2][m]);
            }
            for (int m = 0; m < 5; m++) {
                long k = nz - 3;
                double* fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[m] -= cf.dssp * (ue[k - 2][m] - 4.0 * ue[k - 1][m] +
                                    6.0 * ue[k][m] - 4.0 * ue[k + 1][m]);
                k = nz - 2;
                fo = &s.forcing[(std::size_t)(s.cell(k, j, i) * 5)];
                fo[m] -= cf.dssp * (ue[k - 2][m] - 4.0 * ue[k - 1][m] + 5.0 * ue[k][m]);
            }
        }
    });

    // flip the sign so compute_rhs can start from the forcing directly
    pool.par_map({1, nz - 1}, [&](long k) {
        for (long j = 1; j < ny - 1; j++) {
            double* fo = &s.forcing[(std::size_t)(s.cell(k, j, 1) * 5)];
            for (long t = 0; t < (nx - 2) * 5; t++)
                fo[t] = -1.0 * fo[t];
        }
    });
}

void compute_rhs(State& s, WorkerPool& pool)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    const Coeffs& cf = s.cf;

    // auxiliaries: reciprocal density, velocities, dynamic pressure
    pool.par_map({0, nz}, [&](long k) {
        for (long j = 0; j < ny; j++) {
            for (long i = 0; i < nx; i++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                const double* uc = &s.u[c * 5];
                double rho_inv = 1.0 / uc[0];
                s.rho_i[c] = rho_inv;
                s.us[c] = uc[1] * rho_inv;
                s.vs[c] = uc[2] * rho_inv;
                s.ws[c] = uc[3] * rho_inv;
                s.square[c] = 0.5 * (uc[1] * uc[1] + uc[2] * uc[2] +
                                     uc[3] * uc[3]) * rho_inv;
                s.qs[c] = s.square[c] * rho_inv;
            }
        }
    });

    pool.par_map({0, nz}, [&](long k) {
        std::copy(s.forcing.begin() + s.cell(k, 0, 0) * 5,
                  s.forcing.begin() + s.cell(k + 1, 0, 0) * 5,
                  s.rhs.begin() + s.cell(k, 0, 0) * 5);
    });

    // xi-direction fluxes and dissipation, plane parallel over k
    pool.par_map({1, nz - 1}, [&](long k) {
        for (long j = 1; j < ny - 1; j++) {
            for (long i = 1; i < nx - 1; i++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                std::size_t cp = c + 1, cm = c - 1;
                const double* uc = &s.u[c * 5];
                const double* up = &s.u[cp * 5];
                const double* um = &s.u[cm * 5];
                double* r = &s.rhs[c * 5];
                double uijk = s.us[c];
                double up1 = s.us[cp];
                double um1 = s.us[cm];
                r[0] = r[0] + cf.dx1tx1 * (up[0] - 2.0 * uc[0] + um[0]) -
                       cf.tx2 * (up[1] - um[1]);
                r[1] = r[1] + cf.dx2tx1 * (up[1] - 2.0 * uc[1] + um[1]) +
                       cf.xxcon2 * cf.con43 * (up1 - 2.0 * uijk + um1) -
                       cf.tx2 * (up[1] * up1 - um[1] * um1 +
                                 (up[4] - s.square[cp] - um[4] + s.square[cm]) * cf.c2);
                r[2] = r[2] + cf.dx3tx1 * (up[2] - 2.0 * uc[2] + um[2]) +
                       cf.xxcon2 * (s.vs[cp] - 2.0 * s.vs[c] + s.vs[cm]) -
                       cf.tx2 * (up[2] * up1 - um[2] * um1);
                r[3] = r[3] + cf.dx4tx1 * (up[3] - 2.0 * uc[3] + um[3]) +
                       cf.xxcon2 * (s.ws[cp] - 2.0 * s.ws[c] + s.ws[cm]) -
                       cf.tx2 * (up[3] * up1 - um[3] * um1);
                r[4] = r[4] + cf.dx5tx1 * (up[4] - 2.0 * uc[4] + um[4]) +
                       cf.xxcon3 * (s.qs[cp] - 2.0 * s.qs[c] + s.qs[cm]) +
                       cf.xxcon4 * (up1 * up1 - 2.0 * uijk * uijk + um1 * um1) +
                       cf.xxcon5 * (up[4] * s.rho_i[cp] - 2.0 * uc[4] * s.rho_i[c] +
                                    um[4] * s.rho_i[cm]) -
                       cf.tx2 * ((cf.c1 * up[4] - cf.c2 * s.square[cp]) * up1 -
                                 (cf.c1 * um[4] - cf.c2 * s.square[cm]) * um1);
            }
        }
        for (long j = 1; j < ny - 1; j++) {
            for (long i = 1; i < nx - 1; i++) {
                const double* uc = &s.u[(std::size_t)(s.cell(k, j, i) * 5)];
                double* r = &s.rhs[(std::size_t)(s.cell(k, j, i) * 5)];
                // neighbors along i are 5 doubles apart
                if (i == 1) {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (5.0 * uc[m] - 4.0 * uc[5 + m] + uc[10 + m]);
                } else if (i == 2) {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (-4.0 * uc[-5 + m] + 6.0 * uc[m] -
                                           4.0 * uc[5 + m] + uc[10 + m]);
                } else if (i == nx - 3) {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (uc[-10 + m] - 4.0 * uc[-5 + m] +
                                           6.0 * uc[m] - 4.0 * uc[5 + m]);
                } else if (i == nx - 2) {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (uc[-10 + m] - 4.0 * uc[-5 + m] + 5.0 * uc[m]);
                } else {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (uc[-10 + m] - 4.0 * uc[-5 + m] +
                                           6.0 * uc[m] - 4.0 * uc[5 + m] + uc[10 + m]);
                }
            }
        }
    });

    // eta-direction
    pool.par_map({1, nz - 1}, [&](long k) {
        for (long j = 1; j < ny - 1; j++) {
            for (long i = 1; i < nx - 1; i++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                std::size_t cp = (std::size_t)s.cell(k, j + 1, i);
                std::size_t cm = (std::size_t)s.cell(k, j - 1, i);
                const double* uc = &s.u[c * 5];
                const double* up = &s.u[cp * 5];
                const double* um = &s.u[cm * 5];
                double* r = &s.rhs[c * 5];
                double vijk = s.vs[c];
                double vp1 = s.vs[cp];
                double vm1 = s.vs[cm];
                r[0] = r[0] + cf.dy1ty1 * (up[0] - 2.0 * uc[0] + um[0]) -
                       cf.ty2 * (up[2] - um[2]);
                r[1] = r[1] + cf.dy2ty1 * (up[1] - 2.0 * uc[1] + um[1]) +
                       cf.yycon2 * (s.us[cp] - 2.0 * s.us[c] + s.us[cm]) -
                       cf.ty2 * (up[1] * vp1 - um[1] * vm1);
                r[2] = r[2] + cf.dy3ty1 * (up[2] - 2.0 * uc[2] + um[2]) +
                       cf.yycon2 * cf.con43 * (vp1 - 2.0 * vijk + vm1) -
                       cf.ty2 * (up[2] * vp1 - um[2] * vm1 +
                                 (up[4] - s.square[cp] - um[4] + s.square[cm]) * cf.c2);
                r[3] = r[3] + cf.dy4ty1 * (up[3] - 2.0 * uc[3] + um[3]) +
                       cf.yycon2 * (s.ws[cp] - 2.0 * s.ws[c] + s.ws[cm]) -
                       cf.ty2 * (up[3] * vp1 - um[3] * vm1);
                r[4] = r[4] + cf.dy5ty1 * (up[4] - 2.0 * uc[4] + um[4]) +
                       cf.yycon3 * (s.qs[cp] - 2.0 * s.qs[c] + s.qs[cm]) +
                       cf.yycon4 * (vp1 * vp1 - 2.0 * vijk * vijk + vm1 * vm1) +
                       cf.yycon5 * (up[4] * s.rho_i[cp] - 2.0 * uc[4] * s.rho_i[c] +
                                    um[4] * s.rho_i[cm]) -
                       cf.ty2 * ((cf.c1 * up[4] - cf.c2 * s.square[cp]) * vp1 -
                                 (cf.c1 * um[4] - cf.c2 * s.square[cm]) * vm1);
            }
        }
        const long dj = nx * 5; // neighbor stride along j
        for (long j = 1; j < ny - 1; j++) {
            for (long i = 1; i < nx - 1; i++) {
                const double* uc = &s.u[(std::size_t)(s.cell(k, j, i) * 5)];
                double* r = &s.rhs[(std::size_t)(s.cell(k, j, i) * 5)];
                if (j == 1) {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (5.0 * uc[m] - 4.0 * uc[dj + m] + uc[2 * dj + m]);
                } else if (j == 2) {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (-4.0 * uc[-dj + m] + 6.0 * uc[m] -
                                           4.0 * uc[dj + m] + uc[2 * dj + m]);
                } else if (j == ny - 3) {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (uc[-2 * dj + m] - 4.0 * uc[-dj + m] +
                                           6.0 * uc[m] - 4.0 * uc[dj + m]);
                } else if (j == ny - 2) {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (uc[-2 * dj + m] - 4.0 * uc[-dj + m] + 5.0 * uc[m]);
                } else {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (uc[-2 * dj + m] - 4.0 * uc[-dj + m] +
                                           6.0 * uc[m] - 4.0 * uc[dj + m] + uc[2 * dj + m]);
                }
            }
        }
    });

    // zeta-direction: the sweep index k stays outside and the map runs
    // over the inner j loop
    const long dk = nx * ny * 5; // neighbor stride along k
    for (long k = 1; k < nz - 1; k++) {
        pool.par_map({1, ny - 1}, [&](long j) {
            for (long i = 1; i < nx - 1; i++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                std::size_t cp = (std::size_t)s.cell(k + 1, j, i);
                std::size_t cm = (std::size_t)s.cell(k - 1, j, i);
                const double* uc = &s.u[c * 5];
                const double* up = &s.u[cp * 5];
                const double* um = &s.u[cm * 5];
                double* r = &s.rhs[c * 5];
                double wijk = s.ws[c];
                double wp1 = s.ws[cp];
                double wm1 = s.ws[cm];
                r[0] = r[0] + cf.dz1tz1 * (up[0] - 2.0 * uc[0] + um[0]) -
                       cf.tz2 * (up[3] - um[3]);
                r[1] = r[1] + cf.dz2tz1 * (up[1] - 2.0 * uc[1] + um[1]) +
                       cf.zzcon2 * (s.us[cp] - 2.0 * s.us[c] + s.us[cm]) -
                       cf.tz2 * (up[1] * wp1 - um[1] * wm1);
                r[2] = r[2] + cf.dz3tz1 * (up[2] - 2.0 * uc[2] + um[2]) +
                       cf.zzcon2 * (s.vs[cp] - 2.0 * s.vs[c] + s.vs[cm]) -
                       cf.tz2 * (up[2] * wp1 - um[2] * wm1);
                r[3] = r[3] + cf.dz4tz1 * (up[3] - 2.0 * uc[3] + um[3]) +
                       cf.zzcon2 * cf.con43 * (wp1 - 2.0 * wijk + wm1) -
                       cf.tz2 * (up[3] * wp1 - um[3] * wm1 +
                                 (up[4] - s.square[cp] - um[4] + s.square[cm]) * cf.c2);
                r[4] = r[4] + cf.dz5tz1 * (up[4] - 2.0 * uc[4] + um[4]) +
                       cf.zzcon3 * (s.qs[cp] - 2.0 * s.qs[c] + s.qs[cm]) +
                       cf.zzcon4 * (wp1 * wp1 - 2.0 * wijk * wijk + wm1 * wm1) +
                       cf.zzcon5 * (up[4] * s.rho_i[cp] - 2.0 * uc[4] * s.rho_i[c] +
                                    um[4] * s.rho_i[cm]) -
                       cf.tz2 * ((cf.c1 * up[4] - cf.c2 * s.square[cp]) * wp1 -
                                 (cf.c1 * um[4] - cf.c2 * s.square[cm]) * wm1);
            }
            for (long i = 1; i < nx - 1; i++) {
                const double* uc = &s.u[(std::size_t)(s.cell(k, j, i) * 5)];
                double* r = &s.rhs[(std::size_t)(s.cell(k, j, i) * 5)];
                if (k == 1) {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (5.0 * uc[m] - 4.0 * uc[dk + m] + uc[2 * dk + m]);
                } else if (k == 2) {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (-4.0 * uc[-dk + m] + 6.0 * uc[m] -
                                           4.0 * uc[dk + m] + uc[2 * dk + m]);
                } else if (k == nz - 3) {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (uc[-2 * dk + m] - 4.0 * uc[-dk + m] +
                                           6.0 * uc[m] - 4.0 * uc[dk + m]);
                } else if (k == nz - 2) {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (uc[-2 * dk + m] - 4.0 * uc[-dk + m] + 5.0 * uc[m]);
                } else {
                    for (int m = 0; m < 5; m++)
                        r[m] -= cf.dssp * (uc[-2 * dk + m] - 4.0 * uc[-dk + m] +
                                           6.0 * uc[m] - 4.0 * uc[dk + m] + uc[2 * dk + m]);
                }
            }
        });
    }

    pool.par_map({1, nz - 1}, [&](long k) {
        for (long j = 1; j < ny - 1; j++) {
            double* r = &s.rhs[(std::size_t)(s.cell(k, j, 1) * 5)];
            for (long t = 0; t < (nx - 2) * 5; t++)
                r[t] *= cf.dt;
        }
    });
}

// ---------------------------------------------------------------------
// block primitives
// ---------------------------------------------------------------------

void binvcrhs(double lhs[5][5], double c[5][5], double r[5])
{
    for (int p = 0; p < 5; p++) {
        double pivot = 1.0 / lhs[p][p];
        for (int n = p + 1; n < 5; n++)
            lhs[p][n] *= pivot;
        for (int n = 0; n < 5; n++)
            c[p][n] *= pivot;
        r[p] *= pivot;
        for (int m = 0; m < 5; m++) {
            if (m == p)
                continue;
            double coeff = lhs[m][p];
            for (int n = p + 1; n < 5; n++)
                lhs[m][n] -= coeff * lhs[p][n];
            for (int n = 0; n < 5; n++)
                c[m][n] -= coeff * c[p][n];
            r[m] -= coeff * r[p];
        }
    }
}

void binvrhs(double lhs[5][5], double r[5])
{
    for (int p = 0; p < 5; p++) {
        double pivot = 1.0 / lhs[p][p];
        for (int n = p + 1; n < 5; n++)
            lhs[p][n] *= pivot;
        r[p] *= pivot;
        for (int m = 0; m < 5; m++) {
            if (m == p)
                continue;
            double coeff = lhs[m][p];
            for (int n = p + 1; n < 5; n++)
                lhs[m][n] -= coeff * lhs[p][n];
            r[m] -= coeff * r[p];
        }
    }
}

void matvec_sub(const double a[5][5], const double x[5], double b[5])
{
    for (int m = 0; m < 5; m++)
        b[m] = b[m] - a[m][0] * x[0] - a[m][1] * x[1] - a[m][2] * x[2] -
               a[m][3] * x[3] - a[m][4] * x[4];
}

void matmul_sub(const double a[5][5], const double b[5][5], double c[5][5])
{
    for (int m = 0; m < 5; m++)
        for (int n = 0; n < 5; n++)
            c[m][n] = c[m][n] - a[m][0] * b[0][n] - a[m][1] * b[1][n] -
                      a[m][2] * b[2][n] - a[m][3] * b[3][n] - a[m][4] * b[4][n];
}

void solve_line(double* lhs, double* r, long last)
{
    auto* lh = reinterpret_cast<double(*)[3][5][5]>(lhs);
    auto* rr = reinterpret_cast<double(*)[5]>(r);

    binvcrhs(lh[0][1], lh[0][2], rr[0]);
    for (long i = 1; i < last; i++) {
        matvec_sub(lh[i][0], rr[i - 1], rr[i]);
        matmul_sub(lh[i][0], lh[i - 1][2], lh[i][1]);
        binvcrhs(lh[i][1], lh[i][2], rr[i]);
    }
    matvec_sub(lh[last][0], rr[last - 1], rr[last]);
    matmul_sub(lh[last][0], lh[last - 1][2], lh[last][1]);
    binvrhs(lh[last][1], rr[last]);

    for (long i = last - 1; i >= 0; i--)
        for (int m = 0; m < 5; m++)
            for (int n = 0; n < 5; n++)
                rr[i][m] -= lh[i][2][m][n] * rr[i + 1][n];
}

namespace {

// boundary cells get an identity system so the ends pass through
void lhs_init(double (*lh)[3][5][5], long last)
{
    for (long e : {0L, last})
        for (int b = 0; b < 3; b++)
            for (int m = 0; m < 5; m++)
                for (int n = 0; n < 5; n++)
                    lh[e][b][m][n] = 0.0;
    for (long e : {0L, last})
        for (int m = 0; m < 5; m++)
            lh[e][1][m][m] = 1.0;
}

// per-worker storage for one line's jacobians, blocks and gathered rhs
struct SolveScratch {
    double (*fj)[5][5];
    double (*nj)[5][5];
    double (*lh)[3][5][5];
    double (*r)[5];
};

SolveScratch line_scratch(std::vector<double>& b, long n)
{
    if (b.empty())
        b.resize((std::size_t)(130 * n));
    SolveScratch sc;
    sc.fj = reinterpret_cast<double(*)[5][5]>(b.data());
    sc.nj = reinterpret_cast<double(*)[5][5]>(b.data() + 25 * n);
    sc.lh = reinterpret_cast<double(*)[3][5][5]>(b.data() + 50 * n);
    sc.r = reinterpret_cast<double(*)[5]>(b.data() + 125 * n);
    return sc;
}

} // namespace

void x_solve(State& s, WorkerPool& pool)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    const Coeffs& cf = s.cf;
    const long last = nx - 1;
    const double dd[5] = {cf.dx1, cf.dx2, cf.dx3, cf.dx4, cf.dx5};

    std::vector<std::vector<double>> scratch((std::size_t)pool.workers());
    // lines never share rhs cells, so the k planes can run in any order
    pool.par_map({1, nz - 1}, [&](long k) {
        SolveScratch sc =
            line_scratch(scratch[(std::size_t)WorkerPool::current_worker()], nx);
        for (long j = 1; j < ny - 1; j++) {
            for (long i = 0; i <= last; i++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                const double* uc = &s.u[c * 5];
                double t1 = s.rho_i[c];
                double t2 = t1 * t1;
                double t3 = t1 * t2;
                double qsv = s.qs[c];
                double sqv = s.square[c];

                sc.fj[i][0][0] = 0.0;
                sc.fj[i][0][1] = 1.0;
                sc.fj[i][0][2] = 0.0;
                sc.fj[i][0][3] = 0.0;
                sc.fj[i][0][4] = 0.0;

                sc.fj[i][1][0] = -(uc[1] * t2 * uc[1]) + cf.c2 * qsv;
                sc.fj[i][1][1] = (2.0 - cf.c2) * (uc[1] / uc[0]);
                sc.fj[i][1][2] = -cf.c2 * (uc[2] * t1);
                sc.fj[i][1][3] = -cf.c2 * (uc[3] * t1);
                sc.fj[i][1][4] = cf.c2;

                sc.fj[i][2][0] = -(uc[1] * uc[2]) * t2;
                sc.fj[i][2][1] = uc[2] * t1;
                sc.fj[i][2][2] = uc[1] * t1;
                sc.fj[i][2][3] = 0.0;
                sc.fj[i][2][4] = 0.0;

                sc.fj[i][3][0] = -(uc[1] * uc[3]) * t2;
                sc.fj[i][3][1] = uc[3] * t1;
                sc.fj[i][3][2] = 0.0;
                sc.fj[i][3][3] = uc[1] * t1;
                sc.fj[i][3][4] = 0.0;

                sc.fj[i][4][0] = (cf.c2 * 2.0 * sqv - cf.c1 * uc[4]) * (uc[1] * t2);
                sc.fj[i][4][1] = cf.c1 * uc[4] * t1 -
                                 cf.c2 * (uc[1] * uc[1] * t2 + qsv);
                sc.fj[i][4][2] = -cf.c2 * (uc[2] * uc[1]) * t2;
                sc.fj[i][4][3] = -cf.c2 * (uc[3] * uc[1]) * t2;
                sc.fj[i][4][4] = cf.c1 * (uc[1] * t1);

                for (int n = 0; n < 5; n++)
                    sc.nj[i][0][n] = 0.0;

                sc.nj[i][1][0] = -cf.con43 * cf.c3c4 * t2 * uc[1];
                sc.nj[i][1][1] = cf.con43 * cf.c3c4 * t1;
                sc.nj[i][1][2] = 0.0;
                sc.nj[i][1][3] = 0.0;
                sc.nj[i][1][4] = 0.0;

                sc.nj[i][2][0] = -cf.c3c4 * t2 * uc[2];
                sc.nj[i][2][1] = 0.0;
                sc.nj[i][2][2] = cf.c3c4 * t1;
                sc.nj[i][2][3] = 0.0;
                sc.nj[i][2][4] = 0.0;

                sc.nj[i][3][0] = -cf.c3c4 * t2 * uc[3];
                sc.nj[i][3][1] = 0.0;
                sc.nj[i][3][2] = 0.0;
                sc.nj[i][3][3] = cf.c3c4 * t1;
                sc.nj[i][3][4] = 0.0;

                sc.nj[i][4][0] = -(cf.con43 * cf.c3c4 - cf.c1345) * t3 * (uc[1] * uc[1]) -
                                 (cf.c3c4 - cf.c1345) * t3 * (uc[2] * uc[2]) -
                                 (cf.c3c4 - cf.c1345) * t3 * (uc[3] * uc[3]) -
                                 cf.c1345 * t2 * uc[4];
                sc.nj[i][4][1] = (cf.con43 * cf.c3c4 - cf.c1345) * t2 * uc[1];
                sc.nj[i][4][2] = (cf.c3c4 - cf.c1345) * t2 * uc[2];
                sc.nj[i][4][3] = (cf.c3c4 - cf.c1345) * t2 * uc[3];
                sc.nj[i][4][4] = cf.c1345 * t1;
            }

            lhs_init(sc.lh, last);
            for (long i = 1; i < last; i++) {
                for (int m = 0; m < 5; m++)
                    for (int n = 0; n < 5; n++) {
                        sc.lh[i][0][m][n] = -cf.dttx2 * sc.fj[i - 1][m][n] -
                                            cf.dttx1 * sc.nj[i - 1][m][n];
                        sc.lh[i][1][m][n] = cf.dttx1 * 2.0 * sc.nj[i][m][n];
                        sc.lh[i][2][m][n] = cf.dttx2 * sc.fj[i + 1][m][n] -
                                            cf.dttx1 * sc.nj[i + 1][m][n];
                    }
                for (int m = 0; m < 5; m++) {
                    sc.lh[i][0][m][m] = sc.lh[i][0][m][m] - cf.dttx1 * dd[m];
                    sc.lh[i][1][m][m] = 1.0 + cf.dttx1 * 2.0 * sc.nj[i][m][m] +
                                        cf.dttx1 * 2.0 * dd[m];
                    sc.lh[i][2][m][m] = sc.lh[i][2][m][m] - cf.dttx1 * dd[m];
                }
            }

            // the rhs line is contiguous along i, solve it in place
            solve_line(&sc.lh[0][0][0][0],
                       &s.rhs[(std::size_t)(s.cell(k, j, 0) * 5)], last);
        }
    });
}

void y_solve(State& s, WorkerPool& pool)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    const Coeffs& cf = s.cf;
    const long last = ny - 1;
    const double dd[5] = {cf.dy1, cf.dy2, cf.dy3, cf.dy4, cf.dy5};

    std::vector<std::vector<double>> scratch((std::size_t)pool.workers());
    pool.par_map({1, nz - 1}, [&](long k) {
        SolveScratch sc =
            line_scratch(scratch[(std::size_t)WorkerPool::current_worker()], ny);
        for (long i = 1; i < nx - 1; i++) {
            for (long j = 0; j <= last; j++) {
                std::size_t c = (std::size_t)s.cell(k, j, i);
                const double* uc = &s.u[c * 5];
                double t1 = s.rho_i[c];
                double t2 = t1 * t1;
                double t3 = t1 * t2;
                double qsv = s.qs[c];
                double sqv = s.square[c];

                sc.fj[j][0][0] = 0.0;
                sc.fj[j][0][1] = 0.0;
                sc.fj[j][0][2] = 1.0;
                sc.fj[j][0][3] = 0.0;
                sc.fj[j][0][4] = 0.0;

                sc.fj[j][1][0] = -(uc[1] * uc[2]) * t2;
                sc.fj[j][1][1] = uc[2] * t1;
                sc.fj[j][1][2] = uc[1] * t1;
                sc.fj[j][1][3] = 0.0;
                sc.fj[j][1][4] = 0.0;

                sc.fj[j][2][0] = -(uc[2] * uc[2] * t2) + cf.c2 * qsv;
                sc.fj[j][2][1] = -cf.c2 * uc[1] * t1;
                sc.fj[j][2][2] = (2.0 - cf.c2) * uc[2] * t1;
                sc.fj[j][2][3] = -cf.c2 * uc[3] * t1;
                sc.fj[j][2][4] = cf.c2;

                sc.fj[j][3][0] = -(uc[2] * uc[3]) * t2;
                sc.fj[j][3][1] = 0.0;
                sc.fj[j][3][2] = uc[3] * t1;
                sc.fj[j][3][3] = uc[2] * t1;
                sc.fj[j][3][4] = 0.0;

                sc.fj[j][4][0] = (cf.c2 * 2.0 * sqv - cf.c1 * uc[4]) * uc[2] * t2;
                sc.fj[j][4][1] = -cf.c2 * uc[1] * uc[2] * t2;
                sc.fj[j][4][2] = cf.c1 * uc[4] * t1 -
                                 cf.c2 * (qsv + uc[2] * uc[2] * t2);
                sc.fj[j][4][3] = -cf.c2 * (uc[2] * uc[3]) * t2;
                sc.fj[j][4][4] = cf.c1 * uc[2] * t1;

                for (int n = 0; n < 5; n++)
                    sc.nj[j][0][n] = 0.0;

                sc.nj[j][1][0] = -cf.c3c4 * t2 * uc[1];
                sc.nj[j][1][1] = cf.c3c4 * t1;
                sc.nj[j][1][2] = 0.0;
                sc.nj[j][1][3] = 0.0;
                sc.nj[j][1][4] = 0.0;

                sc.nj[j][2][0] = -cf.con43 * cf.c3c4 * t2 * uc[2];
                sc.nj[j][2][1] = 0.0;
                sc.nj[j][2][2] = cf.con43 * cf.c3c4 * t1;
                sc.nj[j][2][3] = 0.0;
                sc.nj[j][2][4] = 0.0;

                sc.nj[j][3][0] = -cf.c3c4 * t2 * uc[3];
                sc.nj[j][3][1] = 0.0;
                sc.nj[j][3][2] = 0.0;
                sc.nj[j][3][3] = cf.c3c4 * t1;
                sc.nj[j][3][4] = 0.0;

                sc.nj[j][4][0] = -(cf.c3c4 - cf.c1345) * t3 * (uc[1] * uc[1]) -
                                 (cf.con43 * cf.c3c4 - cf.c1345) * t3 * (uc[2] * uc[2]) -
                                 (cf.c3c4 - cf.c1345) * t3 * (uc[3] * uc[3]) -
                                 cf.c1345 * t2 * uc[4];
                sc.nj[j][4][1] = (cf.c3c4 - cf.c1345) * t2 * uc[1];
                sc.nj[j][4][2] = (cf.con43 * cf.c3c4 - cf.c1345) * t2 * uc[2];
                sc.nj[j][4][3] = (cf.c3c4 - cf.c1345) * t2 * uc[3];
                sc.nj[j][4][4] = cf.c1345 * t1;
            }

            lhs_init(sc.lh, last);
            for (long j = 1; j < last; j++) {
                for (int m = 0; m < 5; m++)
                    for (int n = 0; n < 5; n++) {
                        sc.lh[j][0][m][n] = -cf.dtty2 * sc.fj[j - 1][m][n] -
                                            cf.dtty1 * sc.nj[j - 1][m][n];
                        sc.lh[j][1][m][n] = cf.dtty1 * 2.0 * sc.nj[j][m][n];
                        sc.lh[j][2][m][n] = cf.dtty2 * sc.fj[j + 1][m][n] -
                                            cf.dtty1 * sc.nj[j + 1][m][n];
                    }
                for (int m = 0; m < 5; m++) {
                    sc.lh[j][0][m][m] = sc.lh[j][0][m][m] - cf.dtty1 * dd[m];
                    sc.lh[j][1][m][m] = 1.0 + cf.dtty1 * 2.0 * sc.nj[j][m][m] +
                                        cf.dtty1 * 2.0 * dd[m];
                    sc.lh[j][2][m][m] = sc.lh[j][2][m][m] - cf.dtty1 * dd[m];
                }
            }

            for (long j = 0; j <= last; j++)
                for (int m = 0; m < 5; m++)
                    sc.r[j][m] = s.rhs[(std::size_t)(s.cell(k, j, i) * 5 + m)];
            solve_line(&sc.lh[0][0][0][0], &sc.r[0][0], last);
            for (long j = 0; j <= last; j++)
                for (int m = 0; m < 5; m++)
                    s.rhs[(std::size_t)(s.cell(k, j, i) * 5 + m)] = sc.r[j][m];
        }
    });
}

void z_solve(State& s, WorkerPool& pool)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    const Coeffs& cf = s.cf;
    const long last = nz - 1;
    const double dd[5] = {cf.dz1, cf.dz2, cf.dz3, cf.dz4, cf.dz5};

    std::vector<std::vector<double>> scratch((std::size_t)pool.workers());
    // the parallel index is j, the second storage dimension: every line
    // this task solves lives in the j-th xz slab of rhs, so distinct
    // tasks write disjoint cells
    pool.par_map_disjoint<std::vector<double>>(
        {1, ny - 1}, s.rhs, [&](long j, std::vector<double>& rhs) {
            SolveScratch sc = line_scratch(
                scratch[(std::size_t)WorkerPool::current_worker()], nz);
            for (long i = 1; i < nx - 1; i++) {
                for (long k = 0; k <= last; k++) {
                    std::size_t c = (std::size_t)s.cell(k, j, i);
                    const double* uc = &s.u[c * 5];
                    double t1 = s.rho_i[c];
                    double t2 = t1 * t1;
                    double t3 = t1 * t2;
                    double qsv = s.qs[c];
                    double sqv = s.square[c];

                    sc.fj[k][0][0] = 0.0;
                    sc.fj[k][0][1] = 0.0;
                    sc.fj[k][0][2] = 0.0;
                    sc.fj[k][0][3] = 1.0;
                    sc.fj[k][0][4] = 0.0;

                    sc.fj[k][1][0] = -(uc[1] * uc[3]) * t2;
                    sc.fj[k][1][1] = uc[3] * t1;
                    sc.fj[k][1][2] = 0.0;
                    sc.fj[k][1][3] = uc[1] * t1;
                    sc.fj[k][1][4] = 0.0;

                    sc.fj[k][2][0] = -(uc[2] * uc[3]) * t2;
                    sc.fj[k][2][1] = 0.0;
                    sc.fj[k][2][2] = uc[3] * t1;
                    sc.fj[k][2][3] = uc[2] * t1;
                    sc.fj[k][2][4] = 0.0;

                    sc.fj[k][3][0] = -(uc[3] * uc[3] * t2) + cf.c2 * qsv;
                    sc.fj[k][3][1] = -cf.c2 * uc[1] * t1;
                    sc.fj[k][3][2] = -cf.c2 * uc[2] * t1;
                    sc.fj[k][3][3] = (2.0 - cf.c2) * uc[3] * t1;
                    sc.fj[k][3][4] = cf.c2;

                    sc.fj[k][4][0] = (cf.c2 * 2.0 * sqv - cf.c1 * uc[4]) * uc[3] * t2;
                    sc.fj[k][4][1] = -cf.c2 * (uc[1] * uc[3]) * t2;
                    sc.fj[k][4][2] = -cf.c2 * (uc[2] * uc[3]) * t2;
                    sc.fj[k][4][3] = cf.c1 * (uc[4] * t1) -
                                     cf.c2 * (qsv + uc[3] * uc[3] * t2);
                    sc.fj[k][4][4] = cf.c1 * uc[3] * t1;

                    for (int n = 0; n < 5; n++)
                        sc.nj[k][0][n] = 0.0;

                    sc.nj[k][1][0] = -cf.c3c4 * t2 * uc[1];
                    sc.nj[k][1][1] = cf.c3c4 * t1;
                    sc.nj[k][1][2] = 0.0;
                    sc.nj[k][1][3] = 0.0;
                    sc.nj[k][1][4] = 0.0;

                    sc.nj[k][2][0] = -cf.c3c4 * t2 * uc[2];
                    sc.nj[k][2][1] = 0.0;
                    sc.nj[k][2][2] = cf.c3c4 * t1;
                    sc.nj[k][2][3] = 0.0;
                    sc.nj[k][2][4] = 0.0;

                    sc.nj[k][3][0] = -cf.con43 * cf.c3c4 * t2 * uc[3];
                    sc.nj[k][3][1] = 0.0;
                    sc.nj[k][3][2] = 0.0;
                    sc.nj[k][3][3] = cf.con43 * cf.c3c4 * t1;
                    sc.nj[k][3][4] = 0.0;

                    sc.nj[k][4][0] = -(cf.c3c4 - cf.c1345) * t3 * (uc[1] * uc[1]) -
                                     (cf.c3c4 - cf.c1345) * t3 * (uc[2] * uc[2]) -
                                     (cf.con43 * cf.c3c4 - cf.c1345) * t3 * (uc[3] * uc[3]) -
                                     cf.c1345 * t2 * uc[4];
                    sc.nj[k][4][1] = (cf.c3c4 - cf.c1345) * t2 * uc[1];
                    sc.nj[k][4][2] = (cf.c3c4 - cf.c1345) * t2 * uc[2];
                    sc.nj[k][4][3] = (cf.con43 * cf.c3c4 - cf.c1345) * t2 * uc[3];
                    sc.nj[k][4][4] = cf.c1345 * t1;
                }

                lhs_init(sc.lh, last);
                for (long k = 1; k < last; k++) {
                    for (int m = 0; m < 5; m++)
                        for (int n = 0; n < 5; n++) {
                            sc.lh[k][0][m][n] = -cf.dttz2 * sc.fj[k - 1][m][n] -
                                                cf.dttz1 * sc.nj[k - 1][m][n];
                            sc.lh[k][1][m][n] = cf.dttz1 * 2.0 * sc.nj[k][m][n];
                            sc.lh[k][2][m][n] = cf.dttz2 * sc.fj[k + 1][m][n] -
                                                cf.dttz1 * sc.nj[k + 1][m][n];
                        }
                    for (int m = 0; m < 5; m++) {
                        sc.lh[k][0][m][m] = sc.lh[k][0][m][m] - cf.dttz1 * dd[m];
                        sc.lh[k][1][m][m] = 1.0 + cf.dttz1 * 2.0 * sc.nj[k][m][m] +
                                            cf.dttz1 * 2.0 * dd[m];
                        sc.lh[k][2][m][m] = sc.lh[k][2][m][m] - cf.dttz1 * dd[m];
                    }
                }

                for (long k = 0; k <= last; k++)
                    for (int m = 0; m < 5; m++)
                        sc.r[k][m] = rhs[(std::size_t)(s.cell(k, j, i) * 5 + m)];
                solve_line(&sc.lh[0][0][0][0], &sc.r[0][0], last);
                for (long k = 0; k <= last; k++)
                    for (int m = 0; m < 5; m++)
                        rhs[(std::size_t)(s.cell(k, j, i) * 5 + m)] = sc.r[k][m];
            }
        });
}

void add(State& s, WorkerPool& pool)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    pool.par_map({1, nz - 1}, [&](long k) {
        for (long j = 1; j < ny - 1; j++) {
            double* up = &s.u[(std::size_t)(s.cell(k, j, 1) * 5)];
            const double* rp = &s.rhs[(std::size_t)(s.cell(k, j, 1) * 5)];
            for (long t = 0; t < (nx - 2) * 5; t++)
                up[t] += rp[t];
        }
    });
}

void adi(State& s, WorkerPool& pool)
{
    compute_rhs(s, pool);
    x_solve(s, pool);
    y_solve(s, pool);
    z_solve(s, pool);
    add(s, pool);
}

std::array<double, 5> error_norm(const State& s)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    const Coeffs& cf = s.cf;
    std::array<double, 5> rms{};

    for (long k = 0; k < nz; k++) {
        double zeta = (double)k * cf.dnzm1;
        for (long j = 0; j < ny; j++) {
            double eta = (double)j * cf.dnym1;
            for (long i = 0; i < nx; i++) {
                double xi = (double)i * cf.dnxm1;
                double ue[5];
                exact_solution(xi, eta, zeta, ue);
                const double* uc = &s.u[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++) {
                    double d = uc[m] - ue[m];
                    rms[(std::size_t)m] += d * d;
                }
            }
        }
    }
    for (int m = 0; m < 5; m++) {
        rms[(std::size_t)m] /= (double)(nx - 2);
        rms[(std::size_t)m] /= (double)(ny - 2);
        rms[(std::size_t)m] /= (double)(nz - 2);
        rms[(std::size_t)m] = std::sqrt(rms[(std::size_t)m]);
    }
    return rms;
}

std::array<double, 5> rhs_norm(const State& s)
{
    const long nx = s.nx, ny = s.ny, nz = s.nz;
    std::array<double, 5> rms{};

    for (long k = 1; k < nz - 1; k++)
        for (long j = 1; j < ny - 1; j++)
            for (long i = 1; i < nx - 1; i++) {
                const double* r = &s.rhs[(std::size_t)(s.cell(k, j, i) * 5)];
                for (int m = 0; m < 5; m++)
                    rms[(std::size_t)m] += r[m] * r[m];
            }
    for (int m = 0; m < 5; m++) {
        rms[(std::size_t)m] /= (double)(nx - 2);
        rms[(std::size_t)m] /= (double)(ny - 2);
        rms[(std::size_t)m] /= (double)(nz - 2);
        rms[(std::size_t)m] = std::sqrt(rms[(std::size_t)m]);
    }
    return rms;
}

bool verify_norms(const std::array<double, 5>& xcr,
                  const std::array<double, 5>& xce, double dt, const Params& p)
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
    return true;
}

BenchmarkResult run(ProblemClass cls, WorkerPool& pool, bool safe_mode)
{
    const Params prm = params_for(cls);
    State s(prm.nx, prm.ny, prm.nz, prm.dt);

    initialize(s, pool);
    exact_rhs(s, pool);

    // one untimed step touches every code path, then start over
    adi(s, pool);
    initialize(s, pool);

    TimerSet timers;
    timers.start(0);
    for (int step = 1; step <= prm.niter; step++)
        adi(s, pool);
    timers.stop(0);

    std::array<double, 5> xce = error_norm(s);
    compute_rhs(s, pool);
    std::array<double, 5> xcr = rhs_norm(s);
    for (int m = 0; m < 5; m++)
        xcr[(std::size_t)m] /= prm.dt;

    double t = timers.read(0);
    double n3 = (double)prm.nx * prm.ny * prm.nz;
    double navg = (prm.nx + prm.ny + prm.nz) / 3.0;

    BenchmarkResult res;
    res.name = "BT";
    res.cls = cls;
    char size[48];
    std::snprintf(size, sizeof(size), "%dx%dx%d", prm.nx, prm.ny, prm.nz);
    res.size = size;
    res.iterations = prm.niter;
    res.seconds = t;
    res.mflops = t > 0.0 ? 1.0e-6 * (double)prm.niter *
                               (3478.8 * n3 - 17655.7 * navg * navg +
                                28023.7 * navg) / t
                         : 0.0;
    res.verified = verify_norms(xcr, xce, prm.dt, prm);
    res.workers = pool.workers();
    res.safe_mode = safe_mode;
    return res;
}

} // namespace npb::bt

#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "npb/bt.hpp"

using namespace npb;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b)
{
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bt::State fresh_state(WorkerPool& pool)
{
    bt::Params p = bt::params_for(ProblemClass::S);
    bt::State s(p.nx, p.ny, p.nz, p.dt);
    bt::initialize(s, pool);
    bt::exact_rhs(s, pool);
    return s;
}

} // namespace

TEST_CASE("bt initialize pins the faces and blends the interior")
{
    bt::Params p = bt::params_for(ProblemClass::S);
    WorkerPool pool({2, 0});
    bt::State s(p.nx, p.ny, p.nz, p.dt);
    bt::initialize(s, pool);

    const long n = p.nx;
    double ex[5];
    for (long q = 0; q < n; q++) {
        double zeta = (double)q * s.cf.dnzm1;
        double eta = (double)q * s.cf.dnym1;
        for (long r = 0; r < n; r++) {
            double xi = (double)r * s.cf.dnxm1;
            double etar = (double)r * s.cf.dnym1;

            bt::exact_solution(0.0, etar, zeta, ex);
            CHECK(std::memcmp(&s.u[(std::size_t)(s.cell(q, r, 0) * 5)], ex,
                              sizeof ex) == 0);
            bt::exact_solution(1.0, etar, zeta, ex);
            CHECK(std::memcmp(&s.u[(std::size_t)(s.cell(q, r, n - 1) * 5)], ex,
                              sizeof ex) == 0);
            bt::exact_solution(xi, 0.0, zeta, ex);
            CHECK(std::memcmp(&s.u[(std::size_t)(s.cell(q, 0, r) * 5)], ex,
                              sizeof ex) == 0);
            bt::exact_solution(xi, 1.0, zeta, ex);
            CHECK(std::memcmp(&s.u[(std::size_t)(s.cell(q, n - 1, r) * 5)], ex,
                              sizeof ex) == 0);
            bt::exact_solution(xi, eta, 0.0, ex);
            CHECK(std::memcmp(&s.u[(std::size_t)(s.cell(0, q, r) * 5)], ex,
                              sizeof ex) == 0);
            bt::exact_solution(xi, eta, 1.0, ex);
            CHECK(std::memcmp(&s.u[(std::size_t)(s.cell(n - 1, q, r) * 5)], ex,
                              sizeof ex) == 0);
        }
    }

    // one interior point recomputed with the same blend arithmetic
    long k = 3, j = 5, i = 7;
    double xi = (double)i * s.cf.dnxm1;
    double eta = (double)j * s.cf.dnym1;
    double zeta = (double)k * s.cf.dnzm1;
    double pf[2][3][5];
    for (int d = 0; d < 2; d++) {
        bt::exact_solution((double)d, eta, zeta, pf[d][0]);
        bt::exact_solution(xi, (double)d, zeta, pf[d][1]);
        bt::exact_solution(xi, eta, (double)d, pf[d][2]);
    }
    for (int m = 0; m < 5; m++) {
        double pxi = xi * pf[1][0][m] + (1.0 - xi) * pf[0][0][m];
        double peta = eta * pf[1][1][m] + (1.0 - eta) * pf[0][1][m];
        double pzeta = zeta * pf[1][2][m] + (1.0 - zeta) * pf[0][2][m];
        double want = pxi + peta + pzeta - pxi * peta - pxi * pzeta -
                      peta * pzeta + pxi * peta * pzeta;
        CHECK(s.u[(std::size_t)(s.cell(k, j, i) * 5 + m)] == want);
    }
}

TEST_CASE("bt residual vanishes on the exact flow field")
{
    // forcing is defined as minus the discrete operator applied to the
    // exact solution, so with u set to that field compute_rhs must
    // return numerical noise only
    bt::Params p = bt::params_for(ProblemClass::S);
    WorkerPool pool({2, 0});
    bt::State s(p.nx, p.ny, p.nz, p.dt);
    bt::initialize(s, pool);
    bt::exact_rhs(s, pool);

    double ex[5];
    for (long k = 0; k < p.nz; k++)
        for (long j = 0; j < p.ny; j++)
            for (long i = 0; i < p.nx; i++) {
                bt::exact_solution((double)i * s.cf.dnxm1,
                                   (double)j * s.cf.dnym1,
                                   (double)k * s.cf.dnzm1, ex);
                std::memcpy(&s.u[(std::size_t)(s.cell(k, j, i) * 5)], ex,
                            sizeof ex);
            }
    bt::compute_rhs(s, pool);

    double worst = 0.0;
    for (long k = 1; k < p.nz - 1; k++)
        for (long j = 1; j < p.ny - 1; j++)
            for (long i = 1; i < p.nx - 1; i++)
                for (int m = 0; m < 5; m++)
                    worst = std::max(worst,
                                     std::fabs(s.rhs[(std::size_t)(
                                         s.cell(k, j, i) * 5 + m)]));
    CHECK(worst <= 1.0e-12);
}

TEST_CASE("bt solve_line inverts a random diagonally dominant system")
{
    const long last = 11;
    const long cells = last + 1;
    std::mt19937 gen(1234);
    std::uniform_real_distribution<double> fuzz(-0.1, 0.1);

    // blocks per cell in [sub, diag, super] order
    std::vector<double> lhs((std::size_t)(cells * 75), 0.0);
    auto blk = [&](long c, int b) {
        return &lhs[(std::size_t)(c * 75 + b * 25)];
    };
    for (int m = 0; m < 5; m++) {
        blk(0, 1)[m * 5 + m] = 1.0;
        blk(last, 1)[m * 5 + m] = 1.0;
    }
    for (long c = 1; c < last; c++)
        for (int b = 0; b < 3; b++)
            for (int e = 0; e < 25; e++) {
                double v = fuzz(gen);
                if (b == 1 && e % 6 == 0)
                    v += 4.0; // dominant diagonal
                blk(c, b)[e] = v;
            }

    std::vector<double> x((std::size_t)(cells * 5));
    for (auto& v : x)
        v = fuzz(gen) * 10.0;

    // r = A x with the boundary rows acting as identities
    std::vector<double> r((std::size_t)(cells * 5), 0.0);
    for (int m = 0; m < 5; m++) {
        r[(std::size_t)m] = x[(std::size_t)m];
        r[(std::size_t)(last * 5 + m)] = x[(std::size_t)(last * 5 + m)];
    }
    for (long c = 1; c < last; c++)
        for (int m = 0; m < 5; m++) {
            double acc = 0.0;
            for (int n = 0; n < 5; n++) {
                acc += blk(c, 0)[m * 5 + n] * x[(std::size_t)((c - 1) * 5 + n)];
                acc += blk(c, 1)[m * 5 + n] * x[(std::size_t)(c * 5 + n)];
                acc += blk(c, 2)[m * 5 + n] * x[(std::size_t)((c + 1) * 5 + n)];
            }
            r[(std::size_t)(c * 5 + m)] = acc;
        }

    bt::solve_line(lhs.data(), r.data(), last);
    for (std::size_t t = 0; t < r.size(); t++)
        CHECK(std::fabs(r[t] - x[t]) <= 1.0e-10);
}

TEST_CASE("bt solve_line with identity blocks is a no-op on the rhs")
{
    const long last = 7;
    const long cells = last + 1;
    std::vector<double> lhs((std::size_t)(cells * 75), 0.0);
    for (long c = 0; c < cells; c++)
        for (int m = 0; m < 5; m++)
            lhs[(std::size_t)(c * 75 + 25 + m * 5 + m)] = 1.0;

    std::vector<double> r((std::size_t)(cells * 5));
    std::mt19937 gen(77);
    std::uniform_real_distribution<double> fuzz(-1.0, 1.0);
    for (auto& v : r)
        v = fuzz(gen);
    std::vector<double> want = r;

    bt::solve_line(lhs.data(), r.data(), last);
    CHECK(same_bits(r, want));
}

TEST_CASE("bt add leaves u alone when rhs is zero")
{
    WorkerPool pool({2, 0});
    bt::State s = fresh_state(pool);
    std::fill(s.rhs.begin(), s.rhs.end(), 0.0);
    std::vector<double> before = s.u;
    bt::add(s, pool);
    CHECK(same_bits(s.u, before));
}

TEST_CASE("bt verify_norms applies the pinned tolerances")
{
    bt::Params p = bt::params_for(ProblemClass::S);
    CHECK(bt::verify_norms(p.xcr_ref, p.xce_ref, p.dt_ref, p));

    auto xcr = p.xcr_ref;
    xcr[3] *= 1.01;
    CHECK_FALSE(bt::verify_norms(xcr, p.xce_ref, p.dt_ref, p));

    auto xce = p.xce_ref;
    xce[0] *= 1.01;
    CHECK_FALSE(bt::verify_norms(p.xcr_ref, xce, p.dt_ref, p));

    CHECK_FALSE(bt::verify_norms(p.xcr_ref, p.xce_ref, p.dt_ref + 1.0e-6, p));
}

TEST_CASE("bt timestep fields are bit-identical across worker counts")
{
    WorkerPool p1({1, 0});
    bt::State base = fresh_state(p1);
    for (int t = 0; t < 3; t++)
        bt::adi(base, p1);

    for (int workers : {2, 5}) {
        WorkerPool pn({workers, 0});
        bt::State s = fresh_state(pn);
        for (int t = 0; t < 3; t++)
            bt::adi(s, pn);
        CHECK(same_bits(s.u, base.u));
        CHECK(same_bits(s.rhs, base.rhs));
    }
}

TEST_CASE("bt class S verifies in both modes")
{
    for (bool safe : {true, false}) {
        WorkerPool pool({2, 0});
        BenchmarkResult res = bt::run(ProblemClass::S, pool, safe);
        CHECK(res.verified);
        CHECK(res.name == "BT");
        CHECK(res.size == "12x12x12");
        CHECK(res.iterations == 60);
        CHECK(res.workers == 2);
        CHECK(res.safe_mode == safe);
    }
}

#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "npb/sp.hpp"

using namespace npb;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b)
{
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

sp::State fresh_state(WorkerPool& pool)
{
    sp::Params p = sp::params_for(ProblemClass::S);
    sp::State s(p.nx, p.ny, p.nz, p.dt);
    sp::initialize(s, pool);
    sp::exact_rhs(s, pool);
    return s;
}

// dense Gaussian elimination with partial pivoting, the oracle for the
// banded solver
std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b,
                                long n)
{
    for (long p = 0; p < n; p++) {
        long piv = p;
        for (long i = p + 1; i < n; i++)
            if (std::fabs(a[(std::size_t)(i * n + p)]) >
                std::fabs(a[(std::size_t)(piv * n + p)]))
                piv = i;
        if (piv != p) {
            for (long c = 0; c < n; c++)
                std::swap(a[(std::size_t)(p * n + c)], a[(std::size_t)(piv * n + c)]);
            std::swap(b[(std::size_t)p], b[(std::size_t)piv]);
        }
        for (long i = p + 1; i < n; i++) {
            double f = a[(std::size_t)(i * n + p)] / a[(std::size_t)(p * n + p)];
            for (long c = p; c < n; c++)
                a[(std::size_t)(i * n + c)] -= f * a[(std::size_t)(p * n + c)];
            b[(std::size_t)i] -= f * b[(std::size_t)p];
        }
    }
    std::vector<double> x((std::size_t)n, 0.0);
    for (long i = n - 1; i >= 0; i--) {
        double acc = b[(std::size_t)i];
        for (long c = i + 1; c < n; c++)
            acc -= a[(std::size_t)(i * n + c)] * x[(std::size_t)c];
        x[(std::size_t)i] = acc / a[(std::size_t)(i * n + i)];
    }
    return x;
}

std::vector<double> band_to_dense(const double (*band)[5], long n)
{
    std::vector<double> a((std::size_t)(n * n), 0.0);
    for (long i = 0; i < n; i++)
        for (int b = 0; b < 5; b++) {
            long c = i + b - 2;
            if (c >= 0 && c < n)
                a[(std::size_t)(i * n + c)] = band[i][b];
        }
    return a;
}

} // namespace

TEST_CASE("sp residual vanishes on the exact flow field")
{
    sp::Params p = sp::params_for(ProblemClass::S);
    WorkerPool pool({2, 0});
    sp::State s(p.nx, p.ny, p.nz, p.dt);
    sp::initialize(s, pool);
    sp::exact_rhs(s, pool);

    for (long k = 0; k < p.nz; k++) {
        double zeta = (double)k * s.cf.dnzm1;
        for (long j = 0; j < p.ny; j++) {
            double eta = (double)j * s.cf.dnym1;
            for (long i = 0; i < p.nx; i++) {
                double xi = (double)i * s.cf.dnxm1;
                sp::exact_solution(xi, eta, zeta,
                                   &s.u[(std::size_t)(s.cell(k, j, i) * 5)]);
            }
        }
    }
    sp::compute_rhs(s, pool);

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

TEST_CASE("sp transform chain multiplies out to the identity")
{
    WorkerPool pool({2, 0});
    sp::State s = fresh_state(pool);
    sp::compute_rhs(s, pool); // fills the auxiliary fields from u

    std::mt19937 gen(4242);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (long k = 1; k < s.nz - 1; k++)
        for (long j = 1; j < s.ny - 1; j++)
            for (long i = 1; i < s.nx - 1; i++)
                for (int m = 0; m < 5; m++)
                    s.rhs[(std::size_t)(s.cell(k, j, i) * 5 + m)] = dist(gen);
    std::vector<double> before = s.rhs;

    // no solves in between, so the four basis changes must cancel
    sp::txinvr(s, pool);
    sp::ninvr(s, pool);
    sp::pinvr(s, pool);
    sp::tzetar(s, pool);

    double worst = 0.0;
    for (std::size_t t = 0; t < s.rhs.size(); t++)
        worst = std::max(worst, std::fabs(s.rhs[t] - before[t]));
    CHECK(worst <= 1.0e-12);

    // and they are linear in rhs: zero stays exactly zero
    std::fill(s.rhs.begin(), s.rhs.end(), 0.0);
    sp::txinvr(s, pool);
    sp::ninvr(s, pool);
    sp::pinvr(s, pool);
    sp::tzetar(s, pool);
    for (double v : s.rhs)
        CHECK(v == 0.0);
}

TEST_CASE("sp solve_line with identity bands is a no-op on the rhs")
{
    const long n = 16;
    std::vector<double> lhs((std::size_t)(n * 5), 0.0);
    std::vector<double> lhsp((std::size_t)(n * 5), 0.0);
    std::vector<double> lhsm((std::size_t)(n * 5), 0.0);
    for (long i = 0; i < n; i++)
        lhs[(std::size_t)(i * 5 + 2)] = lhsp[(std::size_t)(i * 5 + 2)] =
            lhsm[(std::size_t)(i * 5 + 2)] = 1.0;

    std::mt19937 gen(99);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> r((std::size_t)(n * 5));
    for (double& v : r)
        v = dist(gen);
    std::vector<double> before = r;

    sp::solve_line(lhs.data(), lhsp.data(), lhsm.data(), r.data(), n - 1);
    CHECK(same_bits(r, before));
}

TEST_CASE("sp solve_line matches a dense solve on a random line")
{
    const long n = 16;
    std::mt19937 gen(1234);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);

    // random bands, diagonally dominant, identity rows at the line ends
    auto random_band = [&](std::vector<double>& b) {
        b.assign((std::size_t)(n * 5), 0.0);
        for (long i = 1; i < n - 1; i++) {
            double off = 0.0;
            for (int c = 0; c < 5; c++) {
                if (c == 2)
                    continue;
                b[(std::size_t)(i * 5 + c)] = dist(gen);
                off += std::fabs(b[(std::size_t)(i * 5 + c)]);
            }
            b[(std::size_t)(i * 5 + 2)] = 1.0 + off;
        }
        b[2] = 1.0;
        b[(std::size_t)((n - 1) * 5 + 2)] = 1.0;
    };
    std::vector<double> lhs, lhsp, lhsm;
    random_band(lhs);
    random_band(lhsp);
    random_band(lhsm);

    std::vector<double> r((std::size_t)(n * 5));
    for (double& v : r)
        v = dist(gen);

    // dense oracle per component, from copies of the bands
    auto lhs_rows = reinterpret_cast<const double(*)[5]>(lhs.data());
    auto lhsp_rows = reinterpret_cast<const double(*)[5]>(lhsp.data());
    auto lhsm_rows = reinterpret_cast<const double(*)[5]>(lhsm.data());
    std::vector<std::vector<double>> expect(5);
    for (int m = 0; m < 5; m++) {
        const double(*rows)[5] = m < 3 ? lhs_rows : (m == 3 ? lhsp_rows : lhsm_rows);
        std::vector<double> b((std::size_t)n);
        for (long i = 0; i < n; i++)
            b[(std::size_t)i] = r[(std::size_t)(i * 5 + m)];
        expect[(std::size_t)m] = dense_solve(band_to_dense(rows, n), b, n);
    }

    sp::solve_line(lhs.data(), lhsp.data(), lhsm.data(), r.data(), n - 1);

    for (int m = 0; m < 5; m++)
        for (long i = 0; i < n; i++)
            CHECK(std::fabs(r[(std::size_t)(i * 5 + m)] -
                            expect[(std::size_t)m][(std::size_t)i]) <= 1.0e-10);
}

TEST_CASE("sp timestep fields are bit-identical across worker counts")
{
    std::vector<double> u1, rhs1;
    for (int workers : {1, 2, 5}) {
        WorkerPool pool({workers, 0});
        sp::State s = fresh_state(pool);
        for (int step = 0; step < 3; step++)
            sp::adi(s, pool);
        if (workers == 1) {
            u1 = s.u;
            rhs1 = s.rhs;
        } else {
            CHECK(same_bits(s.u, u1));
            CHECK(same_bits(s.rhs, rhs1));
        }
    }
}

TEST_CASE("sp class S verifies in both modes")
{
    WorkerPool pool({2, 0});
    for (bool safe : {false, true}) {
        BenchmarkResult r = sp::run(ProblemClass::S, pool, safe);
        CHECK(r.verified);
        CHECK(r.name == "SP");
        CHECK(r.size == "12x12x12");
        CHECK(r.iterations == 100);
        CHECK(r.workers == 2);
        CHECK(r.safe_mode == safe);
    }
}

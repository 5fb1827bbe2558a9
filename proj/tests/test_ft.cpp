#include <doctest.h>

#include <cmath>
#include <vector>

#include "npb/ft.hpp"
#include "npb/rng.hpp"

using namespace npb;

namespace {

constexpr double kPi = 3.141592653589793238;

std::vector<Complex> random_grid(int nx, int ny, int nz)
{
    std::vector<Complex> g((std::size_t)nx * ny * nz);
    WorkerPool pool({1, 0});
    ft::compute_initial_conditions(g.data(), nx, ny, nz, pool);
    return g;
}

// brute-force DFT with explicitly summed exponentials; dir follows
// the transform convention (+1 positive exponent, unnormalized)
std::vector<Complex> naive_dft3(const std::vector<Complex>& in, int nx,
                                int ny, int nz, int dir)
{
    std::vector<Complex> out((std::size_t)nx * ny * nz);
    for (int kz = 0; kz < nz; kz++)
        for (int ky = 0; ky < ny; ky++)
            for (int kx = 0; kx < nx; kx++) {
                Complex acc{0.0, 0.0};
                for (int z = 0; z < nz; z++)
                    for (int y = 0; y < ny; y++)
                        for (int x = 0; x < nx; x++) {
                            double ang = 2.0 * kPi * dir *
                                         ((double)x * kx / nx +
                                          (double)y * ky / ny +
                                          (double)z * kz / nz);
                            Complex w{std::cos(ang), std::sin(ang)};
                            acc = acc + w * in[((std::size_t)z * ny + y) * nx + x];
                        }
                out[((std::size_t)kz * ny + ky) * nx + kx] = acc;
            }
    return out;
}

double max_abs(const std::vector<Complex>& v)
{
    double m = 0.0;
    for (const auto& c : v)
        m = std::max(m, std::sqrt(cabs2(c)));
    return m;
}

} // namespace

TEST_CASE("ft index folding maps 0..n-1 onto signed frequencies")
{
    // for n = 8 the fold must give 0 1 2 3 -4 -3 -2 -1
    const int expect[8] = {0, 1, 2, 3, -4, -3, -2, -1};
    for (int i = 0; i < 8; i++)
        CHECK(((i + 4) % 8) - 4 == expect[i]);

    // twiddle array agrees with a serial triple loop bit for bit
    int nx = 8, ny = 4, nz = 16;
    std::vector<double> tw((std::size_t)nx * ny * nz);
    WorkerPool pool({3, 0});
    ft::compute_indexmap(tw.data(), nx, ny, nz, pool);

    const double ap = -4.0e-6 * kPi * kPi;
    long diff = 0;
    for (int k = 0; k < nz; k++)
        for (int j = 0; j < ny; j++)
            for (int i = 0; i < nx; i++) {
                long ii = ((i + nx / 2) % nx) - nx / 2;
                long jj = ((j + ny / 2) % ny) - ny / 2;
                long kk = ((k + nz / 2) % nz) - nz / 2;
                double want = std::exp(ap * (double)(ii * ii + jj * jj + kk * kk));
                if (tw[((std::size_t)k * ny + j) * nx + i] != want)
                    diff++;
            }
    CHECK(diff == 0);
}

TEST_CASE("ft initial conditions equal one sequential stream fill")
{
    int nx = 32, ny = 8, nz = 16;
    long n = (long)nx * ny * nz;

    // per-plane jumps, parallel
    std::vector<Complex> par((std::size_t)n);
    WorkerPool pool({4, 0});
    ft::compute_initial_conditions(par.data(), nx, ny, nz, pool);

    // one stream straight through, no jumps
    std::vector<Complex> ser((std::size_t)n);
    RandomStream stream;
    stream.x = 314159265.0;
    stream.fill(2 * n, reinterpret_cast<double*>(ser.data()));

    long diff = 0;
    for (long i = 0; i < n; i++)
        if (par[(std::size_t)i].re != ser[(std::size_t)i].re ||
            par[(std::size_t)i].im != ser[(std::size_t)i].im)
            diff++;
    CHECK(diff == 0);
}

TEST_CASE("ft roots-of-unity table")
{
    auto u = ft::fft_init(8);
    REQUIRE(u.size() == 8);
    CHECK(u[0].re == 3.0);
    CHECK(u[1].re == 1.0);
    CHECK(u[1].im == 0.0);
    CHECK(u[3].re == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(u[3].im == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(u[5].re == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(u[5].im == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("ft forward transform matches the naive DFT on an 8x8x8 grid")
{
    int n1 = 8;
    auto x = random_grid(n1, n1, n1);
    auto want = naive_dft3(x, n1, n1, n1, +1);

    auto u = ft::fft_init(n1);
    WorkerPool pool({2, 0});
    std::vector<Complex> work = x, got(x.size());
    ft::fft3d(1, u, work.data(), got.data(), n1, n1, n1, pool, false);

    double scale = max_abs(want);
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); i++)
        worst = std::max(worst, std::sqrt(cabs2(got[i] - want[i])));
    CHECK(worst / scale <= 1e-10);
}

TEST_CASE("ft inverse transform matches the conjugate naive DFT")
{
    int n1 = 8;
    auto x = random_grid(n1, n1, n1);
    auto want = naive_dft3(x, n1, n1, n1, -1);

    auto u = ft::fft_init(n1);
    WorkerPool pool({2, 0});
    std::vector<Complex> work = x, got(x.size());
    ft::fft3d(-1, u, work.data(), got.data(), n1, n1, n1, pool, false);

    double scale = max_abs(want);
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); i++)
        worst = std::max(worst, std::sqrt(cabs2(got[i] - want[i])));
    CHECK(worst / scale <= 1e-10);
}

TEST_CASE("ft round trip reproduces the input after dividing by N")
{
    int nx = 16, ny = 8, nz = 8;
    long n = (long)nx * ny * nz;
    auto x = random_grid(nx, ny, nz);

    auto u = ft::fft_init(nx);
    WorkerPool pool({3, 0});
    std::vector<Complex> work = x, freq(x.size()), back(x.size());
    ft::fft3d(1, u, work.data(), freq.data(), nx, ny, nz, pool, false);
    ft::fft3d(-1, u, freq.data(), back.data(), nx, ny, nz, pool, false);

    double worst = 0.0;
    for (long i = 0; i < n; i++) {
        Complex scaled{back[(std::size_t)i].re / n, back[(std::size_t)i].im / n};
        worst = std::max(worst, std::sqrt(cabs2(scaled - x[(std::size_t)i])));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("ft transform preserves energy up to the N factor")
{
    int n1 = 8;
    auto x = random_grid(n1, n1, n1);
    long n = (long)n1 * n1 * n1;

    auto u = ft::fft_init(n1);
    WorkerPool pool({2, 0});
    std::vector<Complex> work = x, freq(x.size());
    ft::fft3d(1, u, work.data(), freq.data(), n1, n1, n1, pool, false);

    double ein = 0.0, eout = 0.0;
    for (long i = 0; i < n; i++) {
        ein += cabs2(x[(std::size_t)i]);
        eout += cabs2(freq[(std::size_t)i]);
    }
    CHECK(std::fabs(eout - n * ein) / (n * ein) <= 1e-10);
}

TEST_CASE("ft transform output is bit-identical across worker counts and modes")
{
    int nx = 32, ny = 16, nz = 8;
    auto x = random_grid(nx, ny, nz);
    auto u = ft::fft_init(32);

    std::vector<Complex> baseline;
    for (int workers : {1, 2, 5}) {
        for (bool safe : {false, true}) {
            WorkerPool pool({workers, 0});
            std::vector<Complex> work = x, out(x.size());
            ft::fft3d(1, u, work.data(), out.data(), nx, ny, nz, pool, safe);
            if (baseline.empty()) {
                baseline = out;
                continue;
            }
            long diff = 0;
            for (std::size_t i = 0; i < out.size(); i++)
                if (out[i].re != baseline[i].re || out[i].im != baseline[i].im)
                    diff++;
            CAPTURE(workers);
            CAPTURE(safe);
            CHECK(diff == 0);
        }
    }
}

TEST_CASE("ft checksum probes the expected cells")
{
    int n1 = 8;
    std::vector<Complex> g((std::size_t)n1 * n1 * n1, Complex{0.0, 0.0});
    // j = 1 mod 8 hits cell (1, 3, 5); that is 128 of the 1024 probes
    g[(5 * 8 + 3) * 8 + 1] = {2.0, -1.0};
    Complex c = ft::checksum(g.data(), n1, n1, n1);
    CHECK(c.re == 128.0 * 2.0 / 512.0);
    CHECK(c.im == 128.0 * -1.0 / 512.0);
}

TEST_CASE("ft evolve applies the twiddle cumulatively")
{
    WorkerPool pool({2, 0});
    std::vector<Complex> u0 = {{1.0, 2.0}, {3.0, -4.0}};
    std::vector<Complex> u1(2);
    std::vector<double> tw = {0.5, 2.0};

    ft::evolve(u0.data(), u1.data(), tw.data(), 2, pool);
    CHECK(u0[0].re == 0.5);
    CHECK(u0[0].im == 1.0);
    CHECK(u1[1].re == 6.0);
    CHECK(u1[1].im == -8.0);

    ft::evolve(u0.data(), u1.data(), tw.data(), 2, pool);
    CHECK(u0[0].re == 0.25);
    CHECK(u1[1].re == 12.0);
}

TEST_CASE("ft run verifies class S in both build modes")
{
    for (bool safe : {false, true}) {
        WorkerPool pool({2, 0});
        BenchmarkResult res = ft::run(ProblemClass::S, pool, safe);
        CAPTURE(safe);
        CHECK(res.verified);
        CHECK(res.name == "FT");
        CHECK(res.size == "64x64x64");
        CHECK(res.iterations == 6);
        CHECK(res.safe_mode == safe);
        CHECK(res.mflops > 0.0);
    }
}

TEST_CASE("ft run verifies class W")
{
    WorkerPool pool({2, 0});
    BenchmarkResult res = ft::run(ProblemClass::W, pool, false);
    CHECK(res.verified);
    CHECK(res.size == "128x128x32");
}

#include <doctest.h>

#include "npb/common.hpp"

#include <cmath>
#include <limits>

using namespace npb;

TEST_CASE("parse_class accepts the five classes in either case")
{
    ProblemClass c;
    CHECK(parse_class("S", c));
    CHECK(c == ProblemClass::S);
    CHECK(parse_class("a", c));
    CHECK(c == ProblemClass::A);
    CHECK(parse_class("w", c));
    CHECK(c == ProblemClass::W);
    CHECK(parse_class("B", c));
    CHECK(c == ProblemClass::B);
    CHECK(parse_class("c", c));
    CHECK(c == ProblemClass::C);

    CHECK_FALSE(parse_class("", c));
    CHECK_FALSE(parse_class("D", c));
    CHECK_FALSE(parse_class("SS", c));
    CHECK_FALSE(parse_class("1", c));
}

TEST_CASE("verify_scalar compares relatively against the reference")
{
    CHECK(verify_scalar(100.0, 100.0, 1e-8));
    CHECK(verify_scalar(100.0 * (1 + 5e-9), 100.0, 1e-8));
    CHECK_FALSE(verify_scalar(100.0 * (1 + 2e-8), 100.0, 1e-8));
    CHECK(verify_scalar(-3.5e4 * (1 - 1e-9), -3.5e4, 1e-8));
    CHECK_FALSE(verify_scalar(3.5e4, -3.5e4, 1e-8));

    SUBCASE("zero reference falls back to absolute")
    {
        CHECK(verify_scalar(0.0, 0.0, 1e-8));
        CHECK(verify_scalar(5e-9, 0.0, 1e-8));
        CHECK_FALSE(verify_scalar(1e-7, 0.0, 1e-8));
    }

    SUBCASE("non-finite values never verify")
    {
        double nan = std::numeric_limits<double>::quiet_NaN();
        double inf = std::numeric_limits<double>::infinity();
        CHECK_FALSE(verify_scalar(nan, 1.0, 1e-8));
        CHECK_FALSE(verify_scalar(inf, 1.0, 1e-8));
        CHECK_FALSE(verify_scalar(-inf, 0.0, 1e-8));
    }
}

TEST_CASE("complex arithmetic")
{
    Complex a{3.0, 4.0}, b{-1.0, 2.0};
    Complex s = a + b;
    CHECK(s.re == 2.0);
    CHECK(s.im == 6.0);
    Complex d = a - b;
    CHECK(d.re == 4.0);
    CHECK(d.im == 2.0);
    Complex p = a * b;
    CHECK(p.re == -11.0);
    CHECK(p.im == 2.0);
    Complex sc = 2.0 * a;
    CHECK(sc.re == 6.0);
    CHECK(sc.im == 8.0);
    CHECK(cabs2(a) == 25.0);
}

TEST_CASE("report formats the completion banner")
{
    BenchmarkResult r;
    r.name = "EP";
    r.cls = ProblemClass::S;
    r.size = "33554432";
    r.iterations = 0;
    r.seconds = 1.25;
    r.mflops = 26.84;
    r.verified = true;
    r.workers = 2;
    r.safe_mode = false;

    std::string block = report(r);
    CHECK(block.find("EP Benchmark Completed") != std::string::npos);
    CHECK(block.find("Class           =                        S") != std::string::npos);
    CHECK(block.find("VERIFICATION SUCCESSFUL") != std::string::npos);

    r.verified = false;
    block = report(r);
    CHECK(block.find("VERIFICATION FAILED") != std::string::npos);
}

TEST_CASE("array view bounds checking")
{
    double buf[4] = {1, 2, 3, 4};
    ArrayView<double, false> raw{buf, 4};
    ArrayView<double, true> checked{buf, 4};
    CHECK(raw[2] == 3.0);
    CHECK(checked[2] == 3.0);
    checked[0] = 9.0;
    CHECK(buf[0] == 9.0);
    // out-of-range access on the checked view aborts by design; that
    // path is exercised by the acceptance harness in a child process
}

#include <doctest.h>

#include "npb/report_io.hpp"

#include <stdexcept>

using namespace npb::io;

namespace {

std::vector<RunRecord> sample_rows()
{
    std::vector<RunRecord> rows;
    for (int w : {1, 2}) {
        for (int rep = 0; rep < 3; rep++) {
            RunRecord r;
            r.benchmark = "ep";
            r.cls = 'A';
            r.workers = w;
            r.rep = rep;
            r.seconds = 10.0 / w + 0.01 * rep;
            r.mflops = 53.687 * w;
            r.verified = true;
            r.safe_mode = false;
            rows.push_back(r);
        }
    }
    return rows;
}

} // namespace

TEST_CASE("empty result list emits a header-only CSV")
{
    CHECK(to_csv({}) == "benchmark,class,workers,rep,seconds,mflops,verified,safe_mode\n");
    CHECK(parse_csv(to_csv({})).empty());
}

TEST_CASE("CSV round-trips to equal records")
{
    std::vector<RunRecord> rows = sample_rows();
    rows[2].verified = false;
    rows[3].safe_mode = true;
    rows[4].seconds = 0.000123456;
    rows[5].mflops = 123456.7;

    std::string text = to_csv(rows);
    std::vector<RunRecord> back = parse_csv(text);
    REQUIRE(back.size() == rows.size());
    for (size_t i = 0; i < rows.size(); i++) {
        CAPTURE(i);
        CHECK(back[i].benchmark == rows[i].benchmark);
        CHECK(back[i].cls == rows[i].cls);
        CHECK(back[i].workers == rows[i].workers);
        CHECK(back[i].rep == rows[i].rep);
        // values are 6-significant-digit stable, so a second round trip
        // is exact
        CHECK(to_csv({back[i]}) == to_csv({rows[i]}));
    }

    SUBCASE("emission is bit-stable")
    {
        CHECK(to_csv(rows) == text);
    }
}

TEST_CASE("CSV parser rejects malformed input")
{
    CHECK_THROWS_AS(parse_csv(""), std::runtime_error);
    CHECK_THROWS_AS(parse_csv("nope\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_csv(csv_header() + "\nep,A,1\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_csv(csv_header() + "\nep,A,1,0,x,1,1,0\n"),
                    std::runtime_error);
}

TEST_CASE("JSON mirrors the CSV schema plus per-configuration stats")
{
    std::string j = to_json(sample_rows());
    CHECK(j.find("\"results\"") != std::string::npos);
    CHECK(j.find("\"stats\"") != std::string::npos);
    CHECK(j.find("\"benchmark\": \"ep\"") != std::string::npos);
    CHECK(j.find("\"mean_seconds\"") != std::string::npos);
    CHECK(to_json({}).find("\"results\": []") != std::string::npos);
}

TEST_CASE("speedup table uses the 1-worker mean as baseline")
{
    std::string table = speedup_table(sample_rows());
    CHECK(table.find("speedup") != std::string::npos);
    // 1-worker mean = 10.01, 2-worker mean = 5.01: rows carry 1.00 and 2.00
    CHECK(table.find("1.00") != std::string::npos);
    CHECK(table.find("2.00") != std::string::npos);
    CHECK(table.find("unchecked") != std::string::npos);
}

TEST_CASE("comparison rendering carries the verdict and the correction note")
{
    std::vector<double> a = {1.0, 1.1, 0.9, 1.05, 0.95, 1.02, 0.98, 1.01, 0.99, 1.04};
    std::vector<double> b = {2.0, 2.1, 1.9, 2.05, 1.95, 2.02, 1.98, 2.01, 1.99, 2.04};
    auto rep = npb::stats::compare(a, b, "left", "right");
    std::string text = comparison_text(rep);
    CHECK(text.find("left vs right") != std::string::npos);
    CHECK(text.find("different at 95% confidence") != std::string::npos);
    CHECK(text.find("no multiple-comparison correction") != std::string::npos);

    std::string j = comparison_json({rep});
    CHECK(j.find("\"verdict\": \"different\"") != std::string::npos);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle/oracle.hpp"
#include "pvaudit/csv.hpp"
#include "pvaudit/dataset.hpp"
#include "pvaudit/errors.hpp"
#include "pvaudit/fixtures.hpp"

#include <filesystem>
#include <random>
#include <string>

using namespace pvaudit;
using namespace pvaudit::dataset;

namespace {

const std::string kHeader = "study,criterion,instrument,category,r,n\n";

std::string fixture(const char* name) { return std::string(PVAUDIT_FIXTURE_DIR) + "/" + name; }

// Row number carried by the ValidationError thrown for `text`, or 0.
std::size_t failing_row(const std::string& text) {
    try {
        parse_correlation_csv(text);
    } catch (const ValidationError& e) {
        return e.row();
    }
    return 0;
}

} // namespace

TEST_CASE("csv reader handles quoting, BOM and blank lines") {
    const auto t = csv::parse("\xEF\xBB\xBF" "a,b\n\"x, y\",\"he said \"\"hi\"\"\"\n\n1,2\r\n");
    REQUIRE(t.header.size() == 2);
    CHECK(t.header[0] == "a");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][0] == "x, y");
    CHECK(t.rows[0][1] == "he said \"hi\"");
    CHECK(t.rows[1][1] == "2");
    CHECK(t.column(" B ") == 1);
    CHECK_FALSE(t.column("c"));

    CHECK_THROWS_AS(csv::parse(""), SchemaError);
    CHECK_THROWS_AS(csv::parse("a,b\n1\n"), ValidationError);
    CHECK_THROWS_AS(csv::parse("a,b\n\"1,2\n"), ValidationError);
    CHECK(csv::escape("x,y") == "\"x,y\"");
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a\tb", '\t') == "\"a\tb\"");
}

TEST_CASE("correlation csv parses a well-formed file") {
    const auto d = parse_correlation_csv(kHeader + "S1,\"grade, final\",IAT,microbehavior,-0.25,61\n"
                                                   "S2,ratings,explicit,person_perception,0.1,40\n",
                                         "mem");
    REQUIRE(d.records.size() == 2);
    CHECK(d.source == "mem");
    CHECK(d.records[0].criterion == "grade, final");
    CHECK(d.records[0].instrument == Instrument::iat);
    CHECK(d.records[0].effect.r() == -0.25);
    CHECK(d.records[0].effect.n() == 61);
    CHECK(d.records[1].instrument == Instrument::explicit_measure);
}

TEST_CASE("extra columns are ignored and column order is free") {
    const auto d = parse_correlation_csv("n,r,note,category,instrument,criterion,study\n50,0.3,x,c,iat,k,s\n");
    REQUIRE(d.records.size() == 1);
    CHECK(d.records[0].study == "s");
    CHECK(d.records[0].effect.n() == 50);
}

TEST_CASE("correlation csv validation reports the data row") {
    CHECK(failing_row(kHeader + "a,b,iat,c,0.2,50\na,b,iat,c,1.0,50\n") == 2);
    CHECK(failing_row(kHeader + "a,b,iat,c,-1,50\n") == 1);
    CHECK(failing_row(kHeader + "a,b,iat,c,0.2,3\n") == 1);
    CHECK(failing_row(kHeader + "a,b,iat,c,0.2,50.5\n") == 1);
    CHECK(failing_row(kHeader + "a,b,survey,c,0.2,50\n") == 1);
    CHECK(failing_row(kHeader + "a,b,iat,c,abc,50\n") == 1);
    CHECK(failing_row(kHeader + "a,b,iat,c,,50\n") == 1);
    CHECK(failing_row(kHeader + "a,b,iat,c,nan,50\n") == 1);
    CHECK(failing_row(kHeader + "a,b,iat,c,0.1,50\na,b,iat,c,0.1,50\nx,y,iat,c,0.1,2\n") == 3);

    try {
        parse_correlation_csv(kHeader + "a,b,iat,c,1,50\n");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("arctanh(r) diverges at |r| = 1") != std::string::npos);
    }
    try {
        parse_correlation_csv(kHeader + "a,b,iat,c,0.3,3\n");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("SE = 1/sqrt(n - 3) is undefined") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_correlation_csv("study,criterion,instrument,category,r\na,b,iat,c,0.2\n"), SchemaError);
}

TEST_CASE("correlation csv round-trips exactly") {
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> r_dist(-0.999, 0.999);
    std::uniform_int_distribution<int> n_dist(4, 5000);
    const char* names[] = {"plain", "with, comma", "with \"quote\"", "line\nbreak", " padded"};
    for (int trial = 0; trial < 50; ++trial) {
        Dataset d;
        for (int i = 0; i < 20; ++i) {
            d.records.push_back({std::string(names[(trial + i) % 5]) + std::to_string(i), names[i % 5],
                                 i % 2 ? Instrument::iat : Instrument::explicit_measure, "cat" + std::to_string(i % 3),
                                 corrstats::EffectSize(r_dist(gen), n_dist(gen))});
        }
        const auto back = parse_correlation_csv(serialize_correlation_csv(d));
        REQUIRE(back.records.size() == d.records.size());
        for (std::size_t i = 0; i < d.records.size(); ++i) {
            CAPTURE(i);
            // Leading whitespace inside unquoted fields is trimmed, so compare trimmed text.
            CHECK(csv::trim(back.records[i].study) == csv::trim(d.records[i].study));
            CHECK(back.records[i].effect == d.records[i].effect);
            CHECK(back.records[i].instrument == d.records[i].instrument);
        }
    }
}

TEST_CASE("checked-in correlation fixtures re-validate and match the embedded tables") {
    for (const char* id : {"table3", "table4"}) {
        CAPTURE(id);
        const auto loaded = load_correlation_csv(fixture((std::string(id) + ".csv").c_str()));
        const auto embedded = fixtures::correlation_table_dataset(id);
        REQUIRE(loaded.records.size() == embedded.records.size());
        for (std::size_t i = 0; i < loaded.records.size(); ++i) {
            CHECK(loaded.records[i] == embedded.records[i]);
        }
    }
}

TEST_CASE("checked-in p-value fixtures match the embedded tables") {
    const auto t1 = parse_pvalue_csv(read_text_file(fixture("table1.csv")));
    REQUIRE(t1.size() == fixtures::table1().size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].label == fixtures::table1()[i].criterion);
        CHECK(t1[i].p == fixtures::table1()[i].unadjusted);
    }
    const auto t2 = parse_pvalue_csv(read_text_file(fixture("table2.csv")));
    REQUIRE(t2.size() == fixtures::table2().size());
    for (std::size_t i = 0; i < t2.size(); ++i) {
        CHECK(t2[i].label == fixtures::table2()[i].criterion);
        CHECK(t2[i].p == fixtures::table2()[i].unadjusted);
    }
}

TEST_CASE("p-value list parsing") {
    const auto v = parse_pvalue_csv("p\n0.5\n1\n");
    REQUIRE(v.size() == 2);
    CHECK(v[0].label == "1");
    CHECK_THROWS_AS(parse_pvalue_csv("p\n0\n"), ValidationError);
    CHECK_THROWS_AS(parse_pvalue_csv("p\n1.5\n"), ValidationError);
    CHECK_THROWS_AS(parse_pvalue_csv("label\nx\n"), SchemaError);
}

TEST_CASE("one-sample csv: fixture, derived se, round trip") {
    const auto rows = load_one_sample_csv(fixture("table5.csv"));
    const auto embedded = fixtures::one_sample_records();
    REQUIRE(rows.size() == embedded.size());
    REQUIRE(rows.size() == 9);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CAPTURE(rows[i].study);
        CHECK(rows[i].study == embedded[i].study);
        CHECK(rows[i].year == embedded[i].year);
        CHECK(rows[i].association == embedded[i].association);
        CHECK(rows[i].summary.has_value() == embedded[i].summary.has_value());
    }
    CHECK_FALSE(rows[7].summary.has_value()); // no mean reported

    const auto derived = parse_one_sample_csv("study,year,n,mean,sd,se\nBlair,2014,138,0.3,0.29,\n");
    REQUIRE(derived.size() == 1);
    REQUIRE(derived[0].summary);
    CHECK(derived[0].summary->effective_se() == doctest::Approx(oracle::kSeFromSd029N138).epsilon(1e-14));
    CHECK(derived[0].association == Association::unknown);

    CHECK_THROWS_AS(parse_one_sample_csv("study,year,n,mean,sd,se\nx,2000,10,0.3,-1,\n"), ValidationError);
    CHECK_THROWS_AS(parse_one_sample_csv("study,year,n,mean,sd,se\nx,2000,10,0.3,0.2,-0.1\n"), ValidationError);
    CHECK_THROWS_AS(parse_one_sample_csv("study,year,n,mean,sd,se,association\nx,2000,10,0.3,0.2,0.1,maybe\n"),
                    ValidationError);

    const auto again = parse_one_sample_csv(serialize_one_sample_csv(rows));
    REQUIRE(again.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(again[i].study == rows[i].study);
        CHECK(again[i].n == rows[i].n);
        if (rows[i].summary) {
            REQUIRE(again[i].summary);
            CHECK(again[i].summary->mean == rows[i].summary->mean);
            CHECK(again[i].summary->effective_se() == rows[i].summary->effective_se());
        }
    }
}

TEST_CASE("missing file is an IoError") {
    CHECK_THROWS_AS(load_correlation_csv("/nonexistent/correlations.csv"), IoError);
    try {
        read_text_file("/nonexistent/x.csv");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("file not found or unreadable") != std::string::npos);
    }
}

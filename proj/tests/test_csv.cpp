#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dioman/csv.hpp"
#include "dioman/errors.hpp"

using namespace dioman;

TEST_CASE("empty row set produces a header-only file") {
    CsvWriter w({"q", "psi"});
    CHECK(w.str() == "q,psi\n");
}

TEST_CASE("exact rationals print as num/den, zero as 0/1") {
    CsvWriter w({"residual"});
    w.add_row({cell(Rat(0))});
    w.add_row({cell(Rat(7, 8))});
    CHECK(w.str() == "residual\n0/1\n7/8\n");
}

TEST_CASE("doubles print as shortest round-trip decimals") {
    CHECK(cell(0.875) == "0.875");
    CHECK(cell(2.0) == "2");
    CHECK(cell(static_cast<Int>(42)) == "42");
    CHECK(cell(true) == "1");
}

TEST_CASE("fields with commas or quotes are quoted") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CsvWriter w({"note"});
    w.add_row({"x, y"});
    CHECK(w.str() == "note\n\"x, y\"\n");
}

TEST_CASE("row width is enforced") {
    CsvWriter w({"a", "b"});
    CHECK_THROWS_AS(w.add_row({"1"}), Error);
}

TEST_CASE("summary sections append a second header") {
    CsvWriter w({"band", "N"});
    w.add_row({"1", "10"});
    w.begin_section({"slope", "stderr", "target_s"});
    w.add_row({"0.87", "0.01", "0.875"});
    CHECK(w.str() == "band,N\n1,10\nslope,stderr,target_s\n0.87,0.01,0.875\n");
}

TEST_CASE("write_file and manifest round out the artifact set") {
    const char* path = "csv_test_artifact.csv";
    CsvWriter w({"k", "v"});
    w.add_row({"1", "2"});
    w.write_file(path);
    {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str() == "k,v\n1,2\n");
    }
    std::remove(path);

    const char* mpath = "csv_test_artifact.manifest";
    write_manifest(mpath, {{"subcommand", "bset"}, {"qmax", "13"}});
    {
        std::ifstream in(mpath);
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str() == "subcommand=bset\nqmax=13\n");
    }
    std::remove(mpath);
}

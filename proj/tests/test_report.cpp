#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "ribetor/report.hpp"

using namespace ribetor;

TEST_CASE("report schema and deterministic rendering") {
    Report r;
    r.config_json = "{\"mode\":\"test\",\"seed\":24301}";
    r.cases.push_back({"b-case", "kind2", "{\"n\":5}", "{\"v\":1}", true, "fine"});
    r.cases.push_back({"a-case", "kind1", "{}", "{}", false, "broken"});

    std::string a = render_report_json(r);
    std::string b = render_report_json(r);
    CHECK(a == b);

    auto doc = nlohmann::json::parse(a);
    CHECK(doc["config"]["mode"] == "test");
    CHECK(doc["summary"]["total"] == 2);
    CHECK(doc["summary"]["passed"] == 1);
    CHECK(doc["summary"]["failed"] == 1);
    CHECK(doc["version"] == version_string());
    // cases sorted by id
    CHECK(doc["cases"][0]["id"] == "a-case");
    CHECK(doc["cases"][1]["id"] == "b-case");
    CHECK(doc["cases"][1]["pass"] == true);
    CHECK(doc["cases"][1]["inputs"]["n"] == 5);
}

TEST_CASE("value serialization formats") {
    auto ctx = build_extension(5, 2);
    Fq a = Fq::from_counter(ctx, 7);
    auto ja = nlohmann::json::parse(json_field_element(a));
    CHECK(ja["p"] == 5);
    CHECK(ja["k"] == 2);
    CHECK(ja["coeffs"].size() == 2);

    auto E = Curve::create(53, 2, 1);
    SeededRng rng(3);
    Point P = random_point(E, E->base_field(), rng);
    auto jp = nlohmann::json::parse(json_point(P));
    CHECK(jp["infinity"] == false);
    CHECK(jp["x"]["p"] == 53);
    auto jo = nlohmann::json::parse(json_point(Point::infinity(E, E->base_field())));
    CHECK(jo["infinity"] == true);

    auto jr = nlohmann::json::parse(json_rational(Rat(-3, 6)));
    CHECK(jr["num"] == -1);
    CHECK(jr["den"] == 2);

    auto jc = nlohmann::json::parse(json_complex({1.5, -2.0}));
    CHECK(jc["re"] == 1.5);
    CHECK(jc["im"] == -2.0);
}

TEST_CASE("atomic write leaves a complete file and no temp") {
    std::string path = "test_report_atomic.json";
    write_file_atomic(path, "{\"ok\":true}\n");
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "{\"ok\":true}\n");
    std::ifstream tmp(path + ".tmp");
    CHECK(!tmp.good());
    std::remove(path.c_str());
}

TEST_CASE("exact rational arithmetic helpers") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(1, 2) + Rat(1, 3) == Rat(5, 6));
    CHECK(Rat(7, 3).mod1() == Rat(1, 3));
    CHECK(Rat(-1, 3).mod1() == Rat(2, 3));
    CHECK(Rat(5, 4).order_mod1() == 4);
    CHECK((Rat(1, 2) * Rat(2, 3)) == Rat(1, 3));
    CHECK_THROWS_AS(Rat(1, 0), error);
    CHECK_THROWS_AS(Rat(1, 2) / Rat(0), error);
}

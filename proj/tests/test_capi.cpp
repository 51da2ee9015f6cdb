// Exercises the shared-library surface exactly as an external client would:
// only cyclone/cyclone.h, opaque handles and status codes.
#include <cyclone/cyclone.h>

#include <doctest.h>
#include <json.hpp>

#include <cstring>
#include <string>

using nlohmann::json;

namespace {

const char* kToggle = R"({"d":2,"functions":[
  {"kind":"hill","lambda":0.0,"r":2.0},
  {"kind":"hill","lambda":0.0,"r":2.0}],
  "alpha":[3.0,3.0]})";

const char* kRepressilator = R"({"d":3,"functions":[
  {"kind":"hill","lambda":0.0,"r":4.0},
  {"kind":"hill","lambda":0.0,"r":4.0},
  {"kind":"hill","lambda":0.0,"r":4.0}],
  "alpha":[3.0,3.0,3.0]})";

struct Net {
    cyclone_network* h = nullptr;
    explicit Net(const char* spec) { REQUIRE(cyclone_network_create(spec, &h) == CYCLONE_OK); }
    ~Net() { cyclone_network_destroy(h); }
};

std::string take(char* s) {
    REQUIRE(s != nullptr);
    std::string out(s);
    cyclone_string_free(s);
    return out;
}

} // namespace

TEST_CASE("lifecycle and getters") {
    Net net(kRepressilator);
    CHECK(cyclone_network_dimension(net.h) == 3);
    CHECK(cyclone_network_decreasing_count(net.h) == 3);
    CHECK(cyclone_network_sensitivity_product(net.h) == doctest::Approx(64.0));
    CHECK(std::string(cyclone_version()).find("cyclone") == 0);
}

TEST_CASE("creation failures set the status and the message") {
    cyclone_network* h = reinterpret_cast<cyclone_network*>(0x1);
    CHECK(cyclone_network_create("{ not json", &h) == CYCLONE_ERROR_INVALID_INPUT);
    CHECK(h == nullptr);
    CHECK(std::strlen(cyclone_last_error()) > 0);

    const char* lambda_one = R"({"d":2,"functions":[
      {"kind":"hill","lambda":1.0,"r":2.0},
      {"kind":"hill","lambda":0.0,"r":2.0}],"alpha":[1.0,1.0]})";
    CHECK(cyclone_network_create(lambda_one, &h) == CYCLONE_ERROR_INVALID_INPUT);
    CHECK(std::string(cyclone_last_error()).find("lambda") != std::string::npos);

    const char* all_affine = R"({"d":2,"functions":[
      {"kind":"affine","a":1.0,"b":1.0},
      {"kind":"affine","a":1.0,"b":1.0}],"alpha":[1.0,1.0]})";
    CHECK(cyclone_network_create(all_affine, &h) == CYCLONE_ERROR_INVALID_INPUT);
}

TEST_CASE("verify reports without constructing the network") {
    int certified = -1;
    char* report = nullptr;
    REQUIRE(cyclone_verify(kRepressilator, &certified, &report) == CYCLONE_OK);
    CHECK(certified == 1);
    const auto j = json::parse(take(report));
    CHECK(j.at("D").get<double>() == 64.0);
    CHECK(j.at("assessment").get<std::string>() == "oscillation possible");

    const char* all_affine = R"({"d":2,"functions":[
      {"kind":"affine","a":1.0,"b":1.0},
      {"kind":"affine","a":1.0,"b":1.0}],"alpha":[1.0,1.0]})";
    REQUIRE(cyclone_verify(all_affine, &certified, &report) == CYCLONE_OK);
    CHECK(certified == 0);
    cyclone_string_free(report);

    CHECK(cyclone_verify("{", &certified, &report) == CYCLONE_ERROR_INVALID_INPUT);
}

TEST_CASE("analyze emits the regime report") {
    Net net(kToggle);
    char* report = nullptr;
    REQUIRE(cyclone_analyze(net.h, 0.0, &report) == CYCLONE_OK);
    const auto j = json::parse(take(report));
    CHECK(j.at("branch").get<std::string>() == "EvenBistable");
    CHECK(j.at("equilibria").size() == 3);
}

TEST_CASE("simulate validates input and returns both artifacts") {
    Net net(kRepressilator);
    const double x0[3] = {0.9, 1.3, 0.7};
    char* report = nullptr;
    char* csv = nullptr;
    REQUIRE(cyclone_simulate(net.h, x0, 3, 200.0, 0.0, &report, &csv) == CYCLONE_OK);
    const auto j = json::parse(take(report));
    CHECK(j.at("kind").get<std::string>() == "PeriodicOrbit");
    const std::string table = take(csv);
    CHECK(table.rfind("t,x1,x2,x3\n", 0) == 0);

    const double bad[3] = {0.9, -1.3, 0.7};
    CHECK(cyclone_simulate(net.h, bad, 3, 200.0, 0.0, &report, &csv) ==
          CYCLONE_ERROR_INVALID_INPUT);
    const double short_x0[2] = {0.9, 1.3};
    CHECK(cyclone_simulate(net.h, short_x0, 2, 200.0, 0.0, &report, &csv) ==
          CYCLONE_ERROR_INVALID_INPUT);
}

TEST_CASE("sweep returns per-shape outputs") {
    Net net(kToggle);

    SUBCASE("1-D diagonal: csv + brackets, no svg") {
        char* csv = nullptr;
        char* svg = nullptr;
        char* brackets = nullptr;
        const char* sweep = R"({"axes":[{"indices":[1,2],"lo":1.0,"hi":4.0,"res":31}]})";
        REQUIRE(cyclone_sweep(net.h, sweep, &csv, &svg, &brackets) == CYCLONE_OK);
        CHECK(svg == nullptr);
        const std::string table = take(csv);
        CHECK(table.rfind("alpha_1,alpha_2,branch,p_mid,n_equilibria\n", 0) == 0);
        const auto jb = json::parse(take(brackets));
        REQUIRE(!jb.at("brackets").empty());
        const double lo = jb.at("brackets")[0].at("axis_low").get<double>();
        CHECK(lo == doctest::Approx(2.0).epsilon(1e-4));
    }
    SUBCASE("2-D: csv + svg, no brackets") {
        char* csv = nullptr;
        char* svg = nullptr;
        char* brackets = nullptr;
        const char* sweep = R"({"axes":[
          {"indices":[1],"lo":0.5,"hi":8.0,"res":11},
          {"indices":[2],"lo":0.5,"hi":8.0,"res":11}]})";
        REQUIRE(cyclone_sweep(net.h, sweep, &csv, &svg, &brackets) == CYCLONE_OK);
        CHECK(brackets == nullptr);
        take(csv);
        const std::string image = take(svg);
        CHECK(image.find("<svg") != std::string::npos);
    }
    SUBCASE("invalid axis index") {
        char* csv = nullptr;
        const char* sweep = R"({"axes":[{"indices":[7],"lo":1.0,"hi":4.0,"res":8}]})";
        CHECK(cyclone_sweep(net.h, sweep, &csv, nullptr, nullptr) ==
              CYCLONE_ERROR_INVALID_INPUT);
    }
}

TEST_CASE("hypotheses_check is honored at creation") {
    const char* checked = R"({"d":2,"functions":[
      {"kind":"hill","lambda":0.0,"r":2.0},
      {"kind":"hill","lambda":0.0,"r":2.0}],
      "alpha":[3.0,3.0],"hypotheses_check":true})";
    cyclone_network* h = nullptr;
    REQUIRE(cyclone_network_create(checked, &h) == CYCLONE_OK);
    cyclone_network_destroy(h);
}

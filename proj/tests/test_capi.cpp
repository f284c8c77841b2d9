#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qst.h"

#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

using json = nlohmann::json;

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    qst_string_free(s);
    return out;
}

qst_quiver* quiver(const char* spec) {
    qst_quiver* q = nullptr;
    REQUIRE(qst_quiver_from_spec(spec, &q) == QST_OK);
    return q;
}

qst_rep* sample(qst_quiver* q, int N, int full, uint64_t seed) {
    qst_networks* nets = nullptr;
    REQUIRE(qst_networks_enumerate(q, N, full, 0, &nets) == QST_OK);
    qst_rep* rep = nullptr;
    REQUIRE(qst_rep_random(q, nets, 0, seed, &rep) == QST_OK);
    qst_networks_free(nets);
    return rep;
}

} // namespace

TEST_CASE("status codes and error messages") {
    qst_quiver* q = nullptr;
    CHECK(qst_quiver_from_spec("nonsense:x=1", &q) == QST_VALIDATION_ERROR);
    CHECK(q == nullptr);
    CHECK(std::string(qst_last_error()).size() > 0);
    CHECK(qst_quiver_from_spec("cycle:n=3", nullptr) == QST_VALIDATION_ERROR);
    q = quiver("torus:d=2,m=3");
    CHECK(std::string(qst_last_error()).empty());
    qst_networks* nets = nullptr;
    CHECK(qst_networks_enumerate(q, 2, 0, 0, &nets) == QST_RESOURCE_ERROR);
    char* count = nullptr;
    REQUIRE(qst_networks_count(q, 2, 0, &count) == QST_OK);
    CHECK(take(count) == "262146");
    REQUIRE(qst_networks_enumerate(q, 2, 1, 0, &nets) == QST_OK);
    CHECK(qst_networks_size(nets) == 1);
    qst_rep* rep = nullptr;
    CHECK(qst_rep_random(q, nets, 5, 1, &rep) == QST_VALIDATION_ERROR);
    CHECK(qst_rep_from_json("{not json", &rep) == QST_VALIDATION_ERROR);
    qst_networks_free(nets);
    qst_quiver_free(q);
    CHECK(qst_quiver_vertex_count(nullptr) == -1);
}

TEST_CASE("quiver handles") {
    qst_quiver* c = quiver("cycle:n=3");
    CHECK(qst_quiver_vertex_count(c) == 3);
    qst_quiver* cs = nullptr;
    REQUIRE(qst_quiver_augment(c, &cs) == QST_OK);
    CHECK(qst_quiver_edge_count(cs) == 6);
    uint64_t n = 0;
    REQUIRE(qst_quiver_count_loops(c, 4, -1, -1, &n) == QST_OK);
    CHECK(n == 0);
    REQUIRE(qst_quiver_count_loops(cs, 2, 0, -1, &n) == QST_OK);
    CHECK(n == 2);
    char* text = nullptr;
    REQUIRE(qst_quiver_to_json(c, &text) == QST_OK);
    qst_quiver* back = nullptr;
    REQUIRE(qst_quiver_from_json(text, &back) == QST_OK);
    CHECK(qst_quiver_edge_count(back) == 3);
    qst_string_free(text);
    qst_quiver* deco = nullptr;
    REQUIRE(qst_quiver_add_self_loops(c, &deco) == QST_OK);
    CHECK(qst_quiver_edge_count(deco) == 6);
    for (auto* h : {c, cs, back, deco}) qst_quiver_free(h);
}

TEST_CASE("representation JSON roundtrip keeps traces") {
    qst_quiver* q = quiver("torus:d=2,m=5,self_loops=1,a=0.5,tau=1.3");
    qst_rep* rep = sample(q, 2, 1, 11);
    CHECK(qst_rep_dimension(rep) == 50);
    char* text = nullptr;
    REQUIRE(qst_rep_to_json(rep, &text) == QST_OK);
    qst_rep* back = nullptr;
    REQUIRE(qst_rep_from_json(text, &back) == QST_OK);
    qst_string_free(text);
    for (int k = 0; k <= 4; ++k) {
        double a = 0, b = 0, c = 0, d = 0;
        REQUIRE(qst_trace_power(rep, k, QST_ROUTE_MATRIX, -1, &a) == QST_OK);
        REQUIRE(qst_trace_power(back, k, QST_ROUTE_PATHS, -1, &b) == QST_OK);
        REQUIRE(qst_trace_power(back, k, QST_ROUTE_CLOSED_FORM, -1, &c) == QST_OK);
        REQUIRE(qst_trace_power(back, k, QST_ROUTE_INSERTION, -1, &d) == QST_OK);
        CHECK(std::abs(a - b) <= 1e-8 * (1 + std::abs(a)));
        CHECK(std::abs(a - c) <= 1e-8 * (1 + std::abs(a)));
        CHECK(std::abs(a - d) <= 1e-8 * (1 + std::abs(a)));
    }
    double s1 = 0, s2 = 0;
    REQUIRE(qst_spectral_action(rep, "1 + x^2 - 0.1x^4", 2.0, QST_ROUTE_MATRIX, -1, &s1) == QST_OK);
    REQUIRE(qst_spectral_action(rep, "1 + x^2 - 0.1x^4", 2.0, QST_ROUTE_CLOSED_FORM, -1, &s2) == QST_OK);
    CHECK(std::abs(s1 - s2) <= 1e-8 * (1 + std::abs(s1)));
    char* report = nullptr;
    REQUIRE(qst_spectral_action_closed_form_json(rep, "1 + x^2 - 0.1x^4", 0.5, &report) == QST_OK);
    CHECK(json::parse(take(report)).at("total").get<double>() == doctest::Approx(s1).epsilon(1e-10));
    size_t dim = 0;
    REQUIRE(qst_dirac_spectrum(rep, nullptr, 0, &dim) == QST_OK);
    std::vector<double> ev(dim);
    REQUIRE(qst_dirac_spectrum(rep, ev.data(), ev.size(), &dim) == QST_OK);
    double sq = 0;
    for (double x : ev) sq += x * x;
    double t2 = 0;
    REQUIRE(qst_trace_power(rep, 2, QST_ROUTE_MATRIX, -1, &t2) == QST_OK);
    CHECK(sq == doctest::Approx(t2));
    qst_rep_free(rep);
    qst_rep_free(back);
    qst_quiver_free(q);
}

TEST_CASE("gauge and verify") {
    qst_quiver* q = quiver("torus:d=2,m=5");
    qst_rep* rep = sample(q, 2, 1, 3);
    qst_rep* moved = nullptr;
    REQUIRE(qst_rep_gauge_random(rep, 9, &moved) == QST_OK);
    double a = 0, b = 0;
    REQUIRE(qst_spectral_action(rep, "x^2 + x^4 - 0.01x^6", 1.0, QST_ROUTE_MATRIX, -1, &a) == QST_OK);
    REQUIRE(qst_spectral_action(moved, "x^2 + x^4 - 0.01x^6", 1.0, QST_ROUTE_MATRIX, -1, &b) == QST_OK);
    CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
    char* report = nullptr;
    REQUIRE(qst_verify_json(moved, 1, 4, &report) == QST_OK);
    CHECK(json::parse(take(report)).at("pass").get<bool>());
    qst_rep_free(rep);
    qst_rep_free(moved);
    qst_quiver_free(q);
}

TEST_CASE("counting entry points") {
    const char* hz[] = {"1", "6", "18", "38", "66", "102", "146", "198"};
    for (int k = 0; k <= 7; ++k) {
        char* s = nullptr;
        REQUIRE(qst_coordination(3, k, &s) == QST_OK);
        CHECK(take(s) == hz[k]);
    }
    long long bfs[8];
    REQUIRE(qst_coordination_bfs(3, 15, 7, bfs) == QST_OK);
    CHECK(bfs[7] == 198);
    char* s = nullptr;
    REQUIRE(qst_closed_walks(QST_WALKS_COMPLETE, 3, 0, 1, 9, &s) == QST_OK);
    CHECK(take(s) == "510");
    REQUIRE(qst_loop_count_lattice(4, 6, &s) == QST_OK);
    CHECK(take(s) == std::to_string(120 * 64 - 180 * 16 + 80 * 4));
    REQUIRE(qst_d6_census_json(3, &s) == QST_OK);
    CHECK(json::parse(take(s)).at("total").get<long long>() == 1860);
}

TEST_CASE("Monte Carlo entry points") {
    qst_quiver* c = quiver("cycle:n=3");
    char* s = nullptr;
    REQUIRE(qst_mc_partition_json(c, 1, "0.5x^2", 1.0, 300, 2, 2, 0, &s) == QST_OK);
    auto j = json::parse(take(s));
    CHECK(j.at("mean").get<double>() == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
    CHECK(j.at("std_error").get<double>() <= 1e-12);
    const int loop[] = {0, 1, 2};
    REQUIRE(qst_mc_wilson_json(c, 1, loop, 3, "0", 1.0, 0, 1000, 2, 1, 0, &s) == QST_OK);
    j = json::parse(take(s));
    CHECK(std::abs(j.at("mean").get<double>()) <= 3 * j.at("std_error").get<double>());
    const int bad[] = {0, 2};
    CHECK(qst_mc_wilson_json(c, 1, bad, 2, "0", 1.0, 0, 10, 2, 1, 0, &s) == QST_VALIDATION_ERROR);
    qst_quiver_free(c);
}

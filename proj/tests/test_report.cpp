#include <doctest.h>

#include <algorithm>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hardy/report.hpp"
#include "support.hpp"

using namespace hardy;
using namespace hardy::testing;

namespace {

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3, 1e-300, 6.02214076e23, -0.0078018, 0.0}) {
        const auto s = format_number(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("CSV tables") {
    const auto g = solve_green(free_field(3, 3), Point::origin(3));
    std::ostringstream gs;
    write_green_csv(gs, g);
    CHECK(gs.str().rfind("x_1,x_2,x_3,G,shell\n", 0) == 0);
    CHECK(count_lines(gs.str()) == 1 + 343);

    const auto w = hardy_weight(g);
    std::ostringstream ws;
    write_weight_csv(ws, w);
    CHECK(ws.str().rfind("x_1,x_2,x_3,w,w_lower,w_upper\n", 0) == 0);
    CHECK(count_lines(ws.str()) == 1 + 125);

    std::ostringstream rs;
    write_region_csv(rs, {{"annulus", 4, 2, 10, 0.5, 8.0}});
    CHECK(rs.str() == "kind,R,ell,count,normalized_sum,scaled\nannulus,4,2,10,0.5,8\n");

    std::ostringstream ks;
    write_kernel_csv(ks, build_T(3));
    CHECK(ks.str().rfind("x_1,x_2,x_3,T\n", 0) == 0);
    CHECK(count_lines(ks.str()) == 8);
    CHECK(ks.str().find("0,0,0,0.5\n") != std::string::npos);
}

TEST_CASE("ensemble CSV") {
    EnsembleSpec s;
    s.box_radius = 8;
    s.shells = {2, 4};
    s.realizations = 3;
    const auto stats = run_ensemble(s);
    std::ostringstream os;
    write_ensemble_csv(os, stats);
    const auto text = os.str();
    CHECK(text.rfind("site,shell,p,moment,CI_lo,CI_hi\n", 0) == 0);
    // 8 sites x 2 moments, 8 G rows, 3 fits
    CHECK(count_lines(text) == 1 + 16 + 8 + 3);
    CHECK(text.find("\n2 0 0,2,1,") != std::string::npos);
    CHECK(text.find("\nfit,all,G,") != std::string::npos);
}

TEST_CASE("model and kernel JSON") {
    const auto m = build_model(3, {0.1, 0, 0, 0, 0.1, 0, 0, 0, 0.1});
    const auto back = parse_model_json(model_json(m));
    CHECK(back.sigma == doctest::Approx(m.sigma));
    CHECK(back.K0_hat == m.K0_hat);
    CHECK(parse_model_json(R"({"dim": 4})").sigma == 1.0);
    CHECK_THROWS_AS(parse_model_json(R"({"dim": 3, "extra": 1})"), InvalidArgument);
    CHECK_THROWS_AS(parse_model_json(R"({"dim": 3, "K0_hat": [[1]]})"), InvalidArgument);
    CHECK_THROWS_AS(parse_model_json("{"), InvalidArgument);

    const std::vector<KernelEntry> k{{Point{0, 0, 0}, 0, 0, 0.3}, {Point{1, -1, 0}, 1, 2, 0.125}};
    int dim = 0;
    const auto kb = parse_kernel_json(kernel_json(3, k), &dim);
    CHECK(dim == 3);
    REQUIRE(kb.size() == 2);
    CHECK(kb[1].x == Point{1, -1, 0});
    CHECK(kb[1].k == 2);
    CHECK(kb[1].value == 0.125);
    CHECK_THROWS_AS(parse_kernel_json(R"({"dim": 3, "kernel": [{"x": [0, 0], "j": 0, "k": 0, "value": 1}]})", &dim),
                    InvalidArgument);
    CHECK_THROWS_AS(parse_kernel_json(R"({"dim": 3, "kernel": [{"x": [0, 0, 0], "j": 0, "k": 0, "v": 1}]})", &dim),
                    InvalidArgument);
}

TEST_CASE("ensemble spec JSON") {
    EnsembleSpec s;
    s.delta = 0.35;
    s.dist = Distribution::uniform;
    s.shells = {4, 8};
    s.master_seed = 123456789012345ULL;
    const auto back = parse_ensemble_spec(ensemble_spec_json(s));
    CHECK(back.delta == s.delta);
    CHECK(back.dist == Distribution::uniform);
    CHECK(back.shells == s.shells);
    CHECK(back.master_seed == s.master_seed);
    CHECK(parse_ensemble_spec("{}").box_radius == 32);
    CHECK_THROWS_AS(parse_ensemble_spec(R"({"radius": 4})"), InvalidArgument);
    CHECK_THROWS_AS(parse_ensemble_spec(R"({"delta": "x"})"), InvalidArgument);
    CHECK_THROWS_AS(parse_ensemble_spec(R"({"realizations": 1})"), InvalidArgument);
}

TEST_CASE("certificate and manifest JSON") {
    HardyCertificate c;
    c.min_eigenvalue = 0.01;
    c.bracket_lo = 0.009;
    c.bracket_hi = 0.01;
    c.certified = true;
    const auto j = nlohmann::json::parse(certificate_json(c, 8, 1.0));
    CHECK(j["schema"] == kSchema);
    CHECK(j["certified"] == true);
    CHECK(j["bracket"][0] == 0.009);

    RunManifest m;
    m.subcommand = "green";
    m.config_json = R"({"radius": 8})";
    m.seeds = {1, 2};
    m.stages.push_back({"solve", 1e-11, 1e-10, true});
    m.failures.push_back("none");
    const auto mj = nlohmann::json::parse(m.to_json());
    CHECK(mj["tool_version"] == kVersion);
    CHECK(mj["config"]["radius"] == 8);
    CHECK(mj["config_hash"].get<std::string>().size() == 16);
    CHECK(mj["stages"][0]["passed"] == true);
    RunManifest m2 = m;
    m2.config_json = R"({"radius": 9})";
    CHECK(m.config_hash() != m2.config_hash());
}

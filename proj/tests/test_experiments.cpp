#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>

#include "avgproc/experiments.hpp"

using namespace avgproc;

TEST_CASE("run_replicas visits every index exactly once, serial and parallel") {
    for (int jobs : {1, 4}) {
        std::vector<std::atomic<int>> hits(100);
        run_replicas(100, jobs, [&](long r) { hits[static_cast<std::size_t>(r)]++; });
        for (auto& h : hits) CHECK(h.load() == 1);
    }
}

TEST_CASE("run_replicas propagates exceptions from workers") {
    CHECK_THROWS_AS(run_replicas(8, 4,
                                 [](long r) {
                                     if (r == 5) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("report serialization") {
    ExperimentReport rep;
    rep.name = "demo";
    rep.config = {{"seed", 1}};
    rep.series["x"] = {{0.0, 1.0, 0.1, 10}, {1.0, 0.5, 0.05, 10}};
    rep.verdicts = {{"check", true, "ok"}};
    CHECK(rep.all_pass());

    nlohmann::json j = rep.to_json();
    CHECK(j["experiment"] == "demo");
    CHECK(j["config"]["seed"] == 1);
    CHECK(j["series"]["x"].size() == 2);
    CHECK(j["verdicts"][0]["pass"] == true);
    CHECK(j["pass"] == true);

    std::string csv = rep.to_csv();
    CHECK(csv.find("series,t,estimate,stderr,n") == 0);
    CHECK(csv.find("x,0") != std::string::npos);

    rep.verdicts.push_back({"bad", false, "nope"});
    CHECK_FALSE(rep.all_pass());
    CHECK(rep.to_json()["pass"] == false);
}

TEST_CASE("mean preservation smoke on Z^2") {
    Graph z2 = make_lattice(2);
    VertexId origin = lattice_pack(2, {0, 0});
    InitialLaw law = InitialLaw::bernoulli(0.5, 1);
    ClockConfig cfg{1.0, MuLaw::half(), 11};
    ExperimentReport rep =
        mean_preservation(z2, law, cfg, {0.5, 1.0, 2.0}, 400, origin, {.jobs = 2});
    CHECK(rep.all_pass());
    CHECK(rep.series.at("mean").size() == 3);
    for (const auto& p : rep.series.at("mean"))
        CHECK(std::fabs(p.estimate - 0.5) <= 3.0 * p.stderr_ + 1e-9);
}

TEST_CASE("serial and parallel runs aggregate identically") {
    Graph z2 = make_lattice(2);
    VertexId origin = lattice_pack(2, {0, 0});
    InitialLaw law = InitialLaw::gaussian(0.0, 1.0, 2);
    ClockConfig cfg{1.0, MuLaw::half(), 21};
    ExperimentReport a = mean_preservation(z2, law, cfg, {1.0}, 200, origin, {.jobs = 1});
    ExperimentReport b = mean_preservation(z2, law, cfg, {1.0}, 200, origin, {.jobs = 4});
    REQUIRE(a.series.at("mean").size() == b.series.at("mean").size());
    CHECK(a.series.at("mean")[0].estimate == b.series.at("mean")[0].estimate);
    CHECK(a.series.at("mean")[0].stderr_ == b.series.at("mean")[0].stderr_);
}

TEST_CASE("L2 convergence smoke on Z^2") {
    Graph z2 = make_lattice(2);
    VertexId origin = lattice_pack(2, {0, 0});
    InitialLaw law = InitialLaw::uniform(0.0, 1.0, 3);
    ClockConfig cfg{1.0, MuLaw::half(), 31};
    ExperimentReport rep =
        l2_convergence(z2, law, cfg, {0.25, 1.0, 4.0}, 300, origin, {.jobs = 2});
    INFO(rep.to_json().dump(2));
    CHECK(rep.all_pass());
    // Second moment of the centered value must sit below the dual bound.
    const auto& sq = rep.series.at("second_moment");
    const auto& bound = rep.series.at("moment_bound");
    REQUIRE(sq.size() == bound.size());
    for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i].estimate <= bound[i].estimate + 1e-9);
}

TEST_CASE("contribution decay smoke on Z^2") {
    Graph z2 = make_lattice(2);
    VertexId u = lattice_pack(2, {0, 0});
    VertexId v = lattice_pack(2, {1, 0});
    ClockConfig cfg{1.0, MuLaw::half(), 41};
    ExperimentReport rep = contribution_decay(z2, cfg, {0.5, 2.0, 8.0}, 200, u, v, 0.25,
                                              {.jobs = 2});
    INFO(rep.to_json().dump(2));
    CHECK(rep.all_pass());
    CHECK(rep.series.count("median_sender_max") == 1);
    CHECK(rep.series.count("median_recipient_max") == 1);
}

TEST_CASE("symmetry test smoke: cycle passes at matched roles") {
    Graph g = make_cycle(12);
    ClockConfig cfg{1.0, MuLaw::half(), 51};
    ExperimentReport rep = symmetry_test(g, cfg, 2.0, 400, 0, 3, 1, {.jobs = 2});
    INFO(rep.to_json().dump(2));
    CHECK(rep.all_pass());
}

TEST_CASE("finite consensus") {
    SUBCASE("K2 reaches consensus at the midpoint") {
        Graph g = make_complete(2);
        InitialLaw law = InitialLaw::bernoulli(0.5, 61);
        ExperimentReport rep = finite_consensus(g, law, {1.0, MuLaw::half(), 62}, 1e-10);
        INFO(rep.to_json().dump(2));
        CHECK(rep.all_pass());
    }
    SUBCASE("cycle(20) contracts to the initial average") {
        Graph g = make_cycle(20);
        InitialLaw law = InitialLaw::uniform(0.0, 1.0, 63);
        ExperimentReport rep = finite_consensus(g, law, {1.0, MuLaw::half(), 64}, 1e-8);
        INFO(rep.to_json().dump(2));
        CHECK(rep.all_pass());
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "causal/scenario_file.hpp"

using namespace causal;

TEST_CASE("full scenario document parses") {
    const char* text = R"({
        "name": "two_hop",
        "engine": "sps_optimal",
        "processes": [1, 2, 3],
        "net": {
            "seed": 9,
            "latency_min": 10,
            "latency_max": 20,
            "loss_prob": 0.1,
            "dup_prob": 0.05,
            "reorder_jitter": 30,
            "max_loss_streak": 5,
            "timer_period": 400,
            "links": [{"src": 1, "dst": 2, "min": 100, "max": 100}]
        },
        "tick_limit": 5000,
        "script": [
            {"tick": 0, "src": 1, "dst": 2, "payload": "a"},
            {"tick": 10, "src": 2, "dsts": [1, 3]}
        ]
    })";
    Scenario s = parse_scenario_json(text);
    CHECK(s.name == "two_hop");
    CHECK(s.engine == EngineKind::SpsOptimal);
    CHECK(s.processes.size() == 3);
    CHECK(s.config.seed == 9);
    CHECK(s.config.latency_min == 10);
    CHECK(s.config.loss_prob == 0.1);
    CHECK(s.config.max_loss_streak == 5);
    CHECK(s.config.timer_period == 400);
    CHECK(s.config.link_latency.at({1, 2}) == std::pair<Tick, Tick>{100, 100});
    CHECK(s.tick_limit == 5000);
    REQUIRE(s.script.size() == 2);
    CHECK(s.script[0].payload == "a");
    CHECK(s.script[0].dsts == std::vector<ProcessId>{ProcessId{2}});
    CHECK(s.script[1].dsts ==
          std::vector<ProcessId>{ProcessId{1}, ProcessId{3}});
    CHECK(s.script[1].payload == "p");  // default payload
}

TEST_CASE("unknown keys are rejected at every level") {
    CHECK_THROWS_AS(parse_scenario_json(
                        R"({"processes": [1,2], "script": [], "typo": 1})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(
                        R"({"processes": [1,2], "script": [],
                            "net": {"lost_prob": 0.1}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(
                        R"({"processes": [1,2], "script": [],
                            "net": {"links": [{"src":1,"dst":2,"min":1,
                                               "max":2,"weight":3}]}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(
                        R"({"processes": [1,2],
                            "script": [{"tick":0,"src":1,"dst":2,"when":5}]})"),
                    std::invalid_argument);
}

TEST_CASE("script destination forms are exclusive") {
    CHECK_THROWS_AS(parse_scenario_json(
                        R"({"processes": [1,2,3],
                            "script": [{"tick":0,"src":1,"dst":2,
                                        "dsts":[3]}]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(
                        R"({"processes": [1,2],
                            "script": [{"tick":0,"src":1}]})"),
                    std::invalid_argument);
}

TEST_CASE("undeclared processes and bad config are rejected") {
    CHECK_THROWS_AS(parse_scenario_json(
                        R"({"processes": [1,2],
                            "script": [{"tick":0,"src":1,"dst":9}]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(
                        R"({"processes": [1,2],
                            "script": [{"tick":0,"src":9,"dst":2}]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(
                        R"({"processes": [1,1],
                            "script": []})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(
                        R"({"processes": [1,2], "script": [],
                            "net": {"loss_prob": 1.5}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(
                        R"({"processes": [1,2], "script": [],
                            "net": {"latency_min": 50, "latency_max": 10}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(
                        R"({"processes": [1,2], "script": [],
                            "net": {"timer_period": 0}})"),
                    std::invalid_argument);
}

TEST_CASE("builtin names and random specs resolve") {
    for (const std::string& name : builtin_scenario_names()) {
        Scenario s = load_scenario(name);
        CHECK(s.name == name);
        CHECK(!s.processes.empty());
        CHECK(!s.script.empty());
    }
    Scenario r = load_scenario("random(5,4,100,light)");
    CHECK(r.processes.size() == 4);
    CHECK(r.script.size() == 100);
    CHECK(r.config.loss_prob == 0.05);
    for (const Action& a : r.script) {
        CHECK(a.dsts.size() == 1);
    }
    Scenario m = load_scenario("random_mcast(5,4,100,heavy)");
    CHECK(m.engine == EngineKind::Multicast);
    CHECK(m.config.loss_prob == 0.2);
    bool any_multi = false;
    for (const Action& a : m.script) {
        if (a.dsts.size() > 1) {
            any_multi = true;
        }
    }
    CHECK(any_multi);
}

TEST_CASE("bad references raise config errors") {
    CHECK_THROWS_AS(load_scenario("no_such_scenario"), std::invalid_argument);
    CHECK_THROWS_AS(load_scenario("random(1,4,100,medium)"),
                    std::invalid_argument);
    CHECK_THROWS_AS(load_scenario("random(1,4,light)"), std::invalid_argument);
    CHECK_THROWS_AS(load_scenario("random(1,1,100,light)"),
                    std::invalid_argument);
}

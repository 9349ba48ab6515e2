#include "crossflow/common/error.hpp"
#include "crossflow/sim/scenario_io.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace crossflow;
using namespace crossflow::sim;

TEST_CASE("parse_scenario: fields, initial occupancies and comments") {
    auto sf = parse_scenario(R"(# border scenario
latent_demand = 600
arrival_rate = 500
registration_capacity = 300
special_needs_fraction = 0.35   # desassistidos
extra_shelter_requests = 20
relocation_capacity = 150
shelter_capacity = 5000
horizon = 90
sheltered = 4200
AtBorder = 120
)");
    CHECK(sf.params.latent_demand == 600);
    CHECK(sf.params.special_needs_fraction == 0.35);
    CHECK(sf.params.shelter_capacity == 5000);
    CHECK(sf.params.horizon == 90);
    CHECK(sf.initial[Stage::Sheltered] == 4200);
    CHECK(sf.initial[Stage::AtBorder] == 120);
    CHECK(parse_scenario(to_scenario_text(sf)).params == sf.params);
    CHECK(parse_scenario(to_scenario_text(sf)).initial == sf.initial);
}

TEST_CASE("parse_scenario: shelter capacity defaults to unbounded") {
    auto sf = parse_scenario("horizon = 3\n");
    CHECK(std::isinf(sf.params.shelter_capacity));
}

TEST_CASE("parse_scenario: rejects bad input with the offending key") {
    auto field_of = [](const char* text) {
        try {
            parse_scenario(text);
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of("horizon = 3\nbogus = 1\n") == "bogus");
    CHECK(field_of("horizon = 3\narrival_rate = fast\n") == "arrival_rate");
    CHECK(field_of("horizon = 3\nhorizon = 4\n") == "horizon");
    CHECK(field_of("arrival_rate = 4\n") == "horizon");
    CHECK(field_of("horizon = 2.5\n") == "horizon");
    CHECK(field_of("horizon = 3\nspecial_needs_fraction = 1.5\n") == "special_needs_fraction");
    CHECK(field_of("horizon = 3\nsheltered = -4\n") == "sheltered");
}

TEST_CASE("trace export shapes") {
    ScenarioParams p;
    p.arrival_rate = 1;
    p.latent_demand = 1;
    p.horizon = 4;
    auto trace = simulate(PipelineState{}, p);
    std::ostringstream occ, flows;
    write_occupancy_csv(occ, trace);
    write_flows_csv(flows, trace);
    auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
    CHECK(lines(occ.str()) == 1 + 5 * 6);
    CHECK(lines(flows.str()) == 1 + 4 * 5);
    CHECK(occ.str().rfind("day,stage,occupancy\n0,WantToLeave,0\n", 0) == 0);
}

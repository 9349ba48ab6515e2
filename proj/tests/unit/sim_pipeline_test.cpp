#include "crossflow/common/error.hpp"
#include "crossflow/sim/pipeline.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace crossflow;
using namespace crossflow::sim;

namespace {

ScenarioParams bottleneck_500_300(int horizon) {
    ScenarioParams p;
    p.arrival_rate = 500;
    p.registration_capacity = 300;
    p.horizon = horizon;
    return p;
}

PipelineState with_want_to_leave(double n) {
    PipelineState s;
    s[Stage::WantToLeave] = n;
    return s;
}

double flow_amount(const std::vector<FlowRecord>& flows, Stage from, Stage to) {
    for (const auto& f : flows) {
        if (f.from == from && f.to == to) return f.amount;
    }
    FAIL("edge not recorded");
    return 0;
}

}  // namespace

TEST_CASE("step: arrivals above registration capacity pile up at the border") {
    auto r = step(with_want_to_leave(1e6), bottleneck_500_300(1));
    CHECK(r.state[Stage::AtBorder] == 500.0);
    auto r2 = step(r.state, bottleneck_500_300(1));
    CHECK(r2.state[Stage::AtBorder] - r.state[Stage::AtBorder] == 200.0);
    CHECK(r2.state[Stage::Processing] == 300.0);
}

TEST_CASE("step: zero rates only drain processing") {
    PipelineState s;
    s.occupancy = {7, 6, 5, 4, 3, 2};
    s.day = 12;
    ScenarioParams zero;
    auto r = step(s, zero);
    CHECK(r.state.occupancy == std::array<double, 6>{7, 6, 0, 4, 3, 7});
    CHECK(r.state.day == 13);
    CHECK(flow_amount(r.flows, Stage::Processing, Stage::SelfSettled) == 5.0);
    REQUIRE(r.flows.size() == 5);
    for (const auto& f : r.flows) {
        CHECK(f.day == 13);
    }
    // Processing always empties, so only its outflows are non-zero.
    CHECK(flow_amount(r.flows, Stage::Sheltered, Stage::Relocated) == 0.0);
    CHECK(flow_amount(r.flows, Stage::AtBorder, Stage::Processing) == 0.0);
    CHECK(flow_amount(r.flows, Stage::WantToLeave, Stage::AtBorder) == 0.0);
}

TEST_CASE("step: zero rates with empty processing is a fixed point") {
    PipelineState s;
    s.occupancy = {7, 6, 0, 4, 3, 2};
    auto r = step(s, ScenarioParams{});
    CHECK(r.state.occupancy == s.occupancy);
    for (const auto& f : r.flows) CHECK(f.amount == 0.0);
}

TEST_CASE("step: processing splits by the special-needs fraction") {
    PipelineState s;
    s[Stage::Processing] = 100;
    ScenarioParams p;
    p.special_needs_fraction = 0.4;
    auto r = step(s, p);
    CHECK(r.state[Stage::Sheltered] == doctest::Approx(40.0).epsilon(1e-15));
    CHECK(r.state[Stage::SelfSettled] == doctest::Approx(60.0).epsilon(1e-15));
    CHECK(r.state[Stage::Processing] == 0.0);
}

TEST_CASE("step: nobody advances more than one stage per day") {
    PipelineState s;
    s[Stage::WantToLeave] = 50;
    ScenarioParams p;
    p.arrival_rate = p.registration_capacity = p.relocation_capacity = 1e9;
    p.special_needs_fraction = 1.0;
    auto r = step(s, p);
    CHECK(r.state[Stage::AtBorder] == 50);
    CHECK(r.state[Stage::Processing] == 0);
    CHECK(r.state[Stage::Sheltered] == 0);
}

TEST_CASE("step: parameter domain errors") {
    PipelineState s;
    ScenarioParams p;
    p.arrival_rate = -1;
    CHECK_THROWS_AS(step(s, p), ValidationError);
    p = {};
    p.special_needs_fraction = 1.5;
    try {
        step(s, p);
        FAIL("expected throw");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "special_needs_fraction");
    }
    p = {};
    p.horizon = 0;
    CHECK_THROWS_AS(step(s, p), ValidationError);
}

TEST_CASE("step: non-finite state is rejected") {
    PipelineState s;
    s[Stage::AtBorder] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(step(s, ScenarioParams{}), StateError);
    s[Stage::AtBorder] = -1;
    CHECK_THROWS_AS(step(s, ScenarioParams{}), StateError);
}

TEST_CASE("simulate: balanced pipeline reaches steady throughput") {
    ScenarioParams p;
    p.latent_demand = p.arrival_rate = p.registration_capacity = p.relocation_capacity = 100;
    p.special_needs_fraction = 1.0;
    p.horizon = 10;
    auto trace = simulate(PipelineState{}, p);
    REQUIRE(trace.states.size() == 11);

    // Hand-run of the recurrence: the pipeline fills one stage per day and is
    // full from day 4 on; relocation starts on day 5.
    const double expected[11][6] = {
        {0, 0, 0, 0, 0, 0},         {100, 0, 0, 0, 0, 0},       {100, 100, 0, 0, 0, 0},
        {100, 100, 100, 0, 0, 0},   {100, 100, 100, 100, 0, 0}, {100, 100, 100, 100, 100, 0},
        {100, 100, 100, 100, 200, 0}, {100, 100, 100, 100, 300, 0}, {100, 100, 100, 100, 400, 0},
        {100, 100, 100, 100, 500, 0}, {100, 100, 100, 100, 600, 0},
    };
    for (int d = 0; d <= 10; ++d) {
        CAPTURE(d);
        CHECK(trace.states[d].day == d);
        for (Stage s : kAllStages) CHECK(trace.states[d][s] == expected[d][index(s)]);
    }
}

TEST_CASE("simulate: horizon 1 equals a single step") {
    PipelineState init;
    init.occupancy = {10, 20, 30, 40, 50, 60};
    ScenarioParams p;
    p.latent_demand = 3;
    p.arrival_rate = 5;
    p.registration_capacity = 7;
    p.special_needs_fraction = 0.25;
    p.extra_shelter_requests = 2;
    p.relocation_capacity = 11;
    p.horizon = 1;
    auto trace = simulate(init, p);
    auto r = step(init, p);
    REQUIRE(trace.states.size() == 2);
    CHECK(trace.states[0] == init);
    CHECK(trace.states[1] == r.state);
    CHECK(trace.flows == r.flows);
}

TEST_CASE("simulate: 500/300 backlog grows linearly") {
    // Cold start: day 1 is pure arrival (500), then +200/day. The queue beyond
    // what registration clears tomorrow is 2000 on day 10.
    auto cold = simulate(with_want_to_leave(1e6), bottleneck_500_300(10));
    CHECK(cold.states[10][Stage::AtBorder] == 2300.0);
    CHECK(cold.states[10][Stage::AtBorder] - 300.0 == 2000.0);

    // Warm start with one day of registration already queued: +200 every day.
    auto init = with_want_to_leave(1e6);
    init[Stage::AtBorder] = 300;
    auto warm = simulate(init, bottleneck_500_300(10));
    for (int d = 1; d <= 10; ++d) CHECK(warm.states[d][Stage::AtBorder] - warm.states[d - 1][Stage::AtBorder] == 200.0);
    CHECK(warm.states[10][Stage::AtBorder] - warm.states[0][Stage::AtBorder] == 2000.0);
}

TEST_CASE("simulate: finite latent demand throttles arrivals") {
    ScenarioParams p;
    p.latent_demand = 40;
    p.arrival_rate = 500;
    p.horizon = 5;
    auto trace = simulate(PipelineState{}, p);
    for (int d = 2; d <= 5; ++d) CHECK(trace.states[d][Stage::AtBorder] - trace.states[d - 1][Stage::AtBorder] == 40);
}

#include "crossflow/common/error.hpp"
#include "crossflow/sim/analysis.hpp"
#include "crossflow/sim/sensitivity.hpp"

#include <doctest.h>

#include <limits>

using namespace crossflow;
using namespace crossflow::sim;

namespace {

SimulationTrace sheltered_trace(const std::vector<double>& sheltered) {
    SimulationTrace t;
    for (std::size_t d = 0; d < sheltered.size(); ++d) {
        PipelineState s;
        s.day = static_cast<int>(d);
        s[Stage::Sheltered] = sheltered[d];
        t.states.push_back(s);
    }
    return t;
}

ScenarioParams net_inflow_scenario() {
    // 100/day reach the shelter from processing plus 30 extra requests, so
    // relocation below 130/day leaves a net inflow (80/day at capacity 50).
    ScenarioParams p;
    p.latent_demand = 100;
    p.arrival_rate = 100;
    p.registration_capacity = 100;
    p.special_needs_fraction = 1.0;
    p.extra_shelter_requests = 30;
    p.relocation_capacity = 50;
    p.horizon = 30;
    return p;
}

}  // namespace

TEST_CASE("shelter_overflow: first strict exceedance and peak") {
    auto t = sheltered_trace({0, 50, 120, 200});
    auto o = shelter_overflow(t, 100);
    REQUIRE(o.has_value());
    CHECK(o->first_day == 2);
    CHECK(o->peak_exceedance == 100.0);
    CHECK(o->peak_day == 3);
}

TEST_CASE("shelter_overflow: absent capacity never overflows") {
    auto t = sheltered_trace({0, 1e9});
    CHECK_FALSE(shelter_overflow(t, std::numeric_limits<double>::infinity()).has_value());
}

TEST_CASE("shelter_overflow: occupancy equal to capacity is not an overflow") {
    auto t = sheltered_trace({100, 100, 100});
    CHECK_FALSE(shelter_overflow(t, 100).has_value());
}

TEST_CASE("bottlenecks: registration shortfall flags the border") {
    PipelineState init;
    init[Stage::WantToLeave] = 1e6;
    ScenarioParams p;
    p.arrival_rate = 500;
    p.registration_capacity = 300;
    p.horizon = 10;
    auto b = bottlenecks(simulate(init, p));
    REQUIRE(b.size() == 1);
    CHECK(b[0].stage == Stage::AtBorder);
    CHECK(b[0].growth_per_day == 200.0);
}

TEST_CASE("bottlenecks: zero-rate scenario has none") {
    PipelineState init;
    init.occupancy = {5, 5, 0, 5, 5, 5};
    ScenarioParams p;
    p.horizon = 5;
    CHECK(bottlenecks(simulate(init, p)).empty());
}

TEST_CASE("bottlenecks: balanced pipeline has none") {
    ScenarioParams p;
    p.latent_demand = p.arrival_rate = p.registration_capacity = p.relocation_capacity = 100;
    p.special_needs_fraction = 1.0;
    p.horizon = 10;
    CHECK(bottlenecks(simulate(PipelineState{}, p)).empty());
}

TEST_CASE("bottlenecks: sorted by growth, terminal pools excluded") {
    PipelineState init;
    init[Stage::WantToLeave] = 1e6;
    ScenarioParams p;
    p.arrival_rate = 500;
    p.registration_capacity = 300;
    p.special_needs_fraction = 1.0;
    p.relocation_capacity = 250;
    p.horizon = 20;
    auto b = bottlenecks(simulate(init, p));
    REQUIRE(b.size() == 2);
    CHECK(b[0].stage == Stage::AtBorder);
    CHECK(b[0].growth_per_day == doctest::Approx(200));
    CHECK(b[1].stage == Stage::Sheltered);
    CHECK(b[1].growth_per_day == doctest::Approx(50));
}

TEST_CASE("bottlenecks: trace too short") {
    SimulationTrace t;
    t.states.push_back(PipelineState{});
    CHECK_THROWS_AS(bottlenecks(t), ValidationError);
}

TEST_CASE("evaluate_triggers") {
    auto t = sheltered_trace({0, 50, 120});
    SUBCASE("single rule") {
        auto hits = evaluate_triggers(t, {{"open-shelter", Stage::Sheltered, 100, "Open overflow shelter"}});
        REQUIRE(hits.size() == 1);
        CHECK(hits[0] == TriggerHit{"open-shelter", 2});
    }
    SUBCASE("empty rule list") { CHECK(evaluate_triggers(t, {}).empty()); }
    SUBCASE("only the reachable threshold fires") {
        auto hits = evaluate_triggers(t, {{"a", Stage::Sheltered, 50, ""}, {"b", Stage::Sheltered, 1e9, ""}});
        REQUIRE(hits.size() == 1);
        CHECK(hits[0] == TriggerHit{"a", 2});
    }
    SUBCASE("duplicate ids") {
        CHECK_THROWS_AS(evaluate_triggers(t, {{"a", Stage::Sheltered, 1, ""}, {"a", Stage::Sheltered, 2, ""}}),
                        ValidationError);
    }
    SUBCASE("other metrics") {
        auto hits = evaluate_triggers(t, {{"border", Stage::AtBorder, 0, ""}});
        CHECK(hits.empty());
    }
}

TEST_CASE("sensitivity_sweep: relocation capacity lowers shelter occupancy") {
    auto base = net_inflow_scenario();
    auto sweep = sensitivity_sweep(base, "relocation_capacity", {100, 0, 50}, PipelineState{});
    REQUIRE(sweep.sheltered.size() == 3);
    const auto& s0 = sweep.sheltered.at(0);
    const auto& s50 = sweep.sheltered.at(50);
    const auto& s100 = sweep.sheltered.at(100);
    for (std::size_t d = 0; d < s0.size(); ++d) {
        CHECK(s0[d] >= s50[d]);
        CHECK(s50[d] >= s100[d]);
    }
    CHECK(s0.back() > s100.back());
}

TEST_CASE("sensitivity_sweep: one-value grid equals plain simulate") {
    auto base = net_inflow_scenario();
    auto sweep = sensitivity_sweep(base, "relocation_capacity", {base.relocation_capacity}, PipelineState{});
    REQUIRE(sweep.sheltered.size() == 1);
    CHECK(sweep.sheltered.begin()->second == simulate(PipelineState{}, base).series(Stage::Sheltered));
}

TEST_CASE("sensitivity_sweep: special-needs fraction 0 and 1 bracket shelter inflow") {
    auto base = net_inflow_scenario();
    base.extra_shelter_requests = 0;
    base.relocation_capacity = 0;
    auto sweep = sensitivity_sweep(base, "special_needs_fraction", {0, 1}, PipelineState{});
    double processed = 0;
    for (const auto& f : simulate(PipelineState{}, base).flows) {
        if (f.from == Stage::Processing) processed += f.amount;
    }
    CHECK(sweep.sheltered.at(0).back() == 0.0);
    CHECK(sweep.sheltered.at(1).back() == doctest::Approx(processed).epsilon(1e-12));
}

TEST_CASE("sensitivity_sweep: errors") {
    auto base = net_inflow_scenario();
    CHECK_THROWS_AS(sensitivity_sweep(base, "shelter_capacity", {1}, PipelineState{}), ValidationError);
    CHECK_THROWS_AS(sensitivity_sweep(base, "bogus", {1}, PipelineState{}), ValidationError);
    try {
        sensitivity_sweep(base, "special_needs_fraction", {0.5, 2.0}, PipelineState{});
        FAIL("expected throw");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "grid[1]");
    }
}

TEST_CASE("snapshot_at") {
    auto base = net_inflow_scenario();
    PipelineState init;
    init[Stage::Sheltered] = 42;
    auto sweep = sensitivity_sweep(base, "relocation_capacity", {0, 50, 100}, init);

    for (const auto& [value, occ] : snapshot_at(sweep, 0)) CHECK(occ == 42);

    auto last = snapshot_at(sweep, base.horizon);
    CHECK(last.at(0) >= last.at(50));
    CHECK(last.at(50) >= last.at(100));

    auto single = sensitivity_sweep(base, "relocation_capacity", {50}, init);
    CHECK(snapshot_at(single, base.horizon).at(50) == single.sheltered.at(50).back());

    CHECK_THROWS_AS(snapshot_at(sweep, base.horizon + 1), ValidationError);
    CHECK_THROWS_AS(snapshot_at(sweep, -1), ValidationError);
}

#include "crossflow/sim/scenario_io.hpp"

#include "crossflow/common/error.hpp"
#include "crossflow/common/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace crossflow::sim {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(std::string_view text, const std::string& key) {
    if (text == "inf" || text == "+inf") return HUGE_VAL;
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ValidationError(key, "value for '" + key + "' is not a number: '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

ScenarioFile parse_scenario(std::string_view text) {
    ScenarioFile sf;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("line " + std::to_string(line_no), "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        std::string_view raw = trim(line.substr(eq + 1));
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') raw = raw.substr(1, raw.size() - 2);
        if (!seen.insert(key).second) throw ValidationError(key, "key '" + key + "' repeated");

        auto& p = sf.params;
        if (key == "latent_demand") p.latent_demand = parse_number(raw, key);
        else if (key == "arrival_rate") p.arrival_rate = parse_number(raw, key);
        else if (key == "registration_capacity") p.registration_capacity = parse_number(raw, key);
        else if (key == "special_needs_fraction") p.special_needs_fraction = parse_number(raw, key);
        else if (key == "extra_shelter_requests") p.extra_shelter_requests = parse_number(raw, key);
        else if (key == "relocation_capacity") p.relocation_capacity = parse_number(raw, key);
        else if (key == "shelter_capacity") p.shelter_capacity = parse_number(raw, key);
        else if (key == "horizon") {
            const double h = parse_number(raw, key);
            if (h != std::floor(h) || h < 1 || h > 1e6) throw ValidationError(key, "horizon must be a positive integer");
            p.horizon = static_cast<int>(h);
        } else if (auto stage = parse_stage(key)) {
            const double v = parse_number(raw, key);
            if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(key, "initial occupancy must be finite and >= 0");
            sf.initial[*stage] = v;
        } else {
            throw ValidationError(key, "unknown key '" + key + "'");
        }
    }
    if (!seen.count("horizon")) throw ValidationError("horizon", "horizon is required");
    validate(sf.params);
    return sf;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open scenario file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string to_scenario_text(const ScenarioFile& sf) {
    const auto& p = sf.params;
    std::ostringstream out;
    out << "latent_demand = " << format_number(p.latent_demand) << '\n'
        << "arrival_rate = " << format_number(p.arrival_rate) << '\n'
        << "registration_capacity = " << format_number(p.registration_capacity) << '\n'
        << "special_needs_fraction = " << format_number(p.special_needs_fraction) << '\n'
        << "extra_shelter_requests = " << format_number(p.extra_shelter_requests) << '\n'
        << "relocation_capacity = " << format_number(p.relocation_capacity) << '\n'
        << "horizon = " << p.horizon << '\n';
    if (std::isfinite(p.shelter_capacity)) out << "shelter_capacity = " << format_number(p.shelter_capacity) << '\n';
    for (Stage s : kAllStages) {
        if (sf.initial[s] != 0.0) out << stage_key(s) << " = " << format_number(sf.initial[s]) << '\n';
    }
    return out.str();
}

void write_occupancy_csv(std::ostream& out, const SimulationTrace& trace) {
    out << "day,stage,occupancy\n";
    for (const auto& st : trace.states) {
        for (Stage s : kAllStages) {
            out << st.day << ',' << stage_name(s) << ',' << format_number(st[s]) << '\n';
        }
    }
}

void write_flows_csv(std::ostream& out, const SimulationTrace& trace) {
    out << "day,from,to,amount\n";
    for (const auto& f : trace.flows) {
        out << f.day << ',' << stage_name(f.from) << ',' << stage_name(f.to) << ',' << format_number(f.amount)
            << '\n';
    }
}

}  // namespace crossflow::sim

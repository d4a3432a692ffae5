#include "wrsn/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace wrsn {

const char* to_string(AttackTier tier) {
    switch (tier) {
        case AttackTier::None: return "none";
        case AttackTier::LAI: return "LAI";
        case AttackTier::MAI: return "MAI";
        case AttackTier::HAI: return "HAI";
        case AttackTier::Custom: return "custom";
    }
    return "?";
}

AttackTier parse_attack_tier(const std::string& text) {
    if (text == "none") return AttackTier::None;
    if (text == "LAI" || text == "lai") return AttackTier::LAI;
    if (text == "MAI" || text == "mai") return AttackTier::MAI;
    if (text == "HAI" || text == "hai") return AttackTier::HAI;
    if (text == "custom") return AttackTier::Custom;
    throw ConfigError(fmt::format("unknown attack tier '{}'", text));
}

FactorRange tier_fraction_range(AttackTier tier) {
    switch (tier) {
        case AttackTier::LAI: return {0.05, 0.10};
        case AttackTier::MAI: return {0.20, 0.30};
        case AttackTier::HAI: return {0.40, 0.50};
        case AttackTier::None: return {0.0, 0.0};
        case AttackTier::Custom: return {0.0, 0.999};
    }
    return {0.0, 0.0};
}

AttackSpec default_attack_spec(AttackTier tier) {
    AttackSpec spec;
    spec.tier = tier;
    switch (tier) {
        case AttackTier::LAI:
            spec.flood = {2.0, 3.0};
            spec.disruption = {0.7, 0.7};
            spec.energy_anomaly = {0.5, 0.5};
            break;
        case AttackTier::MAI:
            spec.flood = {3.0, 5.0};
            spec.disruption = {0.5, 0.5};
            spec.energy_anomaly = {0.3, 0.3};
            break;
        case AttackTier::HAI:
            spec.flood = {5.0, 8.0};
            spec.disruption = {0.3, 0.3};
            spec.energy_anomaly = {0.1, 0.1};
            break;
        case AttackTier::None:
            spec.intensity_fraction = 0.0;
            break;
        case AttackTier::Custom:
            break;
    }
    return spec;
}

ValidationReport validate_attack_spec(const AttackSpec& spec) {
    ValidationReport r;
    if (spec.intensity_fraction) {
        const double f = *spec.intensity_fraction;
        if (!(f >= 0.0 && f < 1.0)) r.add(fmt::format("attack fraction must lie in [0,1) (got {})", f));
        if (spec.tier == AttackTier::LAI || spec.tier == AttackTier::MAI || spec.tier == AttackTier::HAI) {
            const auto range = tier_fraction_range(spec.tier);
            if (f < range.low - 1e-12 || f > range.high + 1e-12)
                r.add(fmt::format("{} requires a fraction in [{}, {}] (got {})", to_string(spec.tier), range.low,
                                  range.high, f));
        }
        if (spec.tier == AttackTier::None && f != 0.0) r.add("tier 'none' requires fraction 0");
    }
    auto check_range = [&](const FactorRange& range, const char* name, double min_exclusive, double max_inclusive) {
        if (!(std::isfinite(range.low) && std::isfinite(range.high) && range.low <= range.high))
            r.add(fmt::format("{} range must be finite and ordered", name));
        else if (!(range.low > min_exclusive && range.high <= max_inclusive))
            r.add(fmt::format("{} range [{}, {}] out of bounds", name, range.low, range.high));
    };
    if (spec.flood.low < 1.0) r.add("flood factor must be >= 1");
    check_range(spec.flood, "flood", 0.0, 1e6);
    if (!(std::isfinite(spec.energy_anomaly.low) && std::isfinite(spec.energy_anomaly.high) &&
          spec.energy_anomaly.low >= 0.0 && spec.energy_anomaly.low <= spec.energy_anomaly.high))
        r.add("energy anomaly range must be finite, ordered and >= 0");
    check_range(spec.disruption, "disruption efficiency", 0.0, 1.0);
    if (!(std::isfinite(spec.active_from) && spec.active_from >= 0.0)) r.add("attack active_from must be >= 0");
    if (!(std::isfinite(spec.baseline_request_rate) && spec.baseline_request_rate >= 0.0))
        r.add("baseline request rate must be >= 0");
    return r;
}

namespace {

void take_range(KeyValueFile& kv, const std::string& prefix, FactorRange& range) {
    double v = 0.0;
    if (kv.take_double(prefix, v)) range = {v, v};
    kv.take_double(prefix + "_min", range.low);
    kv.take_double(prefix + "_max", range.high);
}

}  // namespace

void read_attack_spec(KeyValueFile& kv, AttackSpec& spec) {
    std::string tier;
    if (kv.take("attack_tier", tier)) spec = default_attack_spec(parse_attack_tier(tier));
    double fraction = 0.0;
    if (kv.take_double("attack_fraction", fraction)) spec.intensity_fraction = fraction;
    take_range(kv, "attack_flood_factor", spec.flood);
    take_range(kv, "attack_energy_factor", spec.energy_anomaly);
    take_range(kv, "attack_disruption_efficiency", spec.disruption);
    kv.take_double("attack_active_from", spec.active_from);
    kv.take_double("attack_baseline_request_rate", spec.baseline_request_rate);
    kv.take_u64("attack_seed", spec.seed);
}

bool GroundTruth::contains(int node_id) const {
    return std::binary_search(malicious.begin(), malicious.end(), node_id);
}

double honest_request_rate(const NetworkConfig& config) {
    const double usable = config.node_capacity - config.energy_threshold();
    return usable > 0.0 ? config.node_consumption_rate / usable : 0.0;
}

GroundTruth assign_malicious_nodes(SimulationState& state, const AttackSpec& spec, std::vector<std::string>* warnings) {
    GroundTruth truth;
    const std::uint64_t seed = spec.seed != 0 ? spec.seed : state.config.rng_seed * 0x9E3779B97F4A7C15ULL + 0x5A17;
    Rng rng(seed);

    double fraction = 0.0;
    if (spec.intensity_fraction) {
        fraction = *spec.intensity_fraction;
    } else {
        const auto range = tier_fraction_range(spec.tier);
        fraction = std::uniform_real_distribution<double>(range.low, range.high)(rng);
    }
    truth.fraction = fraction;

    const int r = static_cast<int>(state.nodes.size());
    const int count = static_cast<int>(std::floor(fraction * r + 1e-9));
    if (count < 1) {
        if (fraction > 0.0 && warnings)
            warnings->push_back(fmt::format("attack fraction {} selects no node out of {}", fraction, r));
        return truth;
    }

    std::vector<int> ids(r);
    std::iota(ids.begin(), ids.end(), 0);
    // Partial Fisher-Yates keeps the draw count independent of r - count.
    for (int i = 0; i < count; ++i) {
        const int j = std::uniform_int_distribution<int>(i, r - 1)(rng);
        std::swap(ids[i], ids[j]);
    }
    ids.resize(count);
    std::sort(ids.begin(), ids.end());

    auto draw = [&](const FactorRange& range) {
        return range.low == range.high ? range.low : std::uniform_real_distribution<double>(range.low, range.high)(rng);
    };
    for (int id : ids) {
        AttackProfile p;
        p.node_id = id;
        p.request_flood_factor = draw(spec.flood);
        p.energy_anomaly_factor = draw(spec.energy_anomaly);
        p.disruption_efficiency = draw(spec.disruption);
        p.active_from = spec.active_from;
        state.nodes[id].attack = p;
    }
    truth.malicious = std::move(ids);
    return truth;
}

std::vector<ChargingRequest> apply_request_flood(const AttackProfile& profile, FloodProcess& process, double clock,
                                                 double dt, double baseline_rate, double energy_threshold,
                                                 Rng& rng) {
    std::vector<ChargingRequest> out;
    const double rate = profile.request_flood_factor * baseline_rate;
    if (!profile.active(clock) || !(rate > 0.0)) return out;
    std::exponential_distribution<double> gap(rate);
    if (process.next_arrival < 0.0) process.next_arrival = std::max(profile.active_from, clock - dt) + gap(rng);
    const double forged = std::nextafter(energy_threshold, 0.0);
    while (process.next_arrival <= clock) {
        out.push_back({profile.node_id, process.next_arrival, forged});
        process.next_arrival += gap(rng);
    }
    return out;
}

double apply_energy_anomaly(const AttackProfile& profile, double consumption_rate, double dt) {
    return profile.energy_anomaly_factor * consumption_rate * dt;
}

double apply_charging_disruption(const AttackProfile& profile, double sent) {
    return profile.disruption_efficiency * sent;
}

}  // namespace wrsn

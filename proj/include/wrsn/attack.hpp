#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wrsn/network.hpp"

namespace wrsn {

enum class AttackTier { None, LAI, MAI, HAI, Custom };

const char* to_string(AttackTier tier);
AttackTier parse_attack_tier(const std::string& text);

struct FactorRange {
    double low = 1.0;
    double high = 1.0;
};

/// How compromised nodes are chosen and how they misbehave.
struct AttackSpec {
    AttackTier tier = AttackTier::None;
    /// Fraction of compromised nodes; when unset it is drawn uniformly from
    /// the tier's range.
    std::optional<double> intensity_fraction;
    FactorRange flood{1.0, 1.0};
    FactorRange energy_anomaly{1.0, 1.0};
    FactorRange disruption{1.0, 1.0};
    double active_from = 500.0;  // s
    /// Honest per-node request rate (1/s); 0 derives it from the energy model.
    double baseline_request_rate = 0.0;
    /// 0 derives the attack stream from the network seed.
    std::uint64_t seed = 0;
};

/// Default factor table per tier; `Custom` and `None` are neutral.
AttackSpec default_attack_spec(AttackTier tier);
FactorRange tier_fraction_range(AttackTier tier);

ValidationReport validate_attack_spec(const AttackSpec& spec);
void read_attack_spec(KeyValueFile& kv, AttackSpec& spec);

/// Ids of compromised nodes, sorted. Only the metrics reporter should read it.
struct GroundTruth {
    std::vector<int> malicious;
    double fraction = 0.0;

    bool contains(int node_id) const;
};

/// Samples floor(fraction * r) distinct nodes and attaches profiles drawn
/// from the tier's factor ranges. Appends a warning when the fraction is
/// positive but selects nobody.
GroundTruth assign_malicious_nodes(SimulationState& state, const AttackSpec& spec,
                                   std::vector<std::string>* warnings = nullptr);

/// Honest request rate implied by constant drain from full to E_th.
double honest_request_rate(const NetworkConfig& config);

/// Fake requests due in (clock - dt, clock]. Arrivals follow a Poisson process
/// of rate flood_factor * baseline_rate; every forged request claims a
/// residual just below E_th. Inactive profiles emit nothing.
std::vector<ChargingRequest> apply_request_flood(const AttackProfile& profile, FloodProcess& process,
                                                 double clock, double dt, double baseline_rate,
                                                 double energy_threshold, Rng& rng);

double apply_energy_anomaly(const AttackProfile& profile, double consumption_rate, double dt);
double apply_charging_disruption(const AttackProfile& profile, double sent);

}  // namespace wrsn

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wrsn {

/// Planar coordinates in meters.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

/// Physical parameters of one network instance. Defaults reproduce the
/// evaluation setup: 0.5 J nodes, 10 kJ chargers at 0.05 J/s, 5 m/s, 5 J/m.
struct NetworkConfig {
    double area_side = 100.0;                    // m, square region
    int node_count = 100;
    double comm_range = 50.0;                    // m
    double sense_range = 25.0;                   // m
    double node_capacity = 0.5;                  // J
    double energy_threshold_fraction = 0.3;      // E_th = fraction * capacity
    double node_consumption_rate = 1e-4;         // J/s
    int mcv_count = 6;
    double mcv_capacity = 10'000.0;              // J
    double mcv_min_energy_fraction = 0.1;        // CE_th base = fraction * mcv_capacity
    double charging_rate = 0.05;                 // J/s
    double mcv_speed = 5.0;                      // m/s
    double travel_cost = 5.0;                    // J/m
    double circumradius = 0.0;                   // C_c, m; 0 selects area_side * sqrt(2)
    double time_step = 1.0;                      // s
    double horizon = 10'000.0;                   // s
    double roaming_pause = 300.0;                // s spent idle at each waypoint
    std::uint64_t rng_seed = 1;

    double energy_threshold() const { return energy_threshold_fraction * node_capacity; }
    double mcv_reserve_base() const { return mcv_min_energy_fraction * mcv_capacity; }
    Point depot() const { return {area_side / 2.0, area_side / 2.0}; }
    double effective_circumradius() const;
    long step_count() const;
};

/// Fusion weights for the four maliciousness sub-scores.
struct Weights {
    double request = 0.25;
    double energy = 0.25;
    double reputation = 0.25;
    double efficiency = 0.25;
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    void add(std::string message) { violations.push_back(std::move(message)); }
    void merge(const ValidationReport& other);
    std::string to_string() const;
};

ValidationReport validate_config(const NetworkConfig& config);
ValidationReport validate_weights(const Weights& weights);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parsed `key = value` file. Lines starting with '#' and blank lines are
/// ignored; trailing `# ...` comments are stripped. Duplicate keys are an error.
class KeyValueFile {
public:
    static KeyValueFile parse(const std::string& text, const std::string& origin = "<string>");
    static KeyValueFile load(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    /// Moves the value for `key` into `out` and forgets the key; false when absent.
    bool take(const std::string& key, std::string& out);
    bool take_double(const std::string& key, double& out);
    bool take_int(const std::string& key, int& out);
    bool take_u64(const std::string& key, std::uint64_t& out);
    bool take_bool(const std::string& key, bool& out);

    /// Throws ConfigError naming every key nobody consumed.
    void require_consumed() const;

    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, std::string> entries_;
    std::string origin_;
};

/// Reads the network keys from `kv` into `config`, leaving other keys alone.
void read_network_config(KeyValueFile& kv, NetworkConfig& config);
void read_weights(KeyValueFile& kv, Weights& weights);

std::vector<std::string> split_list(const std::string& value);

}  // namespace wrsn

#include "wrsn/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace wrsn {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double NetworkConfig::effective_circumradius() const {
    return circumradius > 0.0 ? circumradius : area_side * std::sqrt(2.0);
}

long NetworkConfig::step_count() const {
    if (!(time_step > 0.0) || !(horizon >= 0.0)) return 0;
    return std::lround(std::floor(horizon / time_step + 1e-9));
}

void ValidationReport::merge(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

std::string ValidationReport::to_string() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += v;
    }
    return out;
}

namespace {

void require_positive(ValidationReport& r, double value, const char* name) {
    if (!(std::isfinite(value) && value > 0.0)) r.add(fmt::format("{} must be positive (got {})", name, value));
}

void require_open_unit(ValidationReport& r, double value, const char* name) {
    if (!(value > 0.0 && value < 1.0)) r.add(fmt::format("{} must lie in (0,1) (got {})", name, value));
}

}  // namespace

ValidationReport validate_config(const NetworkConfig& c) {
    ValidationReport r;
    require_positive(r, c.area_side, "area_side");
    require_positive(r, c.comm_range, "comm_range");
    require_positive(r, c.sense_range, "sense_range");
    require_positive(r, c.node_capacity, "node_capacity");
    require_open_unit(r, c.energy_threshold_fraction, "energy_threshold_fraction");
    require_positive(r, c.node_consumption_rate, "node_consumption_rate");
    require_positive(r, c.mcv_capacity, "mcv_capacity");
    require_open_unit(r, c.mcv_min_energy_fraction, "mcv_min_energy_fraction");
    require_positive(r, c.charging_rate, "charging_rate");
    require_positive(r, c.mcv_speed, "mcv_speed");
    require_positive(r, c.travel_cost, "travel_cost");
    require_positive(r, c.time_step, "time_step");
    if (!(std::isfinite(c.horizon) && c.horizon >= 0.0))
        r.add(fmt::format("horizon must be non-negative (got {})", c.horizon));
    if (!(std::isfinite(c.roaming_pause) && c.roaming_pause >= 0.0))
        r.add(fmt::format("roaming_pause must be non-negative (got {})", c.roaming_pause));
    if (c.node_count < 1 || c.node_count > 100'000)
        r.add(fmt::format("node_count must lie in [1, 100000] (got {})", c.node_count));
    if (c.mcv_count < 1 || c.mcv_count > std::max(c.node_count, 1))
        r.add(fmt::format("mcv_count must lie in [1, node_count] (got {})", c.mcv_count));
    if (std::isfinite(c.comm_range) && std::isfinite(c.sense_range) && !(c.comm_range > c.sense_range))
        r.add("comm_range must exceed sense_range");
    if (!(std::isfinite(c.circumradius) && c.circumradius >= 0.0)) {
        r.add(fmt::format("circumradius must be non-negative (got {})", c.circumradius));
    } else if (c.area_side > 0.0 && c.effective_circumradius() > c.area_side * std::sqrt(2.0) * (1.0 + 1e-12)) {
        r.add("circumradius must not exceed area_side * sqrt(2)");
    }
    return r;
}

ValidationReport validate_weights(const Weights& w) {
    ValidationReport r;
    for (double v : {w.request, w.energy, w.reputation, w.efficiency}) {
        if (!(std::isfinite(v) && v >= 0.0)) {
            r.add("weights must be non-negative");
            return r;
        }
    }
    const double sum = w.request + w.energy + w.reputation + w.efficiency;
    if (std::abs(sum - 1.0) > 1e-12) r.add(fmt::format("weights must sum to 1 (got {})", sum));
    return r;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", origin, line_no));
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError(fmt::format("{}:{}: empty key", origin, line_no));
        if (!kv.entries_.emplace(key, value).second)
            throw ConfigError(fmt::format("{}:{}: duplicate key '{}'", origin, line_no, key));
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path);
}

bool KeyValueFile::take(const std::string& key, std::string& out) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return false;
    out = it->second;
    entries_.erase(it);
    return true;
}

bool KeyValueFile::take_double(const std::string& key, double& out) {
    std::string raw;
    if (!take(key, raw)) return false;
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        out = v;
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("{}: '{}' is not a number: '{}'", origin_, key, raw));
    }
    return true;
}

bool KeyValueFile::take_int(const std::string& key, int& out) {
    std::string raw;
    if (!take(key, raw)) return false;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc{} || ptr != raw.data() + raw.size())
        throw ConfigError(fmt::format("{}: '{}' is not an integer: '{}'", origin_, key, raw));
    out = v;
    return true;
}

bool KeyValueFile::take_u64(const std::string& key, std::uint64_t& out) {
    std::string raw;
    if (!take(key, raw)) return false;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc{} || ptr != raw.data() + raw.size())
        throw ConfigError(fmt::format("{}: '{}' is not an unsigned integer: '{}'", origin_, key, raw));
    out = v;
    return true;
}

bool KeyValueFile::take_bool(const std::string& key, bool& out) {
    std::string raw;
    if (!take(key, raw)) return false;
    if (raw == "on" || raw == "true" || raw == "1" || raw == "yes") {
        out = true;
    } else if (raw == "off" || raw == "false" || raw == "0" || raw == "no") {
        out = false;
    } else {
        throw ConfigError(fmt::format("{}: '{}' expects on/off: '{}'", origin_, key, raw));
    }
    return true;
}

void KeyValueFile::require_consumed() const {
    if (entries_.empty()) return;
    std::string keys;
    for (const auto& [k, v] : entries_) {
        if (!keys.empty()) keys += ", ";
        keys += k;
    }
    throw ConfigError(fmt::format("{}: unknown key(s): {}", origin_, keys));
}

void read_network_config(KeyValueFile& kv, NetworkConfig& c) {
    kv.take_double("area_side", c.area_side);
    kv.take_int("node_count", c.node_count);
    kv.take_double("comm_range", c.comm_range);
    kv.take_double("sense_range", c.sense_range);
    kv.take_double("node_capacity", c.node_capacity);
    kv.take_double("energy_threshold_fraction", c.energy_threshold_fraction);
    kv.take_double("node_consumption_rate", c.node_consumption_rate);
    kv.take_int("mcv_count", c.mcv_count);
    kv.take_double("mcv_capacity", c.mcv_capacity);
    kv.take_double("mcv_min_energy_fraction", c.mcv_min_energy_fraction);
    kv.take_double("charging_rate", c.charging_rate);
    kv.take_double("mcv_speed", c.mcv_speed);
    kv.take_double("travel_cost", c.travel_cost);
    kv.take_double("circumradius", c.circumradius);
    kv.take_double("time_step", c.time_step);
    kv.take_double("horizon", c.horizon);
    kv.take_double("roaming_pause", c.roaming_pause);
    kv.take_u64("rng_seed", c.rng_seed);
}

void read_weights(KeyValueFile& kv, Weights& w) {
    kv.take_double("weight_request", w.request);
    kv.take_double("weight_energy", w.energy);
    kv.take_double("weight_reputation", w.reputation);
    kv.take_double("weight_efficiency", w.efficiency);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace wrsn

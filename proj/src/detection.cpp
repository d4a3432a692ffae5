#include "wrsn/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "wrsn/attack.hpp"
#include "wrsn/stats.hpp"

namespace wrsn::detect {

const char* to_string(ScoreMode mode) { return mode == ScoreMode::Literal ? "literal" : "tail"; }

ScoreMode parse_score_mode(const std::string& text) {
    if (text == "literal") return ScoreMode::Literal;
    if (text == "tail") return ScoreMode::Tail;
    throw ConfigError(fmt::format("unknown score mode '{}' (expected literal|tail)", text));
}

namespace {

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

double request_pattern_score(long count, double expected_rate, ScoreMode mode) {
    if (count < 0) throw std::invalid_argument("request_pattern_score: negative count");
    if (!(expected_rate > 0.0 && std::isfinite(expected_rate)))
        throw std::invalid_argument("request_pattern_score: rate must be positive");
    if (mode == ScoreMode::Literal) return clamp_unit(1.0 - stats::poisson_pmf(count, expected_rate));
    return clamp_unit(stats::poisson_central_mass(count, expected_rate));
}

double energy_score(double observed, double mean, double variance, ScoreMode mode) {
    if (!(variance > 0.0 && std::isfinite(variance))) throw std::invalid_argument("energy_score: variance below floor");
    if (mode == ScoreMode::Literal) return clamp_unit(1.0 - stats::normal_pdf(observed, mean, variance));
    return clamp_unit(stats::normal_central_mass((observed - mean) / std::sqrt(variance)));
}

double efficiency_score(double efficiency, double mean, double variance, ScoreMode mode) {
    return energy_score(efficiency, mean, variance, mode);
}

BetaParams update_reputation(BetaParams params, Outcome outcome) {
    if (outcome == Outcome::Consistent) {
        params.alpha += 1.0;
    } else {
        params.beta += 1.0;
    }
    return params;
}

double reputation_score(double level, BetaParams reference, ScoreMode mode) {
    if (!(reference.alpha > 0.0 && reference.beta > 0.0))
        throw std::invalid_argument("reputation_score: Beta parameters must be positive");
    constexpr double eps = 1e-9;
    const double r = std::clamp(level, eps, 1.0 - eps);
    if (mode == ScoreMode::Literal) return clamp_unit(1.0 - stats::beta_pdf(r, reference.alpha, reference.beta));
    return clamp_unit(1.0 - stats::beta_mode_tail(r, reference.alpha, reference.beta));
}

std::optional<double> charging_efficiency(double received, double sent) {
    if (!(sent > 0.0)) return std::nullopt;
    return std::clamp(received / sent, 0.0, 1.0);
}

double combined_score(const ScoreVector& v, const Weights& w) {
    for (double c : {v.request, v.energy, v.reputation, v.efficiency})
        if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("combined_score: component outside [0,1]");
    if (!validate_weights(w).ok()) throw std::invalid_argument("combined_score: invalid weights");
    const double m = w.request * v.request + w.energy * v.energy + w.reputation * v.reputation +
                     w.efficiency * v.efficiency;
    return clamp_unit(m);
}

bool detect(double score, double threshold) { return score > threshold; }

// --- reputation chain ---------------------------------------------------

ReputationChain::ReputationChain(std::vector<std::vector<double>> transition) : transition_(std::move(transition)) {
    const std::size_t n = transition_.size();
    if (n < 2) throw std::invalid_argument("ReputationChain: need at least two states");
    for (const auto& row : transition_) {
        if (row.size() != n) throw std::invalid_argument("ReputationChain: matrix must be square");
        double sum = 0.0;
        for (double p : row) {
            if (!(p >= 0.0)) throw std::invalid_argument("ReputationChain: negative transition probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("ReputationChain: row does not sum to 1");
    }
}

ReputationChain ReputationChain::sticky(int levels) {
    std::vector<std::vector<double>> p(levels, std::vector<double>(levels, 0.0));
    for (int i = 0; i < levels; ++i) {
        p[i][i] = 0.8;
        const int down = std::max(0, i - 1);
        const int up = std::min(levels - 1, i + 1);
        p[i][down] += 0.1;
        p[i][up] += 0.1;
    }
    return ReputationChain(std::move(p));
}

double ReputationChain::level_value(int state) const {
    return static_cast<double>(state) / static_cast<double>(levels() - 1);
}

int ReputationChain::nearest_level(double value) const {
    const double scaled = std::clamp(value, 0.0, 1.0) * (levels() - 1);
    return static_cast<int>(std::lround(scaled));
}

int ReputationChain::transition(int current, double observed_level, double blend, Rng& rng) const {
    const auto& r = row(current);
    std::discrete_distribution<int> pick(r.begin(), r.end());
    const int sampled = pick(rng);
    if (blend <= 0.0) return sampled;
    const double observed = level_value(nearest_level(observed_level));
    return nearest_level((1.0 - blend) * level_value(sampled) + blend * observed);
}

std::vector<double> ReputationChain::stationary_distribution() const {
    // Solve pi (P - I) = 0 with sum(pi) = 1 by Gaussian elimination on the
    // transposed system, replacing the last equation by the normalization.
    const int n = levels();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = transition_[j][i] - (i == j ? 1.0 : 0.0);
    }
    for (int j = 0; j < n; ++j) a[n - 1][j] = 1.0;
    a[n - 1][n] = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        if (std::abs(a[col][col]) < 1e-300) throw std::runtime_error("stationary distribution is not unique");
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> pi(n);
    for (int i = 0; i < n; ++i) pi[i] = a[i][n] / a[i][i];
    return pi;
}

// --- configuration --------------------------------------------------------

ValidationReport validate_detector_config(const DetectorConfig& c) {
    ValidationReport r = validate_weights(c.weights);
    if (!(c.threshold > 0.0 && c.threshold < 1.0)) r.add("detection threshold must lie in (0,1)");
    if (c.warmup_windows < 1) r.add("warmup_windows must be >= 1");
    if (c.baseline_windows < 1) r.add("baseline_windows must be >= 1");
    if (c.request_window_ticks < 1) r.add("request_window_ticks must be >= 1");
    if (!(c.request_rate_floor >= 0.0)) r.add("request_rate_floor must be >= 0");
    if (!(c.energy_variance_floor > 0.0)) r.add("energy_variance_floor must be positive");
    if (!(c.efficiency_variance_floor > 0.0)) r.add("efficiency_variance_floor must be positive");
    if (!(c.outcome_threshold > 0.0 && c.outcome_threshold < 1.0)) r.add("outcome_threshold must lie in (0,1)");
    if (c.chain_levels < 2) r.add("chain_levels must be >= 2");
    if (!(c.chain_blend >= 0.0 && c.chain_blend <= 1.0)) r.add("chain_blend must lie in [0,1]");
    return r;
}

void read_detector_config(KeyValueFile& kv, DetectorConfig& c) {
    std::string mode;
    if (kv.take("score_mode", mode)) c.mode = parse_score_mode(mode);
    read_weights(kv, c.weights);
    kv.take_double("detection_threshold", c.threshold);
    kv.take_int("warmup_windows", c.warmup_windows);
    kv.take_int("baseline_windows", c.baseline_windows);
    kv.take_int("request_window_ticks", c.request_window_ticks);
    kv.take_double("request_rate_floor", c.request_rate_floor);
    kv.take_double("energy_variance_floor", c.energy_variance_floor);
    kv.take_double("efficiency_prior_mean", c.efficiency_prior_mean);
    kv.take_double("efficiency_variance_floor", c.efficiency_variance_floor);
    kv.take_double("outcome_threshold", c.outcome_threshold);
    kv.take_bool("chain_mode", c.chain_mode);
    kv.take_int("chain_levels", c.chain_levels);
    kv.take_double("chain_blend", c.chain_blend);
}

double model_request_floor(const NetworkConfig& network, double controller_interval, int request_window_ticks) {
    return honest_request_rate(network) * controller_interval * request_window_ticks;
}

// --- baselines ----------------------------------------------------------

double estimate_rate(std::span<const double> counts, double floor) {
    if (counts.empty()) return floor;
    const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(counts.size());
    return std::max(mean, floor);
}

Moments estimate_moments(std::span<const double> obs, double variance_floor) {
    Moments m;
    if (obs.empty()) {
        m.variance = variance_floor;
        return m;
    }
    // Welford keeps constant inputs at exactly zero spread.
    double mean = 0.0;
    double m2 = 0.0;
    long n = 0;
    for (double x : obs) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    m.mean = mean;
    m.variance = std::max(n > 1 ? m2 / static_cast<double>(n - 1) : 0.0, variance_floor);
    return m;
}

namespace {

template <typename T>
void push_bounded(std::deque<T>& d, T value, int limit) {
    d.push_back(value);
    while (static_cast<int>(d.size()) > limit) d.pop_front();
}

double reputation_level(const BetaParams& p) { return stats::beta_mode(p.alpha, p.beta); }

}  // namespace

ScoreVector score_window(EstimatorState& st, const WindowObservation& obs, const DetectorConfig& cfg,
                         double request_floor, const ReputationChain* chain, Rng* chain_rng) {
    push_bounded(st.recent_requests, obs.requests, cfg.request_window_ticks);
    const long window_count = std::accumulate(st.recent_requests.begin(), st.recent_requests.end(), 0L);
    const auto efficiency_samples = [&] { return std::vector<double>(st.efficiency_samples.begin(), st.efficiency_samples.end()); };

    if (!st.warmed_up(cfg)) {
        ++st.windows_seen;
        push_bounded(st.request_samples, static_cast<double>(window_count), cfg.baseline_windows);
        push_bounded(st.energy_samples, obs.consumption, cfg.baseline_windows);
        if (obs.efficiency) push_bounded(st.efficiency_samples, *obs.efficiency, cfg.baseline_windows);
        st.reputation = update_reputation(st.reputation, Outcome::Consistent);
        if (st.warmed_up(cfg)) st.reputation_reference = st.reputation;
        if (chain && st.chain_state < 0) st.chain_state = chain->nearest_level(reputation_level(st.reputation));
        return {};
    }

    ScoreVector v;
    const std::vector<double> req(st.request_samples.begin(), st.request_samples.end());
    const double lambda = estimate_rate(req, request_floor);
    v.request = request_pattern_score(window_count, lambda, cfg.mode);

    const std::vector<double> energy(st.energy_samples.begin(), st.energy_samples.end());
    const Moments em = estimate_moments(energy, cfg.energy_variance_floor);
    v.energy = energy_score(obs.consumption, em.mean, em.variance, cfg.mode);

    if (obs.efficiency) {
        Moments fm{cfg.efficiency_prior_mean, cfg.efficiency_variance_floor};
        if (!st.efficiency_samples.empty()) fm = estimate_moments(efficiency_samples(), cfg.efficiency_variance_floor);
        st.last_efficiency_score = efficiency_score(*obs.efficiency, fm.mean, fm.variance, cfg.mode);
    }
    v.efficiency = st.last_efficiency_score;

    const double t = cfg.outcome_threshold;
    const bool anomalous = v.request > t || v.energy > t || (obs.efficiency && v.efficiency > t);
    st.reputation = update_reputation(st.reputation, anomalous ? Outcome::Anomalous : Outcome::Consistent);
    if (obs.efficiency && obs.witnessed)
        st.reputation = update_reputation(st.reputation, v.efficiency > t ? Outcome::Anomalous : Outcome::Consistent);

    double level = reputation_level(st.reputation);
    if (chain && chain_rng) {
        if (st.chain_state < 0) st.chain_state = chain->nearest_level(level);
        st.chain_state = chain->transition(st.chain_state, level, cfg.chain_blend, *chain_rng);
        level = chain->level_value(st.chain_state);
    }
    v.reputation = reputation_score(level, st.reputation_reference, cfg.mode);

    v.combined = combined_score(v, cfg.weights);
    v.flagged = detect(v.combined, cfg.threshold);

    if (v.request <= t) push_bounded(st.request_samples, static_cast<double>(window_count), cfg.baseline_windows);
    if (v.energy <= t) push_bounded(st.energy_samples, obs.consumption, cfg.baseline_windows);
    if (obs.efficiency && v.efficiency <= t) push_bounded(st.efficiency_samples, *obs.efficiency, cfg.baseline_windows);
    ++st.windows_seen;
    return v;
}

// --- calibration ----------------------------------------------------------

CalibrationResult calibrate_threshold(std::span<const CalibrationSample> samples, double target_fpr) {
    if (samples.empty()) throw std::invalid_argument("calibrate_threshold: empty calibration set");
    if (!(target_fpr >= 0.0)) throw std::invalid_argument("calibrate_threshold: target fpr must be >= 0");
    long honest = 0;
    long malicious = 0;
    for (const auto& s : samples) (s.malicious ? malicious : honest) += 1;

    auto rates = [&](double threshold) {
        long fp = 0;
        long tp = 0;
        for (const auto& s : samples) {
            if (!detect(s.score, threshold)) continue;
            (s.malicious ? tp : fp) += 1;
        }
        const double fpr = honest > 0 ? static_cast<double>(fp) / honest : 0.0;
        const double dr = malicious > 0 ? static_cast<double>(tp) / malicious : 0.0;
        return std::pair{fpr, dr};
    };

    CalibrationResult result;
    constexpr int kSteps = 1000;
    for (int k = 0; k <= kSteps; ++k) {
        const double threshold = static_cast<double>(k) / kSteps;
        const auto [fpr, dr] = rates(threshold);
        if (fpr <= target_fpr + 1e-15) {
            result.threshold = threshold;
            result.false_positive_rate = fpr;
            result.detection_rate = dr;
            return result;
        }
    }
    const auto [fpr, dr] = rates(1.0);
    result.threshold = 1.0;
    result.false_positive_rate = fpr;
    result.detection_rate = dr;
    result.warning = fmt::format("target false-positive rate {} unreachable", target_fpr);
    return result;
}

}  // namespace wrsn::detect

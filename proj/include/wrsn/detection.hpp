#pragma once

#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wrsn/config.hpp"
#include "wrsn/network.hpp"

namespace wrsn::detect {

/// Literal evaluates 1 - density/pmf as written and clamps to [0,1]. Tail
/// replaces the density with the two-sided tail probability of an outcome at
/// least as extreme, which keeps every score a probability.
enum class ScoreMode { Literal, Tail };

const char* to_string(ScoreMode mode);
ScoreMode parse_score_mode(const std::string& text);

struct ScoreVector {
    double request = 0.0;
    double energy = 0.0;
    double reputation = 0.0;
    double efficiency = 0.0;
    double combined = 0.0;
    bool flagged = false;
};

double request_pattern_score(long count, double expected_rate, ScoreMode mode);
double energy_score(double observed, double mean, double variance, ScoreMode mode);
double efficiency_score(double efficiency, double mean, double variance, ScoreMode mode);

struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;

    double mean() const { return alpha / (alpha + beta); }
    friend bool operator==(const BetaParams&, const BetaParams&) = default;
};

enum class Outcome { Consistent, Anomalous };

BetaParams update_reputation(BetaParams params, Outcome outcome);

/// Scores reputation level `level` against the reference Beta(alpha, beta).
/// Levels are clamped to [1e-9, 1 - 1e-9] before evaluation.
double reputation_score(double level, BetaParams reference, ScoreMode mode);

/// received / sent; nullopt when nothing was sent.
std::optional<double> charging_efficiency(double received, double sent);

/// Weighted sum of the four sub-scores. Throws std::invalid_argument when a
/// component leaves [0,1] or the weights are invalid.
double combined_score(const ScoreVector& components, const Weights& weights);

/// Strict threshold test: 1 iff score > threshold.
bool detect(double score, double threshold);

/// Quantized reputation levels evolving under a row-stochastic transition
/// matrix, blended toward the level implied by recent behavior.
class ReputationChain {
public:
    /// Rejects matrices that are not square, negative, or whose rows do not
    /// sum to 1 within 1e-12.
    explicit ReputationChain(std::vector<std::vector<double>> transition);

    /// Five levels, stay with 0.8 and step to each neighbor with 0.1
    /// (reflecting at the ends).
    static ReputationChain sticky(int levels = 5);

    int levels() const { return static_cast<int>(transition_.size()); }
    double level_value(int state) const;
    int nearest_level(double value) const;
    const std::vector<double>& row(int state) const { return transition_.at(state); }

    /// Sample the next state from `current`'s row, then move to the level
    /// nearest (1 - blend) * sampled + blend * observed.
    int transition(int current, double observed_level, double blend, Rng& rng) const;

    std::vector<double> stationary_distribution() const;

private:
    std::vector<std::vector<double>> transition_;
};

struct DetectorConfig {
    ScoreMode mode = ScoreMode::Tail;
    Weights weights;
    double threshold = 0.7;
    int warmup_windows = 10;
    int baseline_windows = 10;
    int request_window_ticks = 20;
    /// Expected honest requests per request window; 0 derives it from the
    /// network energy model.
    double request_rate_floor = 0.0;
    double energy_variance_floor = 1e-8;
    double efficiency_prior_mean = 1.0;
    double efficiency_variance_floor = 4e-4;
    /// A window whose request, energy or efficiency score exceeds this counts
    /// as an anomalous interaction for the reputation update.
    double outcome_threshold = 0.9;
    bool chain_mode = false;
    int chain_levels = 5;
    double chain_blend = 0.5;
};

ValidationReport validate_detector_config(const DetectorConfig& config);
void read_detector_config(KeyValueFile& kv, DetectorConfig& config);

/// Expected honest requests inside one request window.
double model_request_floor(const NetworkConfig& network, double controller_interval, int request_window_ticks);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Sample mean of per-window counts, never below `floor`.
double estimate_rate(std::span<const double> counts, double floor);
/// Sample mean and unbiased variance, variance never below `variance_floor`.
Moments estimate_moments(std::span<const double> observations, double variance_floor);

/// Everything observed about one node during one controller interval.
struct WindowObservation {
    long requests = 0;
    double consumption = 0.0;
    std::optional<double> efficiency;
    bool witnessed = false;  // a live neighbor within comm range saw the charge session
};

/// Per-node online baselines and reputation.
struct EstimatorState {
    std::deque<long> recent_requests;    // per-tick counts inside the request window
    std::deque<double> request_samples;  // accepted request-window counts
    std::deque<double> energy_samples;
    std::deque<double> efficiency_samples;
    BetaParams reputation;
    BetaParams reputation_reference;
    int windows_seen = 0;
    int chain_state = -1;
    double last_efficiency_score = 0.0;

    bool warmed_up(const DetectorConfig& config) const { return windows_seen >= config.warmup_windows; }
};

/// Closes one observation window for a node: scores it against the current
/// baselines, updates reputation, then folds the observations that scored as
/// consistent into the rolling baselines. All scores are 0 during warm-up.
ScoreVector score_window(EstimatorState& state, const WindowObservation& obs, const DetectorConfig& config,
                         double request_floor, const ReputationChain* chain, Rng* chain_rng);

struct CalibrationSample {
    double score = 0.0;
    bool malicious = false;
};

struct CalibrationResult {
    double threshold = 1.0;
    double detection_rate = 0.0;       // fraction in [0,1]
    double false_positive_rate = 0.0;  // fraction in [0,1]
    std::optional<std::string> warning;
};

/// Smallest threshold on a 0.001 grid whose false-positive rate (scores
/// strictly above it) is at most `target_fpr`. Throws std::invalid_argument
/// on an empty sample set.
CalibrationResult calibrate_threshold(std::span<const CalibrationSample> samples, double target_fpr);

}  // namespace wrsn::detect

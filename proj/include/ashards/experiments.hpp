#ifndef ASHARDS_EXPERIMENTS_HPP
#define ASHARDS_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ashards/learning.hpp"

namespace ashards {

// key = value configuration text: one pair per line, '#' starts a comment.
std::map<std::string, std::string> parse_kv_text(const std::string& text);

// Everything a training or comparison run needs. Built from a KV map with
// defaults; unknown keys are rejected.
struct ExperimentConfig {
    std::string trainer = "analog"; // analog | centralized | centralized-exact | fixed-point
    std::string train_images, train_labels, test_images, test_labels;
    std::uint64_t synthetic_seed = 42; // used when no image paths are given
    int class_a = 3;
    int class_b = 7;
    std::size_t per_class = 0;        // 0 = keep every sample
    std::string feature_scale = "raw"; // raw (pixels 0..255) | unit (0..1)
    double beta = 1e-6;
    std::uint32_t iterations = 25;
    double sigma_n = 1e5;
    double alpha = 10.0;
    std::uint32_t t = 1;
    std::uint32_t n_servers = 4;
    double secret_bound = -1.0; // < 0: derived from the feature scale (255 or 1)
    std::uint64_t seed = 1;
    std::uint64_t fxp_prime = (1ull << 61) - 1;
    std::uint32_t fxp_frac_bits = 24;
    std::vector<std::string> workers; // socket transport when non-empty
    bool zero_noise = false;
    bool drift_check = false;
    bool capture = false;
    std::vector<std::size_t> sizes;   // compare: total dataset sizes (balanced)
    std::uint32_t repeats = 20;

    static ExperimentConfig from_kv(const std::map<std::string, std::string>& kv);
    double scale_factor() const { return feature_scale == "unit" ? 1.0 / 255.0 : 1.0; }
    double effective_bound() const { return secret_bound >= 0.0 ? secret_bound : 255.0 * scale_factor(); }
    ProtocolParams protocol_params() const;
};

struct TrainOutcome {
    ModelState model;
    double test_accuracy = 0.0;
    std::string summary_json;
};

// Runs one trainer, writes <prefix>.curve.csv (per-iteration metrics) and
// <prefix>.report.json (run report with the privacy accounting), returns the
// report text. Prefix may be empty to skip the files.
TrainOutcome train_run(const ExperimentConfig& cfg, const std::string& out_prefix);

struct CompareCell {
    std::size_t dataset_size = 0;
    std::string trainer;
    std::uint32_t repeats = 0;
    double mean_accuracy = 0.0;
    double min_accuracy = 1.0;
    double max_accuracy = 0.0;
    OpCounts counts;       // analog transport traffic; flop estimates otherwise
    double fxp_certified_peak = 0.0; // worst-case field magnitude for this size
    bool fxp_certified_safe = false;
};

struct CompareOutcome {
    std::vector<CompareCell> cells;
    std::string csv;
    std::string report_json;
};

// Accuracy curves over a dataset-size grid for the three trainers, averaged
// over seeded repeats; writes <prefix>.curve.csv and <prefix>.report.json.
CompareOutcome compare_run(const ExperimentConfig& cfg, const std::string& out_prefix);

// Worst-case magnitude of the quantized iteration product for a balanced
// dataset of total size m, assuming no wrap occurred earlier; compare this
// against (p-1)/2 to certify the no-overflow regime.
double fxp_certified_peak(std::size_t m, std::size_t d, double xmax, double beta,
                          std::uint32_t iterations, std::uint32_t frac_bits);

// Loads the configured dataset pair (IDX files or the synthetic fallback).
void load_experiment_data(const ExperimentConfig& cfg, Dataset& train, Dataset& test);

} // namespace ashards

#endif

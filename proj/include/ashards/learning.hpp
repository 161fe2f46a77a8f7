#ifndef ASHARDS_LEARNING_HPP
#define ASHARDS_LEARNING_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ashards/params.hpp"
#include "ashards/runtime.hpp"

namespace ashards {

// Raw IDX image/label pair as loaded from disk.
struct RawDataset {
    std::uint32_t count = 0;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::uint8_t> images; // count * rows * cols
    std::vector<std::uint8_t> labels; // count
};

// Parses big-endian IDX files (magic 0x00000803 for images, 0x00000801 for
// labels); files ending in .gz are decompressed transparently. Image and
// label counts must agree.
RawDataset load_mnist_idx(const std::string& images_path, const std::string& labels_path);

void write_idx_images(const std::string& path, const RawDataset& data);
void write_idx_labels(const std::string& path, const RawDataset& data);

// Binary classification view: class_a maps to label 1, class_b to 0.
struct Dataset {
    std::size_t sample_count = 0;
    std::size_t feature_count = 0;
    std::vector<double> features;      // row-major sample_count x feature_count
    std::vector<std::uint8_t> labels;  // 0/1
    int class_a = 3;
    int class_b = 7;
    double feature_scale = 1.0;        // applied to raw pixel values
};

// Keeps only the two classes; optionally balanced-subsamples per_class
// samples from each (seeded shuffle). Throws if a class is absent.
Dataset filter_binary(const RawDataset& raw, int class_a, int class_b,
                      std::optional<std::size_t> per_class, std::uint64_t seed,
                      double feature_scale);

enum class SigmoidMode { Exact, Degree1 };

struct TrainingConfig {
    double beta = 1e-6;        // learning rate
    std::uint32_t iterations = 25;
    ProtocolParams params;     // analog path wants poly_degree = 3, n >= 3t+1
    SigmoidMode sigmoid_mode = SigmoidMode::Degree1;
    bool zero_noise = false;           // test hook
    double residue_warn_scale = 1e-3;  // warn when residue exceeds scale*|u|
    bool drift_check = false;          // per-iteration decode drift bound
};

struct IterationStats {
    double train_loss = 0.0;
    double residue_max = 0.0;    // imaginary residue of the decoded update
    double u_error_bound = 0.0;  // decode perturbation bound (when drift_check)
    double u_drift_max = 0.0;    // observed |decoded u - plaintext u| (when drift_check)
    bool degraded = false;       // residue exceeded the warning threshold
};

struct ModelState {
    std::vector<double> weights;
    std::uint32_t iteration = 0;
    std::vector<std::vector<double>> history; // weights after each iteration
    std::vector<IterationStats> stats;
};

// Plaintext gradient descent; Degree1 mode runs the same update form as the
// distributed path so zero-noise runs agree value-for-value.
ModelState train_centralized(const Dataset& data, const TrainingConfig& cfg);

// Shares the feature matrix once, then per iteration shares the weight
// vector, collects the distributed products and applies the update. Uses
// in-process workers when transport is null.
ModelState train_analog(const Dataset& data, const TrainingConfig& cfg,
                        Transport* transport = nullptr, Transcript* transcript_out = nullptr);

struct FixedPointConfig {
    std::uint64_t field_prime = (1ull << 61) - 1;
    std::uint32_t frac_bits = 24;      // quantization scale exponent
    std::uint32_t t = 1;
    std::uint32_t n_servers = 4;
    std::uint64_t seed = 1;

    // Centered representable range is +-(field_prime - 1) / 2.
    std::uint64_t half_range() const { return (field_prime - 1) / 2; }
    void validate() const;
};

// Same iteration structure over a prime field with round(x * 2^frac_bits)
// quantization. Wrap-around is neither detected nor corrected: values that
// leave the centered range alias silently and training collapses.
ModelState train_fixed_point(const Dataset& data, const TrainingConfig& cfg,
                             const FixedPointConfig& fxp);

// Fraction of test samples classified correctly; predicts 1 when x.w > 0
// (ties go to class 0).
double evaluate(const ModelState& model, const Dataset& test);
double evaluate_weights(const std::vector<double>& weights, const Dataset& test);

// Cross-entropy of the exact-sigmoid model, for reporting.
double logistic_loss(const std::vector<double>& weights, const Dataset& data);

// Per-digit sample counts of the published MNIST splits; the synthetic
// generator uses them so class sizes match the real dataset.
extern const std::array<std::uint32_t, 10> kMnistTrainDigitCounts;
extern const std::array<std::uint32_t, 10> kMnistTestDigitCounts;

// Deterministic 28x28 segment-glyph digits with jitter and pixel noise.
// Stands in for MNIST in tests and demos when the real files are not on
// disk; same IDX format, value range and class counts.
RawDataset synthetic_digits(const std::array<std::uint32_t, 10>& per_digit, std::uint64_t seed);

} // namespace ashards

#endif

#include "ashards/experiments.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "ashards/privacy.hpp"
#include "ashards/serialize.hpp"

namespace ashards {

using nlohmann::ordered_json;

std::map<std::string, std::string> parse_kv_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto trim = [](std::string s) {
        std::size_t b = s.find_first_not_of(" \t\r");
        std::size_t e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            raise(ErrorCode::FormatError,
                  "config line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            raise(ErrorCode::FormatError, "config line " + std::to_string(line_no) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double parse_f64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        raise(ErrorCode::InvalidArgument, "config: bad number for " + key + ": " + v);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        unsigned long long d = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        raise(ErrorCode::InvalidArgument, "config: bad integer for " + key + ": " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    raise(ErrorCode::InvalidArgument, "config: bad boolean for " + key + ": " + v);
}

} // namespace

ExperimentConfig ExperimentConfig::from_kv(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg;
    for (const auto& [key, value] : kv) {
        if (key == "trainer") cfg.trainer = value;
        else if (key == "train_images") cfg.train_images = value;
        else if (key == "train_labels") cfg.train_labels = value;
        else if (key == "test_images") cfg.test_images = value;
        else if (key == "test_labels") cfg.test_labels = value;
        else if (key == "synthetic_seed") cfg.synthetic_seed = parse_u64(key, value);
        else if (key == "class_a") cfg.class_a = static_cast<int>(parse_u64(key, value));
        else if (key == "class_b") cfg.class_b = static_cast<int>(parse_u64(key, value));
        else if (key == "per_class") cfg.per_class = parse_u64(key, value);
        else if (key == "feature_scale") cfg.feature_scale = value;
        else if (key == "beta") cfg.beta = parse_f64(key, value);
        else if (key == "iterations") cfg.iterations = static_cast<std::uint32_t>(parse_u64(key, value));
        else if (key == "sigma_n") cfg.sigma_n = parse_f64(key, value);
        else if (key == "alpha") cfg.alpha = parse_f64(key, value);
        else if (key == "t") cfg.t = static_cast<std::uint32_t>(parse_u64(key, value));
        else if (key == "n_servers") cfg.n_servers = static_cast<std::uint32_t>(parse_u64(key, value));
        else if (key == "r") cfg.secret_bound = parse_f64(key, value);
        else if (key == "seed") cfg.seed = parse_u64(key, value);
        else if (key == "fxp_prime") cfg.fxp_prime = parse_u64(key, value);
        else if (key == "fxp_frac_bits") cfg.fxp_frac_bits = static_cast<std::uint32_t>(parse_u64(key, value));
        else if (key == "workers") cfg.workers = split_csv(value);
        else if (key == "zero_noise") cfg.zero_noise = parse_bool(key, value);
        else if (key == "drift_check") cfg.drift_check = parse_bool(key, value);
        else if (key == "capture") cfg.capture = parse_bool(key, value);
        else if (key == "sizes") {
            for (const auto& s : split_csv(value)) cfg.sizes.push_back(parse_u64(key, s));
        } else if (key == "repeats") cfg.repeats = static_cast<std::uint32_t>(parse_u64(key, value));
        else raise(ErrorCode::InvalidArgument, "config: unknown key: " + key);
    }
    if (cfg.feature_scale != "raw" && cfg.feature_scale != "unit")
        raise(ErrorCode::InvalidArgument, "config: feature_scale must be raw or unit");
    if (cfg.trainer != "analog" && cfg.trainer != "centralized" &&
        cfg.trainer != "centralized-exact" && cfg.trainer != "fixed-point")
        raise(ErrorCode::InvalidArgument, "config: unknown trainer: " + cfg.trainer);
    return cfg;
}

ProtocolParams ExperimentConfig::protocol_params() const {
    return ProtocolParams::create(n_servers, t, 3, sigma_n, alpha, effective_bound(), seed);
}

void load_experiment_data(const ExperimentConfig& cfg, Dataset& train, Dataset& test) {
    RawDataset raw_train, raw_test;
    if (!cfg.train_images.empty()) {
        raw_train = load_mnist_idx(cfg.train_images, cfg.train_labels);
        raw_test = load_mnist_idx(cfg.test_images, cfg.test_labels);
    } else {
        raw_train = synthetic_digits(kMnistTrainDigitCounts, cfg.synthetic_seed);
        raw_test = synthetic_digits(kMnistTestDigitCounts, cfg.synthetic_seed + 1);
    }
    std::optional<std::size_t> per_class;
    if (cfg.per_class > 0) per_class = cfg.per_class;
    train = filter_binary(raw_train, cfg.class_a, cfg.class_b, per_class, cfg.seed, cfg.scale_factor());
    test = filter_binary(raw_test, cfg.class_a, cfg.class_b, std::nullopt, cfg.seed, cfg.scale_factor());
}

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(ErrorCode::IoError, "cannot open for writing: " + path);
    f << text;
}

ordered_json counts_json(const OpCounts& c) {
    ordered_json j;
    j["messages_sent"] = c.messages_sent;
    j["messages_received"] = c.messages_received;
    j["bytes_sent"] = c.bytes_sent;
    j["bytes_received"] = c.bytes_received;
    j["encoded_bytes"] = c.encoded_bytes;
    j["worker_flops"] = c.worker_flops;
    return j;
}

ModelState dispatch_trainer(const ExperimentConfig& cfg, const Dataset& train,
                            Transcript* transcript_out) {
    TrainingConfig tc;
    tc.beta = cfg.beta;
    tc.iterations = cfg.iterations;
    tc.params = cfg.protocol_params();
    tc.zero_noise = cfg.zero_noise;
    tc.drift_check = cfg.drift_check;

    if (cfg.trainer == "analog") {
        std::unique_ptr<SocketTransport> socket;
        Transport* transport = nullptr;
        if (!cfg.workers.empty()) {
            socket = std::make_unique<SocketTransport>(cfg.workers);
            transport = socket.get();
        }
        return train_analog(train, tc, transport, transcript_out);
    }
    if (cfg.trainer == "centralized") {
        tc.sigmoid_mode = SigmoidMode::Degree1;
        return train_centralized(train, tc);
    }
    if (cfg.trainer == "centralized-exact") {
        tc.sigmoid_mode = SigmoidMode::Exact;
        return train_centralized(train, tc);
    }
    FixedPointConfig fxp;
    fxp.field_prime = cfg.fxp_prime;
    fxp.frac_bits = cfg.fxp_frac_bits;
    fxp.t = cfg.t;
    fxp.n_servers = cfg.n_servers;
    fxp.seed = cfg.seed;
    return train_fixed_point(train, tc, fxp);
}

} // namespace

TrainOutcome train_run(const ExperimentConfig& cfg, const std::string& out_prefix) {
    Dataset train, test;
    load_experiment_data(cfg, train, test);

    Transcript transcript;
    TrainOutcome outcome;
    outcome.model = dispatch_trainer(cfg, train, &transcript);
    outcome.test_accuracy = evaluate(outcome.model, test);

    std::ostringstream curve;
    curve << "iteration,train_loss,test_accuracy,residue_max,u_error_bound\n";
    for (std::size_t i = 0; i < outcome.model.history.size(); ++i) {
        const IterationStats& st = outcome.model.stats[i];
        double acc = evaluate_weights(outcome.model.history[i], test);
        curve << (i + 1) << ',' << format_double(st.train_loss) << ',' << format_double(acc) << ','
              << format_double(st.residue_max) << ',' << format_double(st.u_error_bound) << '\n';
    }

    PrivacyReport privacy = make_privacy_report(cfg.effective_bound(), cfg.sigma_n, cfg.t, cfg.alpha);
    ordered_json report;
    report["trainer"] = cfg.trainer;
    report["seed"] = cfg.seed;
    report["iterations"] = cfg.iterations;
    report["beta"] = cfg.beta;
    report["train_samples"] = train.sample_count;
    report["test_samples"] = test.sample_count;
    report["features"] = train.feature_count;
    report["feature_scale"] = cfg.feature_scale;
    report["final_train_loss"] =
        outcome.model.stats.empty() ? 0.0 : outcome.model.stats.back().train_loss;
    report["test_accuracy"] = outcome.test_accuracy;
    report["privacy"] = ordered_json::parse(privacy.to_json());
    // The dataset is shared once; the model vector is re-shared every
    // iteration, so its leakage compounds linearly.
    report["dataset_leakage_eta_s"] = privacy.eta_s;
    report["model_leakage_eta_s"] = double(cfg.iterations) * privacy.eta_s;
    if (cfg.trainer == "analog") report["transport"] = counts_json(transcript.counts);
    outcome.summary_json = report.dump(2);

    if (!out_prefix.empty()) {
        write_text(out_prefix + ".curve.csv", curve.str());
        write_text(out_prefix + ".report.json", outcome.summary_json);
    }
    return outcome;
}

double fxp_certified_peak(std::size_t m, std::size_t d, double xmax, double beta,
                          std::uint32_t iterations, std::uint32_t frac_bits) {
    // Worst-case growth of |w| entries across the update recursion, then the
    // largest field element the product X_q^T X_q w_q can reach.
    const double scale = std::exp2(double(frac_bits));
    const double xq = xmax * scale + 0.5;
    double w_peak = 0.0;
    double t_peak = 0.0;
    for (std::uint32_t j = 0; j < iterations; ++j) {
        double wq = w_peak * scale + 0.5;
        double t_mag = double(m) * double(d) * xq * xq * wq;
        t_peak = std::max(t_peak, t_mag);
        double u_mag = double(m) * double(d) * xmax * xmax * w_peak;
        w_peak += beta / (2.0 * double(m)) * (0.5 * u_mag + double(m) * xmax);
    }
    return t_peak;
}

CompareOutcome compare_run(const ExperimentConfig& cfg, const std::string& out_prefix) {
    if (cfg.sizes.empty())
        raise(ErrorCode::InvalidArgument, "compare: need a sizes grid (total samples, balanced)");
    if (cfg.repeats < 1) raise(ErrorCode::InvalidArgument, "compare: repeats must be >= 1");

    Dataset unused_train, test;
    // Load once at full size; per-cell subsampling happens below.
    ExperimentConfig base = cfg;
    base.per_class = 0;
    RawDataset raw_train, raw_test;
    if (!cfg.train_images.empty()) {
        raw_train = load_mnist_idx(cfg.train_images, cfg.train_labels);
        raw_test = load_mnist_idx(cfg.test_images, cfg.test_labels);
    } else {
        raw_train = synthetic_digits(kMnistTrainDigitCounts, cfg.synthetic_seed);
        raw_test = synthetic_digits(kMnistTestDigitCounts, cfg.synthetic_seed + 1);
    }
    test = filter_binary(raw_test, cfg.class_a, cfg.class_b, std::nullopt, cfg.seed,
                         cfg.scale_factor());

    const char* trainers[3] = {"analog", "centralized-exact", "fixed-point"};
    CompareOutcome outcome;

    for (std::size_t size : cfg.sizes) {
        if (size < 2 || size % 2 != 0)
            raise(ErrorCode::InvalidArgument, "compare: sizes must be even (balanced classes)");
        for (const char* trainer : trainers) {
            CompareCell cell;
            cell.dataset_size = size;
            cell.trainer = trainer;
            cell.repeats = cfg.repeats;
            double sum = 0.0;
            for (std::uint32_t rep = 0; rep < cfg.repeats; ++rep) {
                ExperimentConfig run = cfg;
                run.trainer = trainer;
                run.per_class = size / 2;
                run.seed = cfg.seed + 1000ull * rep;
                Dataset train = filter_binary(raw_train, cfg.class_a, cfg.class_b, run.per_class,
                                              run.seed, cfg.scale_factor());
                Transcript transcript;
                ModelState model = dispatch_trainer(run, train, &transcript);
                double acc = evaluate(model, test);
                sum += acc;
                cell.min_accuracy = std::min(cell.min_accuracy, acc);
                cell.max_accuracy = std::max(cell.max_accuracy, acc);
                cell.counts.messages_sent += transcript.counts.messages_sent;
                cell.counts.messages_received += transcript.counts.messages_received;
                cell.counts.bytes_sent += transcript.counts.bytes_sent;
                cell.counts.bytes_received += transcript.counts.bytes_received;
                cell.counts.encoded_bytes += transcript.counts.encoded_bytes;
                cell.counts.worker_flops += transcript.counts.worker_flops;
                if (std::string(trainer) == "centralized-exact" ||
                    std::string(trainer) == "fixed-point") {
                    // No transport; record the arithmetic estimate instead.
                    std::uint64_t per_iter = std::string(trainer) == "fixed-point"
                                                 ? 8ull * run.n_servers * 2 * train.sample_count *
                                                       train.feature_count
                                                 : 4ull * train.sample_count * train.feature_count;
                    cell.counts.worker_flops += per_iter * cfg.iterations;
                }
            }
            cell.mean_accuracy = sum / double(cfg.repeats);
            double xmax = 255.0 * cfg.scale_factor();
            cell.fxp_certified_peak = fxp_certified_peak(size, test.feature_count, xmax, cfg.beta,
                                                         cfg.iterations, cfg.fxp_frac_bits);
            cell.fxp_certified_safe =
                cell.fxp_certified_peak < double((cfg.fxp_prime - 1) / 2);
            outcome.cells.push_back(std::move(cell));
        }
    }

    std::ostringstream csv;
    csv << "dataset_size,trainer,repeats,mean_accuracy,min_accuracy,max_accuracy,"
           "messages,encoded_bytes,worker_flops,fxp_certified_safe\n";
    for (const auto& c : outcome.cells) {
        csv << c.dataset_size << ',' << c.trainer << ',' << c.repeats << ','
            << format_double(c.mean_accuracy) << ',' << format_double(c.min_accuracy) << ','
            << format_double(c.max_accuracy) << ','
            << (c.counts.messages_sent + c.counts.messages_received) << ','
            << c.counts.encoded_bytes << ',' << c.counts.worker_flops << ','
            << (c.fxp_certified_safe ? 1 : 0) << '\n';
    }
    outcome.csv = csv.str();

    ordered_json report;
    report["seed"] = cfg.seed;
    report["repeats"] = cfg.repeats;
    report["iterations"] = cfg.iterations;
    report["beta"] = cfg.beta;
    report["feature_scale"] = cfg.feature_scale;
    report["sigma_n"] = cfg.sigma_n;
    report["fxp_prime"] = cfg.fxp_prime;
    report["fxp_frac_bits"] = cfg.fxp_frac_bits;
    report["fxp_half_range"] = double((cfg.fxp_prime - 1) / 2);
    ordered_json cells = ordered_json::array();
    for (const auto& c : outcome.cells) {
        ordered_json j;
        j["dataset_size"] = c.dataset_size;
        j["trainer"] = c.trainer;
        j["mean_accuracy"] = c.mean_accuracy;
        j["min_accuracy"] = c.min_accuracy;
        j["max_accuracy"] = c.max_accuracy;
        j["counts"] = counts_json(c.counts);
        j["fxp_certified_peak"] = c.fxp_certified_peak;
        j["fxp_certified_safe"] = c.fxp_certified_safe;
        cells.push_back(std::move(j));
    }
    report["cells"] = std::move(cells);
    outcome.report_json = report.dump(2);

    if (!out_prefix.empty()) {
        write_text(out_prefix + ".curve.csv", outcome.csv);
        write_text(out_prefix + ".report.json", outcome.report_json);
    }
    return outcome;
}

} // namespace ashards

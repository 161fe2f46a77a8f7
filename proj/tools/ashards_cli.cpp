// Command-line front end; talks to the core strictly through the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "analog_shards.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitProtocol = 3;

int exit_code_for(as_status st) {
    if (st == AS_OK) return kExitOk;
    if (st == AS_PROTOCOL_FAILURE) return kExitProtocol;
    return kExitValidation;
}

[[noreturn]] void fail(as_status st) {
    std::cerr << "error: " << as_last_error() << "\n";
    std::exit(exit_code_for(st));
}

void check(as_status st) {
    if (st != AS_OK) fail(st);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot read " << path << "\n";
        std::exit(kExitValidation);
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// key = value lines; '#' comments. Flags override file values, the
// ANALOG_SHARDS_SEED environment variable is the weakest seed source.
std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::istringstream in(read_text_file(path));
    std::string line;
    auto trim = [](std::string s) {
        std::size_t b = s.find_first_not_of(" \t\r");
        std::size_t e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: bad config line (want key = value): " << line << "\n";
            std::exit(kExitValidation);
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

// Layered parameter lookup shared by the subcommands.
struct ConfigLayer {
    CLI::App* cmd = nullptr;
    std::map<std::string, std::string> file;

    void load(const std::string& path) {
        if (!path.empty()) file = parse_config_file(path);
    }

    template <typename T>
    T pick(const CLI::Option* opt, const std::string& key, T flag_value, T fallback) const {
        if (opt && opt->count() > 0) return flag_value;
        auto it = file.find(key);
        if (it != file.end()) {
            std::istringstream ss(it->second);
            T v{};
            ss >> v;
            if (ss.fail()) {
                std::cerr << "error: bad config value for " << key << ": " << it->second << "\n";
                std::exit(kExitValidation);
            }
            return v;
        }
        return fallback;
    }

    std::uint64_t pick_seed(const CLI::Option* opt, std::uint64_t flag_value) const {
        if (opt && opt->count() > 0) return flag_value;
        auto it = file.find("seed");
        if (it != file.end()) return std::stoull(it->second);
        if (const char* env = std::getenv("ANALOG_SHARDS_SEED")) return std::stoull(env);
        return 1;
    }
};

struct ParamFlags {
    std::uint32_t n = 4, t = 1, degree = 1;
    double sigma = 1e5, alpha = 10.0, r = 255.0;
    std::uint64_t seed = 1;
    std::string config;
    CLI::Option *n_opt, *t_opt, *degree_opt, *sigma_opt, *alpha_opt, *r_opt, *seed_opt;

    void attach(CLI::App* cmd, bool with_degree = true) {
        n_opt = cmd->add_option("--n", n, "number of servers");
        t_opt = cmd->add_option("--t", t, "maximum colluding servers");
        degree_opt = with_degree ? cmd->add_option("--degree", degree, "polynomial degree") : nullptr;
        sigma_opt = cmd->add_option("--sigma", sigma, "noise standard deviation");
        alpha_opt = cmd->add_option("--alpha", alpha, "truncation multiplier");
        r_opt = cmd->add_option("--r", r, "secret magnitude bound");
        seed_opt = cmd->add_option("--seed", seed, "rng seed");
        cmd->add_option("--config", config, "key = value config file");
    }

    as_params* resolve(ConfigLayer& layer) {
        layer.load(config);
        std::uint32_t rn = layer.pick(n_opt, "n_servers", n, n);
        std::uint32_t rt = layer.pick(t_opt, "t", t, t);
        std::uint32_t rd = degree_opt ? layer.pick(degree_opt, "degree", degree, degree) : degree;
        double rs = layer.pick(sigma_opt, "sigma_n", sigma, sigma);
        double ra = layer.pick(alpha_opt, "alpha", alpha, alpha);
        double rr = layer.pick(r_opt, "r", r, r);
        std::uint64_t rseed = layer.pick_seed(seed_opt, seed);
        as_params* p = nullptr;
        check(as_params_new(rn, rt, rd, rs, ra, rr, rseed, &p));
        seed = rseed;
        return p;
    }
};

std::vector<double> parse_number_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(cur, &pos));
            if (pos != cur.size()) throw std::invalid_argument(cur);
        } catch (...) {
            std::cerr << "error: bad " << what << " entry: " << cur << "\n";
            std::exit(kExitValidation);
        }
        cur.clear();
    };
    for (char c : text) {
        if (c == ',') flush();
        else if (!std::isspace(static_cast<unsigned char>(c))) cur.push_back(c);
    }
    flush();
    if (out.empty()) {
        std::cerr << "error: empty " << what << "\n";
        std::exit(kExitValidation);
    }
    return out;
}

// Values from a one-number-per-cell CSV file: rows x cols matrix.
void parse_csv_matrix(const std::string& path, std::vector<double>& values, std::uint64_t& rows,
                      std::uint64_t& cols) {
    std::istringstream in(read_text_file(path));
    std::string line;
    rows = 0;
    cols = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto row = parse_number_list(line, "csv");
        if (cols == 0) cols = row.size();
        if (row.size() != cols) {
            std::cerr << "error: ragged csv row in " << path << "\n";
            std::exit(kExitValidation);
        }
        values.insert(values.end(), row.begin(), row.end());
        ++rows;
    }
    if (rows == 0) {
        std::cerr << "error: no data in " << path << "\n";
        std::exit(kExitValidation);
    }
}

void write_binary_file(const std::string& path, const uint8_t* data, size_t len) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f || std::fwrite(data, 1, len, f) != len) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(kExitValidation);
    }
    std::fclose(f);
}

std::vector<uint8_t> read_binary_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) {
        std::cerr << "error: cannot read " << path << "\n";
        std::exit(kExitValidation);
    }
    std::fseek(f, 0, SEEK_END);
    long size = std::ftell(f);
    std::fseek(f, 0, SEEK_SET);
    std::vector<uint8_t> out(size > 0 ? size_t(size) : 0);
    if (!out.empty() && std::fread(out.data(), 1, out.size(), f) != out.size()) {
        std::fclose(f);
        std::cerr << "error: short read on " << path << "\n";
        std::exit(kExitValidation);
    }
    std::fclose(f);
    return out;
}

// Builds the key = value text handed to the training C entry points:
// config file first, explicitly set flags after (later lines win).
struct KvBuilder {
    std::ostringstream text;

    void include_file(const std::string& path) {
        if (path.empty()) return;
        text << read_text_file(path) << "\n";
    }
    void set(const std::string& key, const std::string& value) {
        text << key << " = " << value << "\n";
    }
    template <typename T>
    void set_if(const CLI::Option* opt, const std::string& key, const T& value) {
        if (opt && opt->count() > 0) {
            std::ostringstream v;
            v.precision(17);
            v << value;
            set(key, v.str());
        }
    }
};

// Shared flag block for train/compare.
struct TrainFlags {
    std::string config, trainer = "analog";
    std::string train_images, train_labels, test_images, test_labels;
    std::uint64_t per_class = 0, seed = 1, synthetic_seed = 42, fxp_prime = (1ull << 61) - 1;
    std::uint32_t iterations = 25, t = 1, n = 4, fxp_frac_bits = 24, repeats = 20;
    double beta = 1e-6, sigma = 1e5, alpha = 10.0, r = -1.0;
    std::string scale = "raw", workers, sizes;
    bool zero_noise = false, drift_check = false;
    CLI::Option *trainer_o, *ti_o, *tl_o, *si_o, *sl_o, *pc_o, *seed_o, *synth_o, *prime_o,
        *iters_o, *t_o, *n_o, *frac_o, *repeats_o, *beta_o, *sigma_o, *alpha_o, *r_o, *scale_o,
        *workers_o, *sizes_o, *zero_o, *drift_o;

    void attach(CLI::App* cmd, bool compare_mode) {
        trainer_o = compare_mode ? nullptr
                                 : cmd->add_option("--trainer", trainer,
                                                   "analog | centralized | centralized-exact | fixed-point");
        ti_o = cmd->add_option("--train-images", train_images, "IDX images (synthetic digits when omitted)");
        tl_o = cmd->add_option("--train-labels", train_labels, "IDX labels");
        si_o = cmd->add_option("--test-images", test_images, "IDX test images");
        sl_o = cmd->add_option("--test-labels", test_labels, "IDX test labels");
        pc_o = cmd->add_option("--per-class", per_class, "balanced subsample size per class");
        seed_o = cmd->add_option("--seed", seed, "rng seed");
        synth_o = cmd->add_option("--synthetic-seed", synthetic_seed, "seed for the synthetic dataset");
        iters_o = cmd->add_option("--iterations", iterations, "gradient-descent iterations");
        beta_o = cmd->add_option("--beta", beta, "learning rate");
        sigma_o = cmd->add_option("--sigma", sigma, "noise standard deviation");
        alpha_o = cmd->add_option("--alpha", alpha, "truncation multiplier");
        t_o = cmd->add_option("--t", t, "maximum colluding servers");
        n_o = cmd->add_option("--n", n, "number of servers");
        r_o = cmd->add_option("--r", r, "secret magnitude bound (default from scale)");
        scale_o = cmd->add_option("--scale", scale, "feature scale: raw (0..255) or unit (0..1)");
        workers_o = cmd->add_option("--workers", workers, "comma-separated worker host:port list");
        prime_o = cmd->add_option("--fxp-prime", fxp_prime, "fixed-point field modulus");
        frac_o = cmd->add_option("--fxp-frac-bits", fxp_frac_bits, "fixed-point fraction bits");
        zero_o = cmd->add_flag("--zero-noise", zero_noise, "disable masking (test hook)");
        drift_o = cmd->add_flag("--drift-check", drift_check, "per-iteration decode drift diagnostics");
        sizes_o = compare_mode ? cmd->add_option("--sizes", sizes, "dataset size grid, e.g. 40,80,160")
                               : nullptr;
        repeats_o = compare_mode ? cmd->add_option("--repeats", repeats, "seeded repeats per cell") : nullptr;
        cmd->add_option("--config", config, "key = value config file");
    }

    std::string build_kv(bool compare_mode) const {
        KvBuilder kv;
        kv.include_file(config);
        if (config.empty() || seed_o->count() == 0) {
            // Environment seed is the weakest source.
            if (const char* env = std::getenv("ANALOG_SHARDS_SEED")) {
                std::string text = kv.text.str();
                kv.text.str("seed = " + std::string(env) + "\n" + text);
            }
        }
        kv.set_if(trainer_o, "trainer", trainer);
        kv.set_if(ti_o, "train_images", train_images);
        kv.set_if(tl_o, "train_labels", train_labels);
        kv.set_if(si_o, "test_images", test_images);
        kv.set_if(sl_o, "test_labels", test_labels);
        kv.set_if(pc_o, "per_class", per_class);
        kv.set_if(seed_o, "seed", seed);
        kv.set_if(synth_o, "synthetic_seed", synthetic_seed);
        kv.set_if(iters_o, "iterations", iterations);
        kv.set_if(beta_o, "beta", beta);
        kv.set_if(sigma_o, "sigma_n", sigma);
        kv.set_if(alpha_o, "alpha", alpha);
        kv.set_if(t_o, "t", t);
        kv.set_if(n_o, "n_servers", n);
        kv.set_if(r_o, "r", r);
        kv.set_if(scale_o, "feature_scale", scale);
        kv.set_if(workers_o, "workers", workers);
        kv.set_if(prime_o, "fxp_prime", fxp_prime);
        kv.set_if(frac_o, "fxp_frac_bits", fxp_frac_bits);
        if (zero_noise) kv.set("zero_noise", "1");
        if (drift_check) kv.set("drift_check", "1");
        if (compare_mode) {
            kv.set_if(sizes_o, "sizes", sizes);
            kv.set_if(repeats_o, "repeats", repeats);
        }
        return kv.text.str();
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"analog-shards: privacy-preserving computation over real-valued data"};
    app.require_subcommand(1);

    // ---- share ----------------------------------------------------------
    auto* share = app.add_subcommand("share", "encode a value or CSV matrix into per-server share files");
    ParamFlags share_params;
    share_params.attach(share);
    double share_value = 0.0;
    std::string share_input, share_out = "shares";
    bool share_zero = false;
    auto* share_value_o = share->add_option("--value", share_value, "scalar secret");
    auto* share_input_o = share->add_option("--input", share_input, "CSV matrix of secrets");
    share->add_option("--out", share_out, "output prefix");
    share->add_flag("--zero-noise", share_zero, "disable masking (test hook)");

    // ---- reconstruct ----------------------------------------------------
    auto* rec = app.add_subcommand("reconstruct", "decode per-server result files");
    ParamFlags rec_params;
    rec_params.attach(rec);
    std::vector<std::string> rec_files;
    std::uint32_t rec_degree_total = 0;
    rec->add_option("files", rec_files, "share/result files in server-index order")->required();
    auto* rec_deg_o = rec->add_option("--task-degree", rec_degree_total,
                                      "total share-domain degree (default degree * t)");

    // ---- eval-poly ------------------------------------------------------
    auto* ev = app.add_subcommand("eval-poly", "distributed polynomial evaluation of one secret");
    ParamFlags ev_params;
    ev_params.attach(ev, /*with_degree=*/false);
    std::string ev_coeffs;
    double ev_secret = 0.0;
    std::string ev_workers;
    bool ev_zero = false;
    ev->add_option("--coeffs", ev_coeffs, "polynomial coefficients, ascending (e.g. 0,0,1)")->required();
    ev->add_option("--secret", ev_secret, "secret value")->required();
    ev->add_option("--workers", ev_workers, "comma-separated worker host:port list (default: simulate)");
    ev->add_flag("--zero-noise", ev_zero, "disable masking (test hook)");

    // ---- bounds ---------------------------------------------------------
    auto* bounds = app.add_subcommand("bounds", "privacy report for (r, sigma, t, alpha)");
    double b_r = 255.0, b_sigma = 1e5, b_alpha = 10.0;
    std::uint32_t b_t = 1;
    bool b_csv = false;
    bounds->add_option("--r", b_r, "secret magnitude bound");
    bounds->add_option("--sigma", b_sigma, "noise standard deviation");
    bounds->add_option("--t", b_t, "colluding servers");
    bounds->add_option("--alpha", b_alpha, "truncation multiplier");
    bounds->add_flag("--csv", b_csv, "emit CSV instead of JSON");

    // ---- tradeoff -------------------------------------------------------
    auto* trade = app.add_subcommand("tradeoff", "accuracy/privacy trade-off table over a sigma grid");
    std::string tr_grid = "1e5,1e10,1e15";
    double tr_ad = 1.0, tr_alpha = 10.0, tr_r = 255.0;
    std::uint32_t tr_t = 1, tr_degree = 1;
    int tr_v = 52;
    std::string tr_out;
    bool tr_json = false;
    trade->add_option("--sigma-grid", tr_grid, "comma-separated sigma values");
    trade->add_option("--a-d", tr_ad, "leading coefficient magnitude");
    trade->add_option("--t", tr_t, "colluding servers");
    trade->add_option("--degree", tr_degree, "polynomial degree");
    trade->add_option("--alpha", tr_alpha, "truncation multiplier");
    trade->add_option("--r", tr_r, "secret magnitude bound");
    trade->add_option("--v", tr_v, "precision bits");
    trade->add_option("--out", tr_out, "also write the CSV here");
    trade->add_flag("--json", tr_json, "emit JSON instead of CSV");

    // ---- train ----------------------------------------------------------
    auto* train = app.add_subcommand("train", "train the logistic-regression model");
    TrainFlags train_flags;
    train_flags.attach(train, false);
    std::string train_out = "train";
    train->add_option("--out", train_out, "output prefix for .curve.csv / .report.json");

    // ---- compare --------------------------------------------------------
    auto* comp = app.add_subcommand("compare", "accuracy curves for all three trainers over a size grid");
    TrainFlags comp_flags;
    comp_flags.attach(comp, true);
    std::string comp_out = "compare";
    comp->add_option("--out", comp_out, "output prefix for .curve.csv / .report.json");

    // ---- worker ---------------------------------------------------------
    auto* worker = app.add_subcommand("worker", "serve one master connection as a compute worker");
    std::string w_listen;
    std::uint32_t w_index = 1;
    worker->add_option("--listen", w_listen, "host:port to listen on")->required();
    worker->add_option("--server-index", w_index, "this worker's server index")->required();

    // ---- make-data ------------------------------------------------------
    auto* mkdata = app.add_subcommand("make-data", "write the synthetic digit dataset as IDX files");
    std::string md_dir = ".";
    std::uint64_t md_seed = 42;
    mkdata->add_option("--dir", md_dir, "output directory");
    mkdata->add_option("--seed", md_seed, "generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    if (share->parsed()) {
        ConfigLayer layer;
        as_params* p = share_params.resolve(layer);
        std::vector<double> values;
        as_shape_kind kind = AS_SHAPE_SCALAR;
        std::uint64_t rows = 1, cols = 1;
        if (share_input_o->count() > 0) {
            parse_csv_matrix(share_input, values, rows, cols);
            kind = AS_SHAPE_MATRIX;
        } else if (share_value_o->count() > 0) {
            values.push_back(share_value);
        } else {
            std::cerr << "error: share needs --value or --input\n";
            return kExitValidation;
        }
        as_shareset* set = nullptr;
        check(as_share_values(p, values.data(), kind, rows, cols, 0, share_zero ? 1 : 0, &set));
        for (std::uint32_t i = 1; i <= as_shareset_count(set); ++i) {
            as_shareset* slice = nullptr;
            check(as_shareset_slice(set, i, &slice));
            uint8_t* bytes = nullptr;
            size_t len = 0;
            check(as_shareset_to_bytes(slice, &bytes, &len));
            write_binary_file(share_out + ".server" + std::to_string(i) + ".shares", bytes, len);
            as_buffer_free(bytes);
            as_shareset_free(slice);
        }
        uint8_t digest[32];
        check(as_params_digest(p, digest));
        char hex[65];
        for (int i = 0; i < 32; ++i) std::snprintf(hex + 2 * i, 3, "%02x", digest[i]);
        std::cout << "{\"seed\": " << share_params.seed << ", \"servers\": " << as_shareset_count(set)
                  << ", \"elements\": " << as_shareset_elements(set) << ", \"params_digest\": \""
                  << hex << "\", \"prefix\": \"" << share_out << "\"}\n";
        as_shareset_free(set);
        as_params_free(p);
        return kExitOk;
    }

    if (rec->parsed()) {
        ConfigLayer layer;
        as_params* p = rec_params.resolve(layer);
        std::vector<as_shareset*> slices;
        for (const auto& path : rec_files) {
            auto bytes = read_binary_file(path);
            as_shareset* s = nullptr;
            check(as_shareset_from_bytes(bytes.data(), bytes.size(), &s));
            slices.push_back(s);
        }
        as_shareset* merged = nullptr;
        check(as_shareset_merge(slices.data(), slices.size(), &merged));
        uint8_t want[32], got_digest[32];
        check(as_params_digest(p, want));
        as_shape_kind kind;
        std::uint64_t rows, cols;
        check(as_shareset_shape(merged, &kind, &rows, &cols));
        (void)got_digest;
        std::uint32_t degree_total =
            rec_deg_o->count() > 0 ? rec_degree_total : as_params_decode_degree(p);
        std::vector<double> out(as_shareset_elements(merged));
        double residue = 0.0;
        check(as_decode_set(p, merged, degree_total, out.data(), &residue));
        std::cout << "{\"seed\": " << rec_params.seed << ", \"elements\": " << out.size()
                  << ", \"imag_residue\": " << residue << ", \"values\": [";
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (i) std::cout << ", ";
            std::cout.precision(17);
            std::cout << out[i];
        }
        std::cout << "]}\n";
        for (auto* s : slices) as_shareset_free(s);
        as_shareset_free(merged);
        as_params_free(p);
        return kExitOk;
    }

    if (ev->parsed()) {
        ConfigLayer layer;
        auto coeffs = parse_number_list(ev_coeffs, "coefficients");
        ev_params.degree = static_cast<std::uint32_t>(coeffs.size() - 1);
        if (ev_params.degree == 0) {
            std::cerr << "error: polynomial must have degree >= 1\n";
            return kExitValidation;
        }
        as_params* p = ev_params.resolve(layer);
        double value = 0.0, residue = 0.0;
        as_status st = as_eval_poly(p, coeffs.data(), coeffs.size(), ev_secret,
                                    ev_workers.empty() ? nullptr : ev_workers.c_str(),
                                    ev_zero ? 1 : 0, &value, &residue);
        if (st != AS_OK) fail(st);
        std::cout.precision(17);
        std::cout << "{\"seed\": " << ev_params.seed << ", \"result\": " << value
                  << ", \"imag_residue\": " << residue << "}\n";
        as_params_free(p);
        return kExitOk;
    }

    if (bounds->parsed()) {
        char* text = nullptr;
        check(b_csv ? as_privacy_report_csv(b_r, b_sigma, b_t, b_alpha, &text)
                    : as_privacy_report_json(b_r, b_sigma, b_t, b_alpha, &text));
        std::cout << text << "\n";
        as_string_free(text);
        return kExitOk;
    }

    if (trade->parsed()) {
        auto grid = parse_number_list(tr_grid, "sigma grid");
        char* text = nullptr;
        check(tr_json ? as_tradeoff_json(grid.data(), grid.size(), tr_ad, tr_t, tr_degree, tr_alpha,
                                         tr_r, tr_v, &text)
                      : as_tradeoff_csv(grid.data(), grid.size(), tr_ad, tr_t, tr_degree, tr_alpha,
                                        tr_r, tr_v, &text));
        std::cout << text;
        if (!tr_out.empty()) {
            std::ofstream f(tr_out, std::ios::binary);
            f << text;
        }
        as_string_free(text);
        return kExitOk;
    }

    if (train->parsed()) {
        std::string kv = train_flags.build_kv(false);
        char* report = nullptr;
        as_status st = as_train_run(kv.c_str(), train_out.c_str(), &report);
        if (st != AS_OK) fail(st);
        std::cout << report << "\n";
        as_string_free(report);
        return kExitOk;
    }

    if (comp->parsed()) {
        std::string kv = comp_flags.build_kv(true);
        char* report = nullptr;
        as_status st = as_compare_run(kv.c_str(), comp_out.c_str(), &report);
        if (st != AS_OK) fail(st);
        std::cout << report << "\n";
        as_string_free(report);
        return kExitOk;
    }

    if (worker->parsed()) {
        as_status st = as_worker_serve(w_listen.c_str(), w_index);
        if (st != AS_OK) fail(st);
        return kExitOk;
    }

    if (mkdata->parsed()) {
        check(as_write_synthetic_idx(md_dir.c_str(), md_seed));
        std::cout << "{\"dir\": \"" << md_dir << "\", \"seed\": " << md_seed
                  << ", \"files\": [\"train-images.idx\", \"train-labels.idx\", "
                     "\"test-images.idx\", \"test-labels.idx\"]}\n";
        return kExitOk;
    }

    return kExitValidation;
}

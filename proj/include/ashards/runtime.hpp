#ifndef ASHARDS_RUNTIME_HPP
#define ASHARDS_RUNTIME_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ashards/params.hpp"
#include "ashards/rng.hpp"
#include "ashards/sharing.hpp"
#include "ashards/wire.hpp"

namespace ashards {

// What a worker is asked to do with its stored share slots.
struct TaskSpec {
    enum class Kind : std::uint8_t {
        EvalPolynomial = 1,     // apply f element-wise to one slot
        LrIterationProduct = 2, // matrix_slot^T (matrix_slot * vector_slot)
    };

    Kind kind = Kind::EvalPolynomial;
    std::vector<cplx> coefficients;  // ascending degree; EvalPolynomial only
    std::uint32_t input_slot = 0;
    std::uint32_t matrix_slot = 0;
    std::uint32_t vector_slot = 1;
    std::array<std::uint8_t, 32> params_digest{};

    // Total degree of the share-domain polynomial the task result evaluates,
    // i.e. what the decoder must interpolate.
    std::uint32_t share_degree(std::uint32_t t) const;

    std::vector<std::uint8_t> to_payload() const;
    static TaskSpec from_payload(std::span<const std::uint8_t> payload);
};

// z = X^T (X w) with plain (unconjugated) transpose, sequential accumulation.
// Shared by workers and the plaintext reference so that zero-noise runs are
// reproducible value-for-value.
void lr_product(const cplx* x, std::size_t rows, std::size_t cols, const cplx* w, cplx* z);

// Pure task execution on a worker's stored data.
std::vector<cplx> worker_eval(const TaskSpec& task,
                              const std::map<std::uint32_t, ShareSet>& slots);

struct TranscriptEntry {
    enum class Dir : std::uint8_t { MasterToWorker = 0, WorkerToMaster = 1 };
    Dir dir = Dir::MasterToWorker;
    std::uint32_t server_index = 0;
    MsgKind kind = MsgKind::Task;
    std::uint64_t task_id = 0;
    std::size_t payload_bytes = 0;
    std::vector<std::uint8_t> payload; // captured only when enabled
};

struct OpCounts {
    std::uint64_t messages_sent = 0;     // master -> workers
    std::uint64_t messages_received = 0; // workers -> master
    std::uint64_t bytes_sent = 0;
    std::uint64_t bytes_received = 0;
    std::uint64_t encoded_bytes = 0;     // share payload bytes pushed to workers
    std::uint64_t worker_flops = 0;      // estimated arithmetic across workers
};

struct Transcript {
    bool capture_payloads = false;
    std::vector<TranscriptEntry> entries;
    OpCounts counts;
};

// Master-side view of N workers. Implementations deliver encoded frames; the
// workers never talk to each other.
class Transport {
public:
    virtual ~Transport() = default;
    virtual std::uint32_t worker_count() const = 0;
    virtual void send(std::uint32_t server_index, const WireMessage& msg) = 0;
    virtual WireMessage receive(std::uint32_t server_index, std::chrono::milliseconds timeout) = 0;
    virtual void shutdown() = 0;
};

// Workers as threads inside this process, one inbox/outbox pair each.
class InProcessTransport : public Transport {
public:
    explicit InProcessTransport(std::uint32_t n_workers);
    ~InProcessTransport() override;

    std::uint32_t worker_count() const override;
    void send(std::uint32_t server_index, const WireMessage& msg) override;
    WireMessage receive(std::uint32_t server_index, std::chrono::milliseconds timeout) override;
    void shutdown() override;

    // Test hook: worker stops consuming its inbox, simulating a crash.
    void kill_worker(std::uint32_t server_index);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Stream connections to worker processes; address list order assigns server
// indices 1..N. Frames are length-prefixed (big-endian u32).
class SocketTransport : public Transport {
public:
    explicit SocketTransport(const std::vector<std::string>& addresses);
    ~SocketTransport() override;

    std::uint32_t worker_count() const override;
    void send(std::uint32_t server_index, const WireMessage& msg) override;
    WireMessage receive(std::uint32_t server_index, std::chrono::milliseconds timeout) override;
    void shutdown() override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Blocking worker loop: accept one master connection on listen_addr
// ("host:port") and serve frames until Shutdown or disconnect.
void serve_worker(const std::string& listen_addr, std::uint32_t server_index);

struct RunOptions {
    bool capture_payloads = false;
    std::chrono::milliseconds timeout{30000};
};

// Drives encode -> dispatch -> collect -> decode rounds over a transport.
// Results are consumed in server-index order regardless of arrival order.
class MasterSession {
public:
    MasterSession(const ProtocolParams& params, Transport& transport, RunOptions options = {});

    // Splits the set into per-server slices and ships slice i to worker i.
    void install_shares(std::uint32_t slot, const ShareSet& set);

    // Dispatches the task to every worker, waits for all N results, and
    // decodes the constant term element-wise. Throws ProtocolFailure if any
    // worker result is missing (no straggler recovery).
    std::vector<cplx> run_task(const TaskSpec& task, double* imag_residue_max = nullptr);

    const Transcript& transcript() const { return transcript_; }
    Transcript& transcript() { return transcript_; }
    const ProtocolParams& params() const { return params_; }

private:
    void send_recorded(std::uint32_t server_index, const WireMessage& msg);
    WireMessage receive_recorded(std::uint32_t server_index);
    const DecoderWeights& weights_for(std::uint32_t degree);

    ProtocolParams params_;
    Transport& transport_;
    RunOptions options_;
    Transcript transcript_;
    std::uint64_t next_task_id_ = 1;
    std::map<std::uint32_t, DecoderWeights> weights_cache_;
};

struct ProtocolOutput {
    cplx value;
    double imag_residue = 0.0;
};

// Algorithm run for one scalar secret and an explicit polynomial. The
// transcript (partial on failure) lands in *transcript_out when given.
ProtocolOutput run_protocol(cplx secret, std::span<const cplx> coeffs,
                            const ProtocolParams& params, Transport& transport, RngStream& rng,
                            bool zero_noise_hook = false, RunOptions options = {},
                            Transcript* transcript_out = nullptr);

} // namespace ashards

#endif

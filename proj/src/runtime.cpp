#include "ashards/runtime.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>

#include "ashards/serialize.hpp"

namespace ashards {

// ---------------------------------------------------------------------------
// Task payloads

std::uint32_t TaskSpec::share_degree(std::uint32_t t) const {
    switch (kind) {
        case Kind::EvalPolynomial:
            return coefficients.empty() ? 0 : static_cast<std::uint32_t>(coefficients.size() - 1) * t;
        case Kind::LrIterationProduct:
            return 3 * t; // three shared factors, each degree t
    }
    raise(ErrorCode::Internal, "task: unknown kind");
}

std::vector<std::uint8_t> TaskSpec::to_payload() const {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(kind));
    w.bytes(std::span<const std::uint8_t>(params_digest.data(), params_digest.size()));
    switch (kind) {
        case Kind::EvalPolynomial:
            w.u32_be(input_slot);
            w.u32_be(static_cast<std::uint32_t>(coefficients.size()));
            for (const cplx& c : coefficients) {
                w.f64_le(c.real());
                w.f64_le(c.imag());
            }
            break;
        case Kind::LrIterationProduct:
            w.u32_be(matrix_slot);
            w.u32_be(vector_slot);
            break;
    }
    return w.take();
}

TaskSpec TaskSpec::from_payload(std::span<const std::uint8_t> payload) {
    ByteReader r(payload);
    TaskSpec task;
    std::uint8_t kind = r.u8();
    if (kind != 1 && kind != 2) raise(ErrorCode::FormatError, "task: unknown kind tag");
    task.kind = static_cast<Kind>(kind);
    auto digest = r.bytes(32);
    std::copy(digest.begin(), digest.end(), task.params_digest.begin());
    if (task.kind == Kind::EvalPolynomial) {
        task.input_slot = r.u32_be();
        std::uint32_t n = r.u32_be();
        task.coefficients.resize(n);
        for (auto& c : task.coefficients) {
            double re = r.f64_le();
            double im = r.f64_le();
            c = {re, im};
        }
    } else {
        task.matrix_slot = r.u32_be();
        task.vector_slot = r.u32_be();
    }
    if (!r.done()) raise(ErrorCode::FormatError, "task: trailing payload bytes");
    return task;
}

// ---------------------------------------------------------------------------
// Worker arithmetic

void lr_product(const cplx* x, std::size_t rows, std::size_t cols, const cplx* w, cplx* z) {
    std::vector<cplx> xw(rows);
    for (std::size_t a = 0; a < rows; ++a) {
        cplx acc{0.0, 0.0};
        const cplx* row = x + a * cols;
        for (std::size_t j = 0; j < cols; ++j) acc += row[j] * w[j];
        xw[a] = acc;
    }
    for (std::size_t b = 0; b < cols; ++b) z[b] = cplx{0.0, 0.0};
    for (std::size_t a = 0; a < rows; ++a) {
        const cplx* row = x + a * cols;
        const cplx va = xw[a];
        for (std::size_t b = 0; b < cols; ++b) z[b] += row[b] * va;
    }
}

std::vector<cplx> worker_eval(const TaskSpec& task, const std::map<std::uint32_t, ShareSet>& slots) {
    auto fetch = [&](std::uint32_t slot) -> const ShareSet& {
        auto it = slots.find(slot);
        if (it == slots.end())
            raise(ErrorCode::InvalidArgument, "worker: no shares installed in slot " + std::to_string(slot));
        if (it->second.shares.size() != 1)
            raise(ErrorCode::InvalidArgument, "worker: slot holds more than one share slice");
        if (it->second.params_digest != task.params_digest)
            raise(ErrorCode::InvalidArgument, "worker: share parameters do not match the task");
        return it->second;
    };

    switch (task.kind) {
        case TaskSpec::Kind::EvalPolynomial: {
            const ShareSet& in = fetch(task.input_slot);
            std::vector<cplx> out(in.shares[0].size());
            for (std::size_t e = 0; e < out.size(); ++e)
                out[e] = eval_poly(task.coefficients, in.shares[0][e]);
            return out;
        }
        case TaskSpec::Kind::LrIterationProduct: {
            const ShareSet& mat = fetch(task.matrix_slot);
            const ShareSet& vec = fetch(task.vector_slot);
            if (mat.shape.kind != ShapeKind::Matrix)
                raise(ErrorCode::InvalidArgument, "worker: matrix slot does not hold a matrix");
            if (vec.shape.element_count() != mat.shape.cols)
                raise(ErrorCode::InvalidArgument, "worker: vector length does not match matrix columns");
            std::vector<cplx> out(mat.shape.cols);
            lr_product(mat.shares[0].data(), mat.shape.rows, mat.shape.cols, vec.shares[0].data(),
                       out.data());
            return out;
        }
    }
    raise(ErrorCode::Internal, "worker: unknown task kind");
}

// ---------------------------------------------------------------------------
// Worker state machine

namespace {

std::vector<std::uint8_t> result_payload(std::span<const cplx> values) {
    ByteWriter w;
    w.u64_be(values.size());
    for (const cplx& v : values) {
        w.f64_le(v.real());
        w.f64_le(v.imag());
    }
    return w.take();
}

std::vector<cplx> parse_result_payload(std::span<const std::uint8_t> payload) {
    ByteReader r(payload);
    std::uint64_t n = r.u64_be();
    if (n > (1ull << 32)) raise(ErrorCode::FormatError, "result: implausible element count");
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (auto& v : out) {
        double re = r.f64_le();
        double im = r.f64_le();
        v = {re, im};
    }
    if (!r.done()) raise(ErrorCode::FormatError, "result: trailing payload bytes");
    return out;
}

class WorkerState {
public:
    explicit WorkerState(std::uint32_t index) : index_(index) {}

    // Returns the response to send back, if any. Shutdown is handled by the
    // caller's loop.
    std::optional<WireMessage> handle(const WireMessage& msg) {
        if (msg.server_index != index_)
            return error_reply(msg, "message addressed to server " + std::to_string(msg.server_index) +
                                        " delivered to server " + std::to_string(index_));
        if (msg.task_id <= last_task_id_)
            return error_reply(msg, "task ids must increase within a session");
        last_task_id_ = msg.task_id;

        try {
            switch (msg.kind) {
                case MsgKind::Shares: {
                    ByteReader r(msg.payload);
                    std::uint32_t slot = r.u32_be();
                    slots_[slot] = shareset_from_bytes(
                        std::span<const std::uint8_t>(msg.payload).subspan(4));
                    return std::nullopt;
                }
                case MsgKind::Task: {
                    TaskSpec task = TaskSpec::from_payload(msg.payload);
                    std::vector<cplx> values = worker_eval(task, slots_);
                    WireMessage reply;
                    reply.kind = MsgKind::Result;
                    reply.task_id = msg.task_id;
                    reply.server_index = index_;
                    reply.payload = result_payload(values);
                    return reply;
                }
                default:
                    return error_reply(msg, "unexpected message kind");
            }
        } catch (const Error& e) {
            return error_reply(msg, e.what());
        }
    }

private:
    WireMessage error_reply(const WireMessage& msg, const std::string& text) {
        WireMessage reply;
        reply.kind = MsgKind::Error;
        reply.task_id = msg.task_id;
        reply.server_index = index_;
        reply.payload.assign(text.begin(), text.end());
        return reply;
    }

    std::uint32_t index_;
    std::uint64_t last_task_id_ = 0;
    std::map<std::uint32_t, ShareSet> slots_;
};

} // namespace

// ---------------------------------------------------------------------------
// In-process transport

namespace {

class FrameQueue {
public:
    void push(std::vector<std::uint8_t> frame) {
        {
            std::lock_guard<std::mutex> lock(m_);
            q_.push_back(std::move(frame));
        }
        cv_.notify_one();
    }

    // Blocks until a frame arrives, the timeout expires (nullopt) or the
    // queue is closed and drained (nullopt).
    std::optional<std::vector<std::uint8_t>> pop(std::chrono::milliseconds timeout) {
        std::unique_lock<std::mutex> lock(m_);
        if (!cv_.wait_for(lock, timeout, [&] { return !q_.empty() || closed_; })) return std::nullopt;
        if (q_.empty()) return std::nullopt;
        auto frame = std::move(q_.front());
        q_.pop_front();
        return frame;
    }

    std::optional<std::vector<std::uint8_t>> pop_blocking() {
        std::unique_lock<std::mutex> lock(m_);
        cv_.wait(lock, [&] { return !q_.empty() || closed_; });
        if (q_.empty()) return std::nullopt;
        auto frame = std::move(q_.front());
        q_.pop_front();
        return frame;
    }

    void close() {
        {
            std::lock_guard<std::mutex> lock(m_);
            closed_ = true;
        }
        cv_.notify_all();
    }

private:
    std::mutex m_;
    std::condition_variable cv_;
    std::deque<std::vector<std::uint8_t>> q_;
    bool closed_ = false;
};

} // namespace

struct InProcessTransport::Impl {
    struct Worker {
        FrameQueue inbox;
        FrameQueue outbox;
        std::thread thread;
    };

    explicit Impl(std::uint32_t n) : workers(n) {
        for (std::uint32_t i = 0; i < n; ++i) {
            Worker& w = workers[i];
            w.thread = std::thread([&w, index = i + 1] {
                WorkerState state(index);
                while (auto frame = w.inbox.pop_blocking()) {
                    WireMessage msg;
                    try {
                        msg = decode_frame(*frame);
                    } catch (const Error& e) {
                        WireMessage err;
                        err.kind = MsgKind::Error;
                        err.server_index = index;
                        std::string text = e.what();
                        err.payload.assign(text.begin(), text.end());
                        w.outbox.push(encode_frame(err));
                        continue;
                    }
                    if (msg.kind == MsgKind::Shutdown) break;
                    if (auto reply = state.handle(msg)) w.outbox.push(encode_frame(*reply));
                }
            });
        }
    }

    Worker& at(std::uint32_t server_index) {
        if (server_index < 1 || server_index > workers.size())
            raise(ErrorCode::InvalidArgument, "transport: server index out of range");
        return workers[server_index - 1];
    }

    std::deque<Worker> workers;
    std::atomic<bool> down{false};
};

InProcessTransport::InProcessTransport(std::uint32_t n_workers)
    : impl_(std::make_unique<Impl>(n_workers)) {
    if (n_workers == 0) raise(ErrorCode::InvalidArgument, "transport: need at least one worker");
}

InProcessTransport::~InProcessTransport() {
    try {
        shutdown();
    } catch (...) {
    }
}

std::uint32_t InProcessTransport::worker_count() const {
    return static_cast<std::uint32_t>(impl_->workers.size());
}

void InProcessTransport::send(std::uint32_t server_index, const WireMessage& msg) {
    impl_->at(server_index).inbox.push(encode_frame(msg));
}

WireMessage InProcessTransport::receive(std::uint32_t server_index, std::chrono::milliseconds timeout) {
    auto frame = impl_->at(server_index).outbox.pop(timeout);
    if (!frame)
        raise(ErrorCode::ProtocolFailure,
              "no result from server " + std::to_string(server_index) + " within the timeout");
    return decode_frame(*frame);
}

void InProcessTransport::shutdown() {
    if (impl_->down.exchange(true)) return;
    for (std::size_t i = 0; i < impl_->workers.size(); ++i) {
        WireMessage bye;
        bye.kind = MsgKind::Shutdown;
        bye.task_id = ~0ull;
        bye.server_index = static_cast<std::uint32_t>(i + 1);
        impl_->workers[i].inbox.push(encode_frame(bye));
        impl_->workers[i].inbox.close();
    }
    for (auto& w : impl_->workers)
        if (w.thread.joinable()) w.thread.join();
}

void InProcessTransport::kill_worker(std::uint32_t server_index) {
    auto& w = impl_->at(server_index);
    w.inbox.close();
    if (w.thread.joinable()) w.thread.join();
}

// ---------------------------------------------------------------------------
// Socket transport

namespace {

struct Address {
    std::string host;
    std::string port;
};

Address parse_address(const std::string& addr) {
    auto pos = addr.rfind(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == addr.size())
        raise(ErrorCode::InvalidArgument, "bad address (want host:port): " + addr);
    return {addr.substr(0, pos), addr.substr(pos + 1)};
}

int connect_to(const Address& addr) {
    struct addrinfo hints {};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    struct addrinfo* res = nullptr;
    int rc = getaddrinfo(addr.host.c_str(), addr.port.c_str(), &hints, &res);
    if (rc != 0)
        raise(ErrorCode::ProtocolFailure, "cannot resolve " + addr.host + ":" + addr.port);
    int fd = -1;
    for (struct addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        close(fd);
        fd = -1;
    }
    freeaddrinfo(res);
    if (fd < 0)
        raise(ErrorCode::ProtocolFailure, "cannot connect to " + addr.host + ":" + addr.port);
    int one = 1;
    setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return fd;
}

void write_all(int fd, const std::uint8_t* data, std::size_t len) {
    while (len > 0) {
        ssize_t n = ::send(fd, data, len, MSG_NOSIGNAL);
        if (n <= 0) raise(ErrorCode::ProtocolFailure, "connection lost while sending");
        data += n;
        len -= static_cast<std::size_t>(n);
    }
}

// Reads exactly len bytes; false on orderly EOF at a frame boundary.
bool read_all(int fd, std::uint8_t* data, std::size_t len, std::chrono::milliseconds timeout) {
    auto deadline = std::chrono::steady_clock::now() + timeout;
    std::size_t got = 0;
    while (got < len) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0)
            raise(ErrorCode::ProtocolFailure, "timed out waiting for worker data");
        struct pollfd pfd {fd, POLLIN, 0};
        int pr = poll(&pfd, 1, static_cast<int>(left.count()));
        if (pr == 0) raise(ErrorCode::ProtocolFailure, "timed out waiting for worker data");
        if (pr < 0) raise(ErrorCode::ProtocolFailure, "poll failed while receiving");
        ssize_t n = recv(fd, data + got, len - got, 0);
        if (n == 0) {
            if (got == 0) return false;
            raise(ErrorCode::ProtocolFailure, "connection closed mid-frame");
        }
        if (n < 0) raise(ErrorCode::ProtocolFailure, "receive failed");
        got += static_cast<std::size_t>(n);
    }
    return true;
}

void send_frame(int fd, const WireMessage& msg) {
    std::vector<std::uint8_t> frame = encode_frame(msg);
    std::uint8_t prefix[4];
    std::uint32_t len = static_cast<std::uint32_t>(frame.size());
    for (int i = 0; i < 4; ++i) prefix[i] = static_cast<std::uint8_t>(len >> (24 - 8 * i));
    write_all(fd, prefix, 4);
    write_all(fd, frame.data(), frame.size());
}

std::optional<WireMessage> recv_frame(int fd, std::chrono::milliseconds timeout) {
    std::uint8_t prefix[4];
    if (!read_all(fd, prefix, 4, timeout)) return std::nullopt;
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len = (len << 8) | prefix[i];
    if (len > (1u << 30)) raise(ErrorCode::FormatError, "frame length out of range");
    std::vector<std::uint8_t> frame(len);
    if (!read_all(fd, frame.data(), len, timeout))
        raise(ErrorCode::ProtocolFailure, "connection closed mid-frame");
    return decode_frame(frame);
}

} // namespace

struct SocketTransport::Impl {
    std::vector<int> fds;
    bool down = false;
};

SocketTransport::SocketTransport(const std::vector<std::string>& addresses)
    : impl_(std::make_unique<Impl>()) {
    if (addresses.empty()) raise(ErrorCode::InvalidArgument, "transport: empty worker address list");
    impl_->fds.reserve(addresses.size());
    for (const auto& a : addresses) impl_->fds.push_back(connect_to(parse_address(a)));
}

SocketTransport::~SocketTransport() {
    try {
        shutdown();
    } catch (...) {
    }
}

std::uint32_t SocketTransport::worker_count() const {
    return static_cast<std::uint32_t>(impl_->fds.size());
}

void SocketTransport::send(std::uint32_t server_index, const WireMessage& msg) {
    if (server_index < 1 || server_index > impl_->fds.size())
        raise(ErrorCode::InvalidArgument, "transport: server index out of range");
    send_frame(impl_->fds[server_index - 1], msg);
}

WireMessage SocketTransport::receive(std::uint32_t server_index, std::chrono::milliseconds timeout) {
    if (server_index < 1 || server_index > impl_->fds.size())
        raise(ErrorCode::InvalidArgument, "transport: server index out of range");
    auto msg = recv_frame(impl_->fds[server_index - 1], timeout);
    if (!msg)
        raise(ErrorCode::ProtocolFailure,
              "server " + std::to_string(server_index) + " closed the connection");
    return *msg;
}

void SocketTransport::shutdown() {
    if (impl_->down) return;
    impl_->down = true;
    for (std::size_t i = 0; i < impl_->fds.size(); ++i) {
        WireMessage bye;
        bye.kind = MsgKind::Shutdown;
        bye.task_id = ~0ull;
        bye.server_index = static_cast<std::uint32_t>(i + 1);
        try {
            send_frame(impl_->fds[i], bye);
        } catch (...) {
        }
        close(impl_->fds[i]);
    }
    impl_->fds.clear();
}

void serve_worker(const std::string& listen_addr, std::uint32_t server_index) {
    Address addr = parse_address(listen_addr);
    struct addrinfo hints {};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    struct addrinfo* res = nullptr;
    if (getaddrinfo(addr.host.c_str(), addr.port.c_str(), &hints, &res) != 0)
        raise(ErrorCode::IoError, "worker: cannot resolve listen address " + listen_addr);
    int lfd = -1;
    for (struct addrinfo* ai = res; ai; ai = ai->ai_next) {
        lfd = socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (lfd < 0) continue;
        int one = 1;
        setsockopt(lfd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        if (bind(lfd, ai->ai_addr, ai->ai_addrlen) == 0 && listen(lfd, 1) == 0) break;
        close(lfd);
        lfd = -1;
    }
    freeaddrinfo(res);
    if (lfd < 0) raise(ErrorCode::IoError, "worker: cannot listen on " + listen_addr);

    int fd = accept(lfd, nullptr, nullptr);
    close(lfd);
    if (fd < 0) raise(ErrorCode::IoError, "worker: accept failed");

    WorkerState state(server_index);
    constexpr std::chrono::milliseconds kIdle{86400000}; // workers wait on the master
    try {
        while (true) {
            auto msg = recv_frame(fd, kIdle);
            if (!msg || msg->kind == MsgKind::Shutdown) break;
            if (auto reply = state.handle(*msg)) send_frame(fd, *reply);
        }
    } catch (const Error&) {
        // Master went away; nothing left to serve.
    }
    close(fd);
}

// ---------------------------------------------------------------------------
// Master session

MasterSession::MasterSession(const ProtocolParams& params, Transport& transport, RunOptions options)
    : params_(params), transport_(transport), options_(options) {
    if (transport.worker_count() != params.n_servers)
        raise(ErrorCode::InvalidArgument, "master: transport has " +
                                              std::to_string(transport.worker_count()) +
                                              " workers but params expect " +
                                              std::to_string(params.n_servers));
    transcript_.capture_payloads = options.capture_payloads;
}

void MasterSession::send_recorded(std::uint32_t server_index, const WireMessage& msg) {
    TranscriptEntry entry;
    entry.dir = TranscriptEntry::Dir::MasterToWorker;
    entry.server_index = server_index;
    entry.kind = msg.kind;
    entry.task_id = msg.task_id;
    entry.payload_bytes = msg.payload.size();
    if (transcript_.capture_payloads) entry.payload = msg.payload;
    transcript_.entries.push_back(std::move(entry));
    transcript_.counts.messages_sent++;
    transcript_.counts.bytes_sent += msg.payload.size();
    transport_.send(server_index, msg);
}

WireMessage MasterSession::receive_recorded(std::uint32_t server_index) {
    WireMessage msg = transport_.receive(server_index, options_.timeout);
    TranscriptEntry entry;
    entry.dir = TranscriptEntry::Dir::WorkerToMaster;
    entry.server_index = server_index;
    entry.kind = msg.kind;
    entry.task_id = msg.task_id;
    entry.payload_bytes = msg.payload.size();
    if (transcript_.capture_payloads) entry.payload = msg.payload;
    transcript_.entries.push_back(std::move(entry));
    transcript_.counts.messages_received++;
    transcript_.counts.bytes_received += msg.payload.size();
    return msg;
}

void MasterSession::install_shares(std::uint32_t slot, const ShareSet& set) {
    if (set.shares.size() != params_.n_servers)
        raise(ErrorCode::InvalidArgument, "master: share set does not cover all servers");
    for (std::uint32_t i = 1; i <= params_.n_servers; ++i) {
        ShareSet slice = shareset_slice(set, i);
        ByteWriter w;
        w.u32_be(slot);
        auto bytes = shareset_to_bytes(slice);
        w.bytes(bytes);
        WireMessage msg;
        msg.kind = MsgKind::Shares;
        msg.task_id = next_task_id_++;
        msg.server_index = i;
        msg.payload = w.take();
        transcript_.counts.encoded_bytes += msg.payload.size();
        send_recorded(i, msg);
    }
}

const DecoderWeights& MasterSession::weights_for(std::uint32_t degree) {
    auto it = weights_cache_.find(degree);
    if (it == weights_cache_.end())
        it = weights_cache_.emplace(degree, decoder_weights(params_, degree)).first;
    return it->second;
}

std::vector<cplx> MasterSession::run_task(const TaskSpec& task, double* imag_residue_max) {
    if (task.kind == TaskSpec::Kind::EvalPolynomial &&
        !task.coefficients.empty() &&
        static_cast<std::uint32_t>(task.coefficients.size() - 1) != params_.poly_degree)
        raise(ErrorCode::InvalidArgument,
              "master: task polynomial degree does not match the configured degree");

    const std::uint64_t tid = next_task_id_++;
    std::vector<std::uint8_t> payload = task.to_payload();
    for (std::uint32_t i = 1; i <= params_.n_servers; ++i) {
        WireMessage msg;
        msg.kind = MsgKind::Task;
        msg.task_id = tid;
        msg.server_index = i;
        msg.payload = payload;
        send_recorded(i, msg);
    }

    // Barrier: all N results, consumed in server-index order.
    std::vector<std::vector<cplx>> results(params_.n_servers);
    for (std::uint32_t i = 1; i <= params_.n_servers; ++i) {
        WireMessage msg = receive_recorded(i);
        if (msg.kind == MsgKind::Error)
            raise(ErrorCode::ProtocolFailure,
                  "server " + std::to_string(i) + " reported: " +
                      std::string(msg.payload.begin(), msg.payload.end()));
        if (msg.kind != MsgKind::Result)
            raise(ErrorCode::FormatError, "master: unexpected message kind from worker");
        if (msg.task_id != tid)
            raise(ErrorCode::ProtocolFailure, "master: result for a different task");
        if (msg.server_index != i)
            raise(ErrorCode::ProtocolFailure, "master: result from an unexpected server");
        results[i - 1] = parse_result_payload(msg.payload);
        if (results[i - 1].size() != results[0].size())
            raise(ErrorCode::ProtocolFailure, "master: result sizes disagree across servers");
    }

    const DecoderWeights& weights = weights_for(task.share_degree(params_.max_colluders));
    const std::size_t count = results[0].size();
    std::vector<cplx> decoded(count);
    double residue = 0.0;
    std::vector<cplx> column(params_.n_servers);
    for (std::size_t e = 0; e < count; ++e) {
        for (std::uint32_t i = 0; i < params_.n_servers; ++i) column[i] = results[i][e];
        decoded[e] = decode_constant(column, weights);
        residue = std::max(residue, std::abs(decoded[e].imag()));
    }
    if (imag_residue_max) *imag_residue_max = residue;
    return decoded;
}

ProtocolOutput run_protocol(cplx secret, std::span<const cplx> coeffs,
                            const ProtocolParams& params, Transport& transport, RngStream& rng,
                            bool zero_noise_hook, RunOptions options, Transcript* transcript_out) {
    MasterSession session(params, transport, options);
    try {
        auto noise = zero_noise_hook ? zero_noise(params.max_colluders, 1)
                                     : sample_truncated_noise(params, 1, rng);
        ShareSet shares =
            encode_secret(std::span<const cplx>(&secret, 1), Shape::scalar(), params, noise);
        session.install_shares(0, shares);

        TaskSpec task;
        task.kind = TaskSpec::Kind::EvalPolynomial;
        task.coefficients.assign(coeffs.begin(), coeffs.end());
        task.input_slot = 0;
        task.params_digest = params.digest();
        // Element count  *  polynomial steps, 8 flops per complex multiply-add.
        session.transcript().counts.worker_flops +=
            8ull * params.n_servers * coeffs.size();

        double residue = 0.0;
        std::vector<cplx> decoded = session.run_task(task, &residue);
        if (transcript_out) *transcript_out = session.transcript();
        return {decoded.at(0), residue};
    } catch (...) {
        if (transcript_out) *transcript_out = session.transcript();
        throw;
    }
}

} // namespace ashards

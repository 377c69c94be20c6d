#pragma once

// Streaming ingestion: a datagram source abstraction, a POSIX UDP
// implementation, and collect_stream which turns received packets into a
// Recording (reordering by sequence number, holding the last value across
// gaps, and noting losses).

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eegloop/core.hpp"
#include "eegloop/packet.hpp"
#include "eegloop/recording.hpp"

namespace eegloop {

class PacketSource {
  public:
    virtual ~PacketSource() = default;
    // Next datagram, or nullopt if none arrived within the timeout.
    virtual std::optional<std::vector<std::uint8_t>> next_datagram(
        std::chrono::milliseconds timeout) = 0;
};

class UdpSource final : public PacketSource {
  public:
    // port 0 binds an ephemeral port (useful for loopback tests).
    explicit UdpSource(std::uint16_t port, const std::string& bind_addr = "0.0.0.0") {
        fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
        if (fd_ < 0) throw NetworkError("udp: socket() failed");
        int reuse = 1;
        ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &reuse, sizeof(reuse));
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        if (::inet_pton(AF_INET, bind_addr.c_str(), &addr.sin_addr) != 1) {
            ::close(fd_);
            throw NetworkError("udp: bad bind address '" + bind_addr + "'");
        }
        if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
            ::close(fd_);
            throw NetworkError("udp: cannot bind port " + std::to_string(port));
        }
    }

    UdpSource(const UdpSource&) = delete;
    UdpSource& operator=(const UdpSource&) = delete;

    ~UdpSource() override {
        if (fd_ >= 0) ::close(fd_);
    }

    std::uint16_t port() const {
        sockaddr_in addr{};
        socklen_t len = sizeof(addr);
        if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0)
            throw NetworkError("udp: getsockname() failed");
        return ntohs(addr.sin_port);
    }

    std::optional<std::vector<std::uint8_t>> next_datagram(
        std::chrono::milliseconds timeout) override {
        pollfd pfd{fd_, POLLIN, 0};
        const int r = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
        if (r <= 0) return std::nullopt;
        std::vector<std::uint8_t> buf(65536);
        const ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), 0, nullptr, nullptr);
        if (n < 0) return std::nullopt;
        buf.resize(static_cast<std::size_t>(n));
        return buf;
    }

  private:
    int fd_ = -1;
};

// Canned datagrams, for replay tests.
class ReplaySource final : public PacketSource {
  public:
    explicit ReplaySource(std::vector<std::vector<std::uint8_t>> datagrams)
        : datagrams_(datagrams.begin(), datagrams.end()) {}

    std::optional<std::vector<std::uint8_t>> next_datagram(
        std::chrono::milliseconds) override {
        if (datagrams_.empty()) return std::nullopt;
        auto d = std::move(datagrams_.front());
        datagrams_.pop_front();
        return d;
    }

  private:
    std::deque<std::vector<std::uint8_t>> datagrams_;
};

struct StopCondition {
    std::optional<std::chrono::milliseconds> duration;
    std::optional<std::size_t> max_packets;  // counts successfully decoded packets
    const std::atomic<bool>* stop_flag = nullptr;
};

// Receives until the stop condition triggers and the source runs dry, then
// assembles a Recording. Packets are reordered by seq; missing sequence
// numbers are filled by repeating the previous sample with interpolated
// timestamps. Zero received packets is an error; loss above 10% and any
// malformed datagrams are noted on the Recording.
inline Recording collect_stream(PacketSource& source, const StopCondition& stop,
                                double sample_rate_hz, std::string subject_id = "") {
    using clock = std::chrono::steady_clock;
    const auto started = clock::now();
    std::map<std::uint32_t, StreamPacket> by_seq;
    std::size_t malformed = 0;
    std::size_t duplicates = 0;

    const auto should_stop = [&] {
        if (stop.stop_flag && stop.stop_flag->load(std::memory_order_relaxed)) return true;
        if (stop.max_packets && by_seq.size() >= *stop.max_packets) return true;
        if (stop.duration && clock::now() - started >= *stop.duration) return true;
        return false;
    };

    while (!should_stop()) {
        auto wait = std::chrono::milliseconds(50);
        if (stop.duration) {
            const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                *stop.duration - (clock::now() - started));
            if (left <= std::chrono::milliseconds(0)) break;
            wait = std::min(wait, left);
        }
        auto datagram = source.next_datagram(wait);
        if (!datagram) {
            // A drained replay source never produces more data; for live
            // sources the poll timeout just loops back to the stop check.
            if (!stop.duration && !stop.stop_flag) break;
            continue;
        }
        try {
            StreamPacket p = decode_packet(*datagram);
            auto [it, inserted] = by_seq.emplace(p.seq, std::move(p));
            if (!inserted) ++duplicates;
        } catch (const PacketDecodeError&) {
            ++malformed;
        }
    }

    if (by_seq.empty())
        throw NetworkError("stream: zero packets received");

    Recording rec;
    rec.sample_rate_hz = sample_rate_hz;
    rec.subject_id = std::move(subject_id);

    const std::uint32_t first_seq = by_seq.begin()->first;
    const std::uint32_t last_seq = by_seq.rbegin()->first;
    const std::size_t span = static_cast<std::size_t>(last_seq - first_seq) + 1;
    const std::size_t missing = span - by_seq.size();

    auto it = by_seq.begin();
    const StreamPacket* prev = nullptr;
    for (std::uint32_t seq = first_seq; ; ++seq) {
        RawSample s;
        if (it != by_seq.end() && it->first == seq) {
            const StreamPacket& p = it->second;
            s.t_ms = p.t_ms;
            s.marker = p.marker;
            for (std::size_t c = 0; c < kNumElectrodes; ++c)
                s.values[c] = static_cast<double>(p.values[c]);
            prev = &p;
            ++it;
        } else {
            // Gap: hold the previous sample's values and marker, spread the
            // timestamp evenly toward the next received packet.
            const StreamPacket& next = it->second;
            const std::uint32_t gap_start = prev->seq;
            const double frac = static_cast<double>(seq - gap_start) /
                                static_cast<double>(next.seq - gap_start);
            s.t_ms = prev->t_ms +
                     static_cast<std::uint64_t>(std::llround(
                         frac * static_cast<double>(next.t_ms - prev->t_ms)));
            s.marker = prev->marker;
            for (std::size_t c = 0; c < kNumElectrodes; ++c)
                s.values[c] = static_cast<double>(prev->values[c]);
        }
        if (!rec.samples.empty() && s.t_ms <= rec.samples.back().t_ms)
            s.t_ms = rec.samples.back().t_ms + 1;
        rec.samples.push_back(std::move(s));
        if (seq == last_seq) break;
    }

    if (missing > 0)
        rec.notes.push_back("stream: filled " + std::to_string(missing) +
                            " missing packet(s) by last-value hold");
    if (static_cast<double>(missing) > 0.10 * static_cast<double>(span))
        rec.notes.push_back("stream: packet loss above 10% (" +
                            std::to_string(missing) + "/" + std::to_string(span) + ")");
    if (duplicates > 0)
        rec.notes.push_back("stream: ignored " + std::to_string(duplicates) +
                            " duplicate packet(s)");
    if (malformed > 0)
        rec.notes.push_back("stream: dropped " + std::to_string(malformed) +
                            " malformed datagram(s)");

    validate_recording(rec);
    return rec;
}

}  // namespace eegloop

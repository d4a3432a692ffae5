#include "wrsn/trace.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace wrsn {

StepSummary summarize(const SimulationState& state) {
    StepSummary s;
    s.clock = state.clock;
    for (const auto& n : state.nodes) s.alive += n.alive ? 1 : 0;
    s.queue_length = static_cast<int>(state.request_queue.size());
    s.mcvs.reserve(state.mcvs.size());
    for (const auto& m : state.mcvs)
        s.mcvs.push_back({m.id, m.position, m.residual, m.odometer, m.travel_energy_total, m.energy_sent_total, m.mode});
    return s;
}

namespace {

struct EventWriter {
    std::string& out;
    double clock;

    void operator()(const RequestEvent& e) const {
        fmt::format_to(std::back_inserter(out), "E {:.17g} request {} {:.17g}\n", clock, e.node, e.reported_residual);
    }
    void operator()(const DeathEvent& e) const {
        fmt::format_to(std::back_inserter(out), "E {:.17g} death {}\n", clock, e.node);
    }
    void operator()(const DispatchEvent& e) const {
        fmt::format_to(std::back_inserter(out), "E {:.17g} dispatch {} {}\n", clock, e.mcv, e.node);
    }
    void operator()(const ArrivalEvent& e) const {
        fmt::format_to(std::back_inserter(out), "E {:.17g} arrival {} {}\n", clock, e.mcv, e.node);
    }
    void operator()(const ChargeEvent& e) const {
        fmt::format_to(std::back_inserter(out), "E {:.17g} charge {} {} {:.17g} {:.17g}\n", clock, e.mcv, e.node,
                       e.sent, e.received);
    }
    void operator()(const SessionEndEvent& e) const {
        fmt::format_to(std::back_inserter(out), "E {:.17g} session_end {} {} {}\n", clock, e.mcv, e.node,
                       to_string(e.reason));
    }
    void operator()(const RefillEvent& e) const {
        fmt::format_to(std::back_inserter(out), "E {:.17g} refill {} {:.17g}\n", clock, e.mcv, e.amount);
    }
    void operator()(const WarningEvent& e) const {
        fmt::format_to(std::back_inserter(out), "E {:.17g} warning {}\n", clock, e.message);
    }
};

void append_summary(std::string& out, const StepSummary& s) {
    auto it = std::back_inserter(out);
    fmt::format_to(it, "S {:.17g} {} {}", s.clock, s.alive, s.queue_length);
    for (const auto& m : s.mcvs)
        fmt::format_to(it, " {} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {}", m.id, m.position.x, m.position.y,
                       m.residual, m.odometer, m.travel_energy, m.energy_sent, to_string(m.mode));
    out.push_back('\n');
}

void append_score(std::string& out, const ScoreRecord& r) {
    fmt::format_to(std::back_inserter(out), "F {:.17g} {} {:.17g} {:.17g} {:.17g} {:.17g} {:.17g} {}\n", r.clock,
                   r.node, r.request, r.energy, r.reputation, r.efficiency, r.combined, r.flagged ? 1 : 0);
}

void append_queue(std::string& out, const QueueRecord& q) {
    auto it = std::back_inserter(out);
    fmt::format_to(it, "Q {:.17g} {}", q.clock, q.ordered.size());
    for (const auto& e : q.ordered) fmt::format_to(it, " {} {:.17g} {:.17g}", e.node, e.reported_residual, e.issued_at);
    fmt::format_to(it, " {}", q.excluded.size());
    for (const auto& e : q.excluded) fmt::format_to(it, " {} {}", e.node_id, e.reason);
    out.push_back('\n');
}

// Streams are merged by clock; within one clock the order is events, step
// summary, scores, queue updates.
template <typename Sink>
void emit(const TraceLog& trace, Sink&& sink) {
    std::string buf;
    buf.reserve(1 << 16);
    fmt::format_to(std::back_inserter(buf), "wrsn-trace {}\n", kTraceFormatVersion);
    std::size_t ie = 0, is = 0, ic = 0, iq = 0;
    auto next_clock = [&] {
        double c = std::numeric_limits<double>::infinity();
        if (ie < trace.events.size()) c = std::min(c, trace.events[ie].clock);
        if (is < trace.steps.size()) c = std::min(c, trace.steps[is].clock);
        if (ic < trace.scores.size()) c = std::min(c, trace.scores[ic].clock);
        if (iq < trace.queue_updates.size()) c = std::min(c, trace.queue_updates[iq].clock);
        return c;
    };
    for (double c = next_clock(); c != std::numeric_limits<double>::infinity(); c = next_clock()) {
        for (; ie < trace.events.size() && trace.events[ie].clock == c; ++ie)
            std::visit(EventWriter{buf, c}, trace.events[ie].payload);
        for (; is < trace.steps.size() && trace.steps[is].clock == c; ++is) append_summary(buf, trace.steps[is]);
        for (; ic < trace.scores.size() && trace.scores[ic].clock == c; ++ic) append_score(buf, trace.scores[ic]);
        for (; iq < trace.queue_updates.size() && trace.queue_updates[iq].clock == c; ++iq)
            append_queue(buf, trace.queue_updates[iq]);
        if (buf.size() > (1 << 15)) {
            sink(std::string_view(buf));
            buf.clear();
        }
    }
    fmt::format_to(std::back_inserter(buf), "T {:.17g}\n", trace.depot_energy_drawn);
    sink(std::string_view(buf));
}

}  // namespace

void write_trace(std::ostream& out, const TraceLog& trace) {
    emit(trace, [&](std::string_view chunk) { out.write(chunk.data(), static_cast<std::streamsize>(chunk.size())); });
}

std::string serialize_trace(const TraceLog& trace) {
    std::string all;
    emit(trace, [&](std::string_view chunk) { all.append(chunk); });
    return all;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string trace_hash(const TraceLog& trace) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    emit(trace, [&](std::string_view chunk) { h = fnv1a64(chunk, h); });
    return fmt::format("{:016x}", h);
}

}  // namespace wrsn

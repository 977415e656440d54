#pragma once

// RIC message envelope and its NDJSON wire form. One JSON object per line,
// fields always emitted in the same order, absent fields omitted, doubles
// rendered shortest-round-trip so identical runs produce identical bytes.

#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "skycell/world.hpp"

namespace skycell {

enum class MsgKind { subscribe, indication, control, ack, error };

inline const char* msg_kind_name(MsgKind k) {
    switch (k) {
        case MsgKind::subscribe: return "subscribe";
        case MsgKind::indication: return "indication";
        case MsgKind::control: return "control";
        case MsgKind::ack: return "ack";
        case MsgKind::error: return "error";
    }
    throw std::logic_error("msg_kind_name: bad kind");
}

inline MsgKind msg_kind_from_name(std::string_view s) {
    if (s == "subscribe") return MsgKind::subscribe;
    if (s == "indication") return MsgKind::indication;
    if (s == "control") return MsgKind::control;
    if (s == "ack") return MsgKind::ack;
    if (s == "error") return MsgKind::error;
    throw std::runtime_error("unknown message kind '" + std::string(s) + "'");
}

struct RicEnvelope {
    std::uint64_t seq = 0;
    MsgKind kind = MsgKind::indication;
    std::optional<int> day;
    std::optional<int> hour;
    std::optional<int> cell_id;
    std::optional<bool> on;
    std::optional<int> connected_ues;
    std::optional<double> throughput_mbps;
    std::optional<double> energy_wh;
    std::optional<std::string> command;  // "on" | "off"
    std::optional<int> target_cell_id;

    bool operator==(const RicEnvelope&) const = default;
};

namespace detail {

inline void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

}  // namespace detail

// One NDJSON line (no trailing newline), fields in pinned order.
inline std::string to_ndjson_line(const RicEnvelope& m) {
    std::string out = "{\"seq\":" + std::to_string(m.seq);
    out += ",\"kind\":\"";
    out += msg_kind_name(m.kind);
    out += '"';
    const auto put_int = [&out](const char* key, const std::optional<int>& v) {
        if (v) out += std::string(",\"") + key + "\":" + std::to_string(*v);
    };
    put_int("day", m.day);
    put_int("hour", m.hour);
    put_int("cell_id", m.cell_id);
    if (m.on) out += std::string(",\"on\":") + (*m.on ? "true" : "false");
    put_int("connected_ues", m.connected_ues);
    if (m.throughput_mbps) {
        out += ",\"throughput_mbps\":";
        detail::append_double(out, *m.throughput_mbps);
    }
    if (m.energy_wh) {
        out += ",\"energy_wh\":";
        detail::append_double(out, *m.energy_wh);
    }
    if (m.command) out += ",\"command\":\"" + *m.command + "\"";
    put_int("target_cell_id", m.target_cell_id);
    out += '}';
    return out;
}

inline RicEnvelope envelope_from_json_line(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("envelope parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("envelope parse error: not an object");
    if (!j.contains("seq") || !j.contains("kind"))
        throw std::runtime_error("envelope parse error: missing seq or kind");
    RicEnvelope m;
    try {
        m.seq = j.at("seq").get<std::uint64_t>();
        m.kind = msg_kind_from_name(j.at("kind").get<std::string>());
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            if (k == "seq" || k == "kind") continue;
            if (k == "day") m.day = it->get<int>();
            else if (k == "hour") m.hour = it->get<int>();
            else if (k == "cell_id") m.cell_id = it->get<int>();
            else if (k == "on") m.on = it->get<bool>();
            else if (k == "connected_ues") m.connected_ues = it->get<int>();
            else if (k == "throughput_mbps") m.throughput_mbps = it->get<double>();
            else if (k == "energy_wh") m.energy_wh = it->get<double>();
            else if (k == "command") m.command = it->get<std::string>();
            else if (k == "target_cell_id") m.target_cell_id = it->get<int>();
            else throw std::runtime_error("envelope parse error: unknown field '" + k + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("envelope parse error: ") + e.what());
    }
    if (m.command && *m.command != "on" && *m.command != "off")
        throw std::runtime_error("envelope parse error: command must be \"on\" or \"off\"");
    return m;
}

inline RicEnvelope make_indication(std::uint64_t seq, const KpmReport& r) {
    RicEnvelope m;
    m.seq = seq;
    m.kind = MsgKind::indication;
    m.day = r.day;
    m.hour = r.hour;
    m.cell_id = r.cell_id;
    m.on = r.on;
    m.connected_ues = r.connected_ues;
    m.throughput_mbps = r.throughput_mbps;
    m.energy_wh = r.energy_wh;
    return m;
}

inline RicEnvelope make_control(std::uint64_t seq, int day, int hour, const RcAction& a) {
    RicEnvelope m;
    m.seq = seq;
    m.kind = MsgKind::control;
    m.day = day;
    m.hour = hour;
    m.command = a.command == CellCommand::turn_on ? "on" : "off";
    m.target_cell_id = a.target_cell_id;
    return m;
}

inline RcAction action_from_envelope(const RicEnvelope& m) {
    if (!m.command || !m.target_cell_id)
        throw std::runtime_error("envelope: control without command/target");
    RcAction a;
    a.command = *m.command == "on" ? CellCommand::turn_on : CellCommand::turn_off;
    a.target_cell_id = *m.target_cell_id;
    return a;
}

}  // namespace skycell

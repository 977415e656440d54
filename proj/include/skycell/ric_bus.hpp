#pragma once

// In-process RIC message bus: KPM indications fan out to subscriptions in
// subscription-id order (batched by reporting period), control requests are
// acked or rejected, and conflicting controls for the same cell within one
// hour resolve last-writer-wins. Every on-the-wire message is appended to an
// NDJSON-serializable log.

#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "skycell/messages.hpp"

namespace skycell {

struct SubscriptionDelivery {
    int subscription_id = 0;
    std::vector<RicEnvelope> indications;
};

struct ControlResult {
    bool accepted = false;
    std::uint64_t control_seq = 0;
    std::uint64_t response_seq = 0;  // the ack or error message
};

class RicBus {
  public:
    // `switchable` marks which cell ids accept on/off controls.
    explicit RicBus(std::vector<bool> switchable) : switchable_(std::move(switchable)) {}

    int subscribe(int period_hours) {
        if (period_hours < 1) throw std::domain_error("subscribe: period must be >= 1 hour");
        subs_.push_back({period_hours, 0, {}});
        return static_cast<int>(subs_.size()) - 1;
    }

    // Publish one hour's reports. Each subscription buffers them and releases
    // the batch every `period_hours` publications.
    std::vector<SubscriptionDelivery> publish_indications(const std::vector<KpmReport>& reports) {
        std::vector<RicEnvelope> envelopes;
        envelopes.reserve(reports.size());
        for (const KpmReport& r : reports) {
            RicEnvelope m = make_indication(next_seq_++, r);
            log_.push_back(m);
            envelopes.push_back(std::move(m));
        }
        std::vector<SubscriptionDelivery> out;
        for (std::size_t i = 0; i < subs_.size(); ++i) {
            Sub& s = subs_[i];
            s.buffer.insert(s.buffer.end(), envelopes.begin(), envelopes.end());
            if (++s.hours_seen % s.period_hours == 0) {
                out.push_back({static_cast<int>(i), std::move(s.buffer)});
                s.buffer.clear();
            }
        }
        return out;
    }

    // Stage a control for the current hour; the ack/error goes on the log
    // immediately, the action itself is applied when drained.
    ControlResult submit_control(int day, int hour, const RcAction& action) {
        ControlResult res;
        RicEnvelope ctrl = make_control(next_seq_++, day, hour, action);
        res.control_seq = ctrl.seq;
        log_.push_back(ctrl);
        const bool valid = action.target_cell_id >= 0 &&
                           action.target_cell_id < static_cast<int>(switchable_.size()) &&
                           switchable_[static_cast<std::size_t>(action.target_cell_id)];
        RicEnvelope resp = ctrl;
        resp.seq = next_seq_++;
        resp.kind = valid ? MsgKind::ack : MsgKind::error;
        res.response_seq = resp.seq;
        res.accepted = valid;
        log_.push_back(resp);
        if (valid) {
            auto [it, inserted] = staged_.insert_or_assign(action.target_cell_id, action);
            if (!inserted) ++conflict_count_;
        }
        return res;
    }

    // Final per-cell actions for the hour, ascending cell id.
    std::vector<RcAction> drain_controls() {
        std::vector<RcAction> out;
        out.reserve(staged_.size());
        for (const auto& [cell, action] : staged_) out.push_back(action);
        staged_.clear();
        return out;
    }

    const std::vector<RicEnvelope>& log() const { return log_; }
    std::uint64_t next_seq() const { return next_seq_; }
    std::uint64_t conflict_count() const { return conflict_count_; }

    void write_ndjson(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("ric bus: cannot open " + path);
        for (const RicEnvelope& m : log_) out << to_ndjson_line(m) << '\n';
        if (!out.flush()) throw std::runtime_error("ric bus: write failed for " + path);
    }

    static std::vector<RicEnvelope> read_ndjson(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("ric bus: cannot open " + path);
        std::vector<RicEnvelope> out;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            try {
                out.push_back(envelope_from_json_line(line));
            } catch (const std::exception& e) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
        return out;
    }

  private:
    struct Sub {
        int period_hours = 1;
        std::uint64_t hours_seen = 0;
        std::vector<RicEnvelope> buffer;
    };

    std::vector<bool> switchable_;
    std::vector<Sub> subs_;
    std::vector<RicEnvelope> log_;
    std::map<int, RcAction> staged_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t conflict_count_ = 0;
};

}  // namespace skycell

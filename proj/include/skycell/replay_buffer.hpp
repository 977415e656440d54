#pragma once

// Fixed-capacity ring buffer of transitions with uniform without-replacement
// minibatch sampling.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "skycell/rng.hpp"

namespace skycell {

struct Transition {
    std::vector<double> state;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
};

class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        if (capacity == 0) throw std::domain_error("replay buffer: capacity must be positive");
    }

    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }

    void push(Transition t) {
        if (data_.size() < capacity_) {
            data_.push_back(std::move(t));
        } else {
            data_[write_] = std::move(t);
        }
        write_ = (write_ + 1) % capacity_;
    }

    // Uniform sample of `batch` distinct transitions (partial Fisher-Yates).
    std::vector<const Transition*> sample(std::size_t batch, Rng& rng) const {
        if (batch > data_.size())
            throw std::domain_error("replay buffer: batch larger than contents");
        std::vector<std::size_t> idx(data_.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::vector<const Transition*> out;
        out.reserve(batch);
        for (std::size_t i = 0; i < batch; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.uniform_u64(idx.size() - i));
            std::swap(idx[i], idx[j]);
            out.push_back(&data_[idx[i]]);
        }
        return out;
    }

  private:
    std::size_t capacity_;
    std::size_t write_ = 0;
    std::vector<Transition> data_;
};

}  // namespace skycell

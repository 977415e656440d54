#pragma once

// Dense multilayer perceptron with ReLU hidden layers and a linear output,
// double precision throughout, manual backprop, and a bit-exact text
// checkpoint format (doubles stored as 16-hex-digit bit patterns).

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "skycell/rng.hpp"

namespace skycell {

struct MlpGradients {
    std::vector<std::vector<double>> w;  // same shapes as the network
    std::vector<std::vector<double>> b;
};

struct MlpCache {
    std::vector<std::vector<double>> activations;  // [0]=input, [L]=output
    std::vector<std::vector<double>> pre;          // pre-activation per layer
};

class Mlp {
  public:
    Mlp() = default;

    // He-normal initialization, biases zero.
    static Mlp create(const std::vector<int>& layer_sizes, Rng& rng) {
        if (layer_sizes.size() < 2) throw std::domain_error("mlp: need at least two layers");
        for (int n : layer_sizes)
            if (n < 1) throw std::domain_error("mlp: layer sizes must be positive");
        Mlp net;
        net.sizes_ = layer_sizes;
        for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
            const int fan_in = layer_sizes[l];
            const int fan_out = layer_sizes[l + 1];
            const double scale = std::sqrt(2.0 / fan_in);
            std::vector<double> w(static_cast<std::size_t>(fan_out) * fan_in);
            for (double& v : w) v = scale * rng.gaussian();
            net.w_.push_back(std::move(w));
            net.b_.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
        }
        return net;
    }

    const std::vector<int>& layer_sizes() const { return sizes_; }
    int input_size() const { return sizes_.front(); }
    int output_size() const { return sizes_.back(); }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (std::size_t l = 0; l < w_.size(); ++l) n += w_[l].size() + b_[l].size();
        return n;
    }

    MlpCache forward_cached(const std::vector<double>& input) const {
        if (static_cast<int>(input.size()) != input_size())
            throw std::domain_error("mlp: input size mismatch");
        MlpCache cache;
        cache.activations.push_back(input);
        for (std::size_t l = 0; l < w_.size(); ++l) {
            const int n_in = sizes_[l];
            const int n_out = sizes_[l + 1];
            std::vector<double> z(static_cast<std::size_t>(n_out));
            const std::vector<double>& a = cache.activations.back();
            for (int o = 0; o < n_out; ++o) {
                double s = b_[l][o];
                const double* row = &w_[l][static_cast<std::size_t>(o) * n_in];
                for (int i = 0; i < n_in; ++i) s += row[i] * a[i];
                z[o] = s;
            }
            cache.pre.push_back(z);
            if (l + 1 < w_.size())
                for (double& v : z) v = v > 0.0 ? v : 0.0;
            cache.activations.push_back(std::move(z));
        }
        return cache;
    }

    std::vector<double> forward(const std::vector<double>& input) const {
        return forward_cached(input).activations.back();
    }

    // Backprop from dLoss/dOutput; returns parameter gradients.
    MlpGradients backward(const MlpCache& cache, const std::vector<double>& dloss_dout) const {
        if (static_cast<int>(dloss_dout.size()) != output_size())
            throw std::domain_error("mlp: output gradient size mismatch");
        MlpGradients g;
        g.w.resize(w_.size());
        g.b.resize(b_.size());
        std::vector<double> delta = dloss_dout;
        for (std::size_t li = w_.size(); li-- > 0;) {
            const int n_in = sizes_[li];
            const int n_out = sizes_[li + 1];
            if (li + 1 < w_.size())  // ReLU derivative on hidden layers
                for (int o = 0; o < n_out; ++o)
                    if (cache.pre[li][o] <= 0.0) delta[o] = 0.0;
            g.w[li].assign(static_cast<std::size_t>(n_out) * n_in, 0.0);
            g.b[li] = delta;
            const std::vector<double>& a = cache.activations[li];
            for (int o = 0; o < n_out; ++o) {
                double* row = &g.w[li][static_cast<std::size_t>(o) * n_in];
                for (int i = 0; i < n_in; ++i) row[i] = delta[o] * a[i];
            }
            if (li > 0) {
                std::vector<double> prev(static_cast<std::size_t>(n_in), 0.0);
                for (int o = 0; o < n_out; ++o) {
                    const double* row = &w_[li][static_cast<std::size_t>(o) * n_in];
                    for (int i = 0; i < n_in; ++i) prev[i] += row[i] * delta[o];
                }
                delta = std::move(prev);
            }
        }
        return g;
    }

    void accumulate(MlpGradients& acc, const MlpGradients& g, double scale) const {
        for (std::size_t l = 0; l < w_.size(); ++l) {
            for (std::size_t i = 0; i < w_[l].size(); ++i) acc.w[l][i] += scale * g.w[l][i];
            for (std::size_t i = 0; i < b_[l].size(); ++i) acc.b[l][i] += scale * g.b[l][i];
        }
    }

    MlpGradients zero_gradients() const {
        MlpGradients g;
        for (std::size_t l = 0; l < w_.size(); ++l) {
            g.w.emplace_back(w_[l].size(), 0.0);
            g.b.emplace_back(b_[l].size(), 0.0);
        }
        return g;
    }

    void sgd_step(const MlpGradients& g, double lr) {
        for (std::size_t l = 0; l < w_.size(); ++l) {
            for (std::size_t i = 0; i < w_[l].size(); ++i) w_[l][i] -= lr * g.w[l][i];
            for (std::size_t i = 0; i < b_[l].size(); ++i) b_[l][i] -= lr * g.b[l][i];
        }
    }

    // Flat parameter access (weights then biases, layer by layer); used by
    // finite-difference checks.
    double get_parameter(std::size_t idx) const { return *param_ptr(idx); }
    void set_parameter(std::size_t idx, double v) { *const_cast<double*>(param_ptr(idx)) = v; }
    double gradient_at(const MlpGradients& g, std::size_t idx) const {
        std::size_t i = idx;
        for (std::size_t l = 0; l < w_.size(); ++l) {
            if (i < g.w[l].size()) return g.w[l][i];
            i -= g.w[l].size();
            if (i < g.b[l].size()) return g.b[l][i];
            i -= g.b[l].size();
        }
        throw std::out_of_range("mlp: parameter index");
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("mlp: cannot open " + path);
        out << "skycell-mlp 1\nlayers";
        for (int n : sizes_) out << ' ' << n;
        out << '\n';
        int col = 0;
        const auto emit = [&out, &col](double v) {
            char buf[17];
            std::snprintf(buf, sizeof buf, "%016llx",
                          static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
            out << buf << (++col % 8 == 0 ? '\n' : ' ');
        };
        for (std::size_t l = 0; l < w_.size(); ++l) {
            for (double v : w_[l]) emit(v);
            for (double v : b_[l]) emit(v);
        }
        if (col % 8 != 0) out << '\n';
        if (!out.flush()) throw std::runtime_error("mlp: write failed for " + path);
    }

    static Mlp load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("mlp: cannot open " + path);
        std::string magic;
        int version = 0;
        in >> magic >> version;
        if (magic != "skycell-mlp" || version != 1)
            throw std::runtime_error("mlp: bad checkpoint header in " + path);
        std::string tag;
        in >> tag;
        if (tag != "layers") throw std::runtime_error("mlp: missing layer list in " + path);
        std::string rest;
        std::getline(in, rest);
        std::istringstream layer_line(rest);
        Mlp net;
        int n;
        while (layer_line >> n) net.sizes_.push_back(n);
        if (net.sizes_.size() < 2) throw std::runtime_error("mlp: bad layer list in " + path);
        for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l) {
            net.w_.emplace_back(static_cast<std::size_t>(net.sizes_[l + 1]) * net.sizes_[l]);
            net.b_.emplace_back(static_cast<std::size_t>(net.sizes_[l + 1]));
        }
        const auto read_double = [&in, &path](double& v) {
            std::string tok;
            if (!(in >> tok) || tok.size() != 16)
                throw std::runtime_error("mlp: truncated checkpoint " + path);
            std::uint64_t bits = 0;
            for (char c : tok) {
                const int d = c >= '0' && c <= '9'   ? c - '0'
                              : c >= 'a' && c <= 'f' ? c - 'a' + 10
                              : c >= 'A' && c <= 'F' ? c - 'A' + 10
                                                     : -1;
                if (d < 0) throw std::runtime_error("mlp: bad hex token in " + path);
                bits = bits << 4 | static_cast<std::uint64_t>(d);
            }
            v = std::bit_cast<double>(bits);
        };
        for (std::size_t l = 0; l < net.w_.size(); ++l) {
            for (double& v : net.w_[l]) read_double(v);
            for (double& v : net.b_[l]) read_double(v);
        }
        return net;
    }

  private:
    const double* param_ptr(std::size_t idx) const {
        std::size_t i = idx;
        for (std::size_t l = 0; l < w_.size(); ++l) {
            if (i < w_[l].size()) return &w_[l][i];
            i -= w_[l].size();
            if (i < b_[l].size()) return &b_[l][i];
            i -= b_[l].size();
        }
        throw std::out_of_range("mlp: parameter index");
    }

    std::vector<int> sizes_;
    std::vector<std::vector<double>> w_;  // [layer][out * in], row-major
    std::vector<std::vector<double>> b_;
};

}  // namespace skycell

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "skycell/mlp.hpp"

using namespace skycell;

namespace {

// [2,2,1] net with fixed weights for hand-checked forward passes.
Mlp tiny_net() {
    Rng rng(1);
    Mlp net = Mlp::create({2, 2, 1}, rng);
    const double params[9] = {1.0, -2.0, 0.5, 1.0,   // layer0 weights, row-major out x in
                              0.1, -0.2,              // layer0 biases
                              2.0, -1.0,              // layer1 weights
                              0.3};                   // layer1 bias
    for (std::size_t i = 0; i < 9; ++i) net.set_parameter(i, params[i]);
    return net;
}

double fd_gradient(Mlp& net, std::size_t idx, const std::vector<double>& x, int out_idx,
                   double h) {
    const double save = net.get_parameter(idx);
    net.set_parameter(idx, save + h);
    const double up = net.forward(x)[static_cast<std::size_t>(out_idx)];
    net.set_parameter(idx, save - h);
    const double dn = net.forward(x)[static_cast<std::size_t>(out_idx)];
    net.set_parameter(idx, save);
    return (up - dn) / (2.0 * h);
}

}  // namespace

TEST_CASE("forward pass matches a hand-computed example") {
    Mlp net = tiny_net();
    REQUIRE(net.parameter_count() == 9);
    // hidden = relu([0.1 + 1*1 - 2*0.5, -0.2 + 0.5*1 + 1*0.5]) = [0.1, 0.8]
    // out    = 0.3 + 2*0.1 - 1*0.8 = -0.3
    const std::vector<double> y = net.forward({1.0, 0.5});
    REQUIRE(y.size() == 1);
    CHECK(y[0] == Catch::Approx(-0.3).margin(1e-15));

    // Negative pre-activations are clamped: with both hidden units off
    // (pre = [-0.9, -0.7]) the output is just the output bias.
    const std::vector<double> y2 = net.forward({-1.0, 0.0});
    CHECK(y2[0] == Catch::Approx(0.3).margin(1e-15));

    CHECK_THROWS_AS(net.forward({1.0}), std::domain_error);
}

TEST_CASE("construction: shapes, parameter count, He scale") {
    Rng rng(2);
    const Mlp net = Mlp::create({42, 64, 64, 64, 10}, rng);
    CHECK(net.input_size() == 42);
    CHECK(net.output_size() == 10);
    CHECK(net.parameter_count() == (42 * 64 + 64) + 2u * (64 * 64 + 64) + (64 * 10 + 10));

    // Biases start at zero; weights have roughly the He-normal spread.
    const std::size_t n_w0 = 42 * 64;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n_w0; ++i) {
        const double w = net.get_parameter(i);
        sum += w;
        sum2 += w * w;
    }
    for (std::size_t i = n_w0; i < n_w0 + 64; ++i) CHECK(net.get_parameter(i) == 0.0);
    const double mean = sum / n_w0;
    const double var = sum2 / n_w0 - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(var == Catch::Approx(2.0 / 42.0).epsilon(0.15));

    CHECK_THROWS_AS(Mlp::create({5}, rng), std::domain_error);
    CHECK_THROWS_AS(Mlp::create({5, 0, 2}, rng), std::domain_error);
}

TEST_CASE("backprop gradients match central finite differences") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int n_in = rng.uniform_int(2, 5);
        const int n_hidden = rng.uniform_int(2, 6);
        const int n_out = rng.uniform_int(1, 4);
        Mlp net = Mlp::create({n_in, n_hidden, n_out}, rng);
        std::vector<double> x(static_cast<std::size_t>(n_in));
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        const int out_idx = rng.uniform_int(0, n_out - 1);

        const MlpCache cache = net.forward_cached(x);
        std::vector<double> dout(static_cast<std::size_t>(n_out), 0.0);
        dout[static_cast<std::size_t>(out_idx)] = 1.0;
        const MlpGradients g = net.backward(cache, dout);

        double worst = 0.0;
        for (std::size_t p = 0; p < net.parameter_count(); ++p) {
            const double an = net.gradient_at(g, p);
            const double fd = fd_gradient(net, p, x, out_idx, 1e-6);
            const double rel = std::abs(an - fd) / std::max(1.0, std::abs(an) + std::abs(fd));
            worst = std::max(worst, rel);
        }
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("sgd step moves parameters against the gradient") {
    Mlp net = tiny_net();
    const MlpCache cache = net.forward_cached({1.0, 0.5});
    MlpGradients g = net.backward(cache, {1.0});
    const double before = net.get_parameter(8);  // output bias, gradient is 1
    CHECK(net.gradient_at(g, 8) == 1.0);
    net.sgd_step(g, 0.1);
    CHECK(net.get_parameter(8) == Catch::Approx(before - 0.1));

    // accumulate() scales and adds.
    MlpGradients acc = net.zero_gradients();
    net.accumulate(acc, g, 0.5);
    net.accumulate(acc, g, 0.5);
    for (std::size_t p = 0; p < net.parameter_count(); ++p)
        CHECK(net.gradient_at(acc, p) == Catch::Approx(net.gradient_at(g, p)).margin(1e-15));
}

TEST_CASE("checkpoints round-trip bit for bit") {
    Rng rng(4);
    Mlp net = Mlp::create({6, 8, 4}, rng);
    // Include awkward values to prove bit-exactness.
    net.set_parameter(0, 0.1 + 0.2);
    net.set_parameter(1, -1.0 / 3.0);
    net.set_parameter(2, 1e-300);

    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / "skycell_mlp_test.ckpt";
    net.save(path.string());
    const Mlp back = Mlp::load(path.string());
    REQUIRE(back.layer_sizes() == net.layer_sizes());
    REQUIRE(back.parameter_count() == net.parameter_count());
    for (std::size_t p = 0; p < net.parameter_count(); ++p)
        REQUIRE(back.get_parameter(p) == net.get_parameter(p));

    // Saving the loaded net reproduces the file byte for byte.
    const std::filesystem::path path2 =
        std::filesystem::temp_directory_path() / "skycell_mlp_test2.ckpt";
    back.save(path2.string());
    std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(sa.substr(0, 14) == "skycell-mlp 1\n");
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("checkpoint loader rejects damaged files") {
    const std::filesystem::path dir = std::filesystem::temp_directory_path();
    const auto write = [&dir](const char* name, const char* text) {
        const std::filesystem::path p = dir / name;
        std::ofstream out(p);
        out << text;
        return p;
    };
    const auto bad_magic = write("skycell_bad1.ckpt", "other-net 1\nlayers 2 2\n");
    CHECK_THROWS_AS(Mlp::load(bad_magic.string()), std::runtime_error);
    const auto truncated = write("skycell_bad2.ckpt",
                                 "skycell-mlp 1\nlayers 2 2\n3ff0000000000000\n");
    CHECK_THROWS_AS(Mlp::load(truncated.string()), std::runtime_error);
    const auto bad_hex = write("skycell_bad3.ckpt",
                               "skycell-mlp 1\nlayers 1 1\nzzzz000000000000 0000000000000000\n");
    CHECK_THROWS_AS(Mlp::load(bad_hex.string()), std::runtime_error);
    CHECK_THROWS_AS(Mlp::load((dir / "skycell_missing.ckpt").string()), std::runtime_error);
    std::filesystem::remove(bad_magic);
    std::filesystem::remove(truncated);
    std::filesystem::remove(bad_hex);
}

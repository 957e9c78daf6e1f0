#include "marl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace marl {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'M', 'A', 'R', 'L', 'C', 'K', 'P', 'T'};

template <typename T>
void write_raw(std::ostream& os, T value) {
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

void write_string(std::ostream& os, const std::string& s) {
    write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
T read_raw(std::istream& is) {
    T value;
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return value;
}

std::string read_string(std::istream& is) {
    std::uint32_t len = read_raw<std::uint32_t>(is);
    if (len > (1u << 24)) throw std::runtime_error("checkpoint: implausible string length");
    std::string s(len, '\0');
    is.read(s.data(), len);
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return s;
}

void write_net(std::ostream& os, const std::string& name, const Mlp& net) {
    write_string(os, name);
    write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(net.layer_sizes.size()));
    for (int s : net.layer_sizes) write_raw<std::int32_t>(os, s);
    write_raw<std::uint8_t>(os, static_cast<std::uint8_t>(net.hidden_activation));
    write_raw<std::uint8_t>(os, static_cast<std::uint8_t>(net.output_activation));
    for (std::size_t k = 0; k < net.weights.size(); ++k) {
        const Eigen::MatrixXd& w = net.weights[k];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                write_raw<float>(os, static_cast<float>(w(r, c)));
            }
        }
        for (Eigen::Index i = 0; i < net.biases[k].size(); ++i) {
            write_raw<float>(os, static_cast<float>(net.biases[k](i)));
        }
    }
}

std::pair<std::string, Mlp> read_net(std::istream& is) {
    std::string name = read_string(is);
    std::uint32_t n_sizes = read_raw<std::uint32_t>(is);
    if (n_sizes < 2 || n_sizes > 64) throw std::runtime_error("checkpoint: bad layer count");
    std::vector<int> sizes;
    for (std::uint32_t i = 0; i < n_sizes; ++i) {
        std::int32_t s = read_raw<std::int32_t>(is);
        if (s <= 0) throw std::runtime_error("checkpoint: bad layer size");
        sizes.push_back(s);
    }
    auto hidden = static_cast<Activation>(read_raw<std::uint8_t>(is));
    auto output = static_cast<OutputActivation>(read_raw<std::uint8_t>(is));
    Mlp net = mlp_init(sizes, hidden, output, 0);
    for (std::size_t k = 0; k < net.weights.size(); ++k) {
        Eigen::MatrixXd& w = net.weights[k];
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = static_cast<double>(read_raw<float>(is));
            }
        }
        for (Eigen::Index i = 0; i < net.biases[k].size(); ++i) {
            net.biases[k](i) = static_cast<double>(read_raw<float>(is));
        }
    }
    return {std::move(name), std::move(net)};
}

}  // namespace

const Mlp& Checkpoint::net(const std::string& name) const {
    for (const auto& [n, net] : nets) {
        if (n == name) return net;
    }
    throw std::runtime_error("checkpoint: no net named '" + name + "'");
}

bool Checkpoint::has_net(const std::string& name) const {
    for (const auto& [n, net] : nets) {
        if (n == name) return true;
    }
    return false;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("checkpoint: cannot open '" + path + "' for writing");
    os.write(kMagic, sizeof(kMagic));
    write_raw<std::uint32_t>(os, Checkpoint::kVersion);
    write_string(os, ckpt.algorithm);
    write_string(os, ckpt.environment);
    write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(ckpt.nets.size()));
    for (const auto& [name, net] : ckpt.nets) write_net(os, name, net);
    write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(ckpt.hyperparams.size()));
    for (const auto& [key, value] : ckpt.hyperparams) {
        write_string(os, key);
        write_raw<double>(os, value);
    }
    write_string(os, ckpt.rng_state);
    write_raw<std::uint64_t>(os, ckpt.episode_counter);
    write_raw<std::uint64_t>(os, ckpt.step_counter);
    if (!os) throw std::runtime_error("checkpoint: write failed for '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open '" + path + "'");
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("checkpoint: bad magic in '" + path + "'");
    }
    std::uint32_t version = read_raw<std::uint32_t>(is);
    if (version != Checkpoint::kVersion) {
        throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
    }
    Checkpoint ckpt;
    ckpt.algorithm = read_string(is);
    ckpt.environment = read_string(is);
    std::uint32_t nets = read_raw<std::uint32_t>(is);
    if (nets > 1024) throw std::runtime_error("checkpoint: implausible net count");
    for (std::uint32_t i = 0; i < nets; ++i) ckpt.nets.push_back(read_net(is));
    std::uint32_t hps = read_raw<std::uint32_t>(is);
    if (hps > 4096) throw std::runtime_error("checkpoint: implausible hyperparam count");
    for (std::uint32_t i = 0; i < hps; ++i) {
        std::string key = read_string(is);
        double value = read_raw<double>(is);
        ckpt.hyperparams[key] = value;
    }
    ckpt.rng_state = read_string(is);
    ckpt.episode_counter = read_raw<std::uint64_t>(is);
    ckpt.step_counter = read_raw<std::uint64_t>(is);
    return ckpt;
}

}  // namespace marl

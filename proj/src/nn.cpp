#include "marl/nn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "marl/rng.hpp"

namespace marl {

bool Mlp::same_architecture(const Mlp& other) const {
    return layer_sizes == other.layer_sizes && hidden_activation == other.hidden_activation &&
           output_activation == other.output_activation;
}

long Mlp::parameter_count() const {
    long n = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        n += weights[k].size() + biases[k].size();
    }
    return n;
}

bool Mlp::all_finite() const {
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (!weights[k].allFinite() || !biases[k].allFinite()) return false;
    }
    return true;
}

Gradients Gradients::zeros_like(const Mlp& net) {
    Gradients g;
    g.weights.reserve(net.weights.size());
    g.biases.reserve(net.biases.size());
    for (std::size_t k = 0; k < net.weights.size(); ++k) {
        g.weights.push_back(Eigen::MatrixXd::Zero(net.weights[k].rows(), net.weights[k].cols()));
        g.biases.push_back(Eigen::VectorXd::Zero(net.biases[k].size()));
    }
    return g;
}

bool Gradients::all_finite() const {
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (!weights[k].allFinite() || !biases[k].allFinite()) return false;
    }
    return true;
}

void Gradients::scale(double s) {
    for (std::size_t k = 0; k < weights.size(); ++k) {
        weights[k] *= s;
        biases[k] *= s;
    }
}

void Gradients::add(const Gradients& other) {
    for (std::size_t k = 0; k < weights.size(); ++k) {
        weights[k] += other.weights[k];
        biases[k] += other.biases[k];
    }
}

Mlp mlp_init(const std::vector<int>& layer_sizes, Activation hidden, OutputActivation output,
             std::uint64_t seed) {
    if (layer_sizes.size() < 2) {
        throw std::invalid_argument("mlp_init: need at least 2 layer sizes");
    }
    for (int s : layer_sizes) {
        if (s <= 0) throw std::invalid_argument("mlp_init: layer sizes must be positive");
    }
    Mlp net;
    net.layer_sizes = layer_sizes;
    net.hidden_activation = hidden;
    net.output_activation = output;
    Rng rng(seed);
    for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
        int fan_in = layer_sizes[k];
        int fan_out = layer_sizes[k + 1];
        double bound = std::sqrt(6.0 / (fan_in + fan_out));
        Eigen::MatrixXd w(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r) {
            for (int c = 0; c < fan_in; ++c) {
                w(r, c) = rng.uniform(-bound, bound);
            }
        }
        net.weights.push_back(std::move(w));
        net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return net;
}

namespace {

void apply_hidden_activation(Eigen::MatrixXd& z, Activation act) {
    if (act == Activation::Tanh) {
        z = z.array().tanh();
    } else {
        z = z.array().max(0.0);
    }
}

void apply_output_activation(Eigen::MatrixXd& z, OutputActivation act) {
    switch (act) {
        case OutputActivation::Identity:
            break;
        case OutputActivation::Tanh:
            z = z.array().tanh();
            break;
        case OutputActivation::Softmax:
            z = softmax_columns(z);
            break;
    }
}

void check_input_dim(const Mlp& net, Eigen::Index rows, const char* where) {
    if (rows != net.input_size()) {
        throw std::invalid_argument(std::string(where) + ": input has " + std::to_string(rows) +
                                    " rows, expected " + std::to_string(net.input_size()));
    }
}

}  // namespace

Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd out(logits.rows(), logits.cols());
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
        Eigen::VectorXd col = logits.col(c);
        double mx = col.maxCoeff();
        Eigen::VectorXd e = (col.array() - mx).exp();
        out.col(c) = e / e.sum();
    }
    return out;
}

Eigen::MatrixXd softmax_backward_columns(const Eigen::MatrixXd& probs,
                                         const Eigen::MatrixXd& dprobs) {
    Eigen::MatrixXd dlogits(probs.rows(), probs.cols());
    for (Eigen::Index c = 0; c < probs.cols(); ++c) {
        double dot = probs.col(c).dot(dprobs.col(c));
        dlogits.col(c) = probs.col(c).array() * (dprobs.col(c).array() - dot);
    }
    return dlogits;
}

Eigen::MatrixXd mlp_forward(const Mlp& net, const Eigen::MatrixXd& input) {
    check_input_dim(net, input.rows(), "mlp_forward");
    Eigen::MatrixXd z = input;
    for (int k = 0; k < net.num_layers(); ++k) {
        z = (net.weights[k] * z).colwise() + net.biases[k];
        if (k + 1 < net.num_layers()) {
            apply_hidden_activation(z, net.hidden_activation);
        } else {
            apply_output_activation(z, net.output_activation);
        }
    }
    return z;
}

Eigen::VectorXd mlp_forward(const Mlp& net, const Eigen::VectorXd& input) {
    return mlp_forward(net, Eigen::MatrixXd(input)).col(0);
}

Eigen::MatrixXd mlp_forward_cached(const Mlp& net, const Eigen::MatrixXd& input, MlpTrace& trace) {
    check_input_dim(net, input.rows(), "mlp_forward_cached");
    trace.input = input;
    trace.post.assign(static_cast<std::size_t>(net.num_layers()), Eigen::MatrixXd());
    Eigen::MatrixXd z = input;
    for (int k = 0; k < net.num_layers(); ++k) {
        z = (net.weights[k] * z).colwise() + net.biases[k];
        if (k + 1 < net.num_layers()) {
            apply_hidden_activation(z, net.hidden_activation);
        } else {
            apply_output_activation(z, net.output_activation);
        }
        trace.post[static_cast<std::size_t>(k)] = z;
    }
    return z;
}

Eigen::MatrixXd mlp_backward(const Mlp& net, const MlpTrace& trace,
                             const Eigen::MatrixXd& output_grad, Gradients& grads) {
    int L = net.num_layers();
    if (output_grad.rows() != net.output_size() || output_grad.cols() != trace.input.cols()) {
        throw std::invalid_argument("mlp_backward: upstream gradient shape mismatch");
    }
    grads.weights.assign(static_cast<std::size_t>(L), Eigen::MatrixXd());
    grads.biases.assign(static_cast<std::size_t>(L), Eigen::VectorXd());

    // delta = dL/d(pre-activation of layer k), computed from the back.
    Eigen::MatrixXd delta;
    {
        const Eigen::MatrixXd& out = trace.post[static_cast<std::size_t>(L - 1)];
        switch (net.output_activation) {
            case OutputActivation::Identity:
                delta = output_grad;
                break;
            case OutputActivation::Tanh:
                delta = output_grad.array() * (1.0 - out.array().square());
                break;
            case OutputActivation::Softmax:
                delta = softmax_backward_columns(out, output_grad);
                break;
        }
    }
    for (int k = L - 1; k >= 0; --k) {
        const Eigen::MatrixXd& prev =
            (k == 0) ? trace.input : trace.post[static_cast<std::size_t>(k - 1)];
        grads.weights[static_cast<std::size_t>(k)] = delta * prev.transpose();
        grads.biases[static_cast<std::size_t>(k)] = delta.rowwise().sum();
        if (k > 0) {
            Eigen::MatrixXd back = net.weights[static_cast<std::size_t>(k)].transpose() * delta;
            const Eigen::MatrixXd& act = trace.post[static_cast<std::size_t>(k - 1)];
            if (net.hidden_activation == Activation::Tanh) {
                delta = back.array() * (1.0 - act.array().square());
            } else {
                delta = back.array() * (act.array() > 0.0).cast<double>();
            }
        } else {
            return net.weights[0].transpose() * delta;
        }
    }
    return Eigen::MatrixXd();  // unreachable
}

std::pair<Gradients, Eigen::VectorXd> mlp_backward(const Mlp& net, const Eigen::VectorXd& input,
                                                   const Eigen::VectorXd& upstream_grad) {
    MlpTrace trace;
    mlp_forward_cached(net, Eigen::MatrixXd(input), trace);
    Gradients grads;
    Eigen::MatrixXd in_grad = mlp_backward(net, trace, Eigen::MatrixXd(upstream_grad), grads);
    return {std::move(grads), in_grad.col(0)};
}

OptimizerState make_optimizer(const Mlp& net, OptimizerKind kind, double learning_rate) {
    if (learning_rate <= 0.0) {
        throw std::invalid_argument("make_optimizer: learning_rate must be positive");
    }
    OptimizerState st;
    st.kind = kind;
    st.learning_rate = learning_rate;
    if (kind == OptimizerKind::Adam) {
        st.m = Gradients::zeros_like(net);
        st.v = Gradients::zeros_like(net);
    }
    return st;
}

void optimizer_step(Mlp& net, const Gradients& grads, OptimizerState& state) {
    if (grads.weights.size() != net.weights.size()) {
        throw std::invalid_argument("optimizer_step: gradient/network layer count mismatch");
    }
    for (std::size_t k = 0; k < net.weights.size(); ++k) {
        if (grads.weights[k].rows() != net.weights[k].rows() ||
            grads.weights[k].cols() != net.weights[k].cols() ||
            grads.biases[k].size() != net.biases[k].size()) {
            throw std::invalid_argument("optimizer_step: gradient shape mismatch at layer " +
                                        std::to_string(k));
        }
    }
    if (!grads.all_finite()) {
        throw std::invalid_argument("optimizer_step: non-finite gradient");
    }
    state.step_count += 1;
    if (state.kind == OptimizerKind::Sgd) {
        for (std::size_t k = 0; k < net.weights.size(); ++k) {
            net.weights[k] -= state.learning_rate * grads.weights[k];
            net.biases[k] -= state.learning_rate * grads.biases[k];
        }
        return;
    }
    const double t = static_cast<double>(state.step_count);
    const double bc1 = 1.0 - std::pow(state.beta1, t);
    const double bc2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t k = 0; k < net.weights.size(); ++k) {
        state.m.weights[k] = state.beta1 * state.m.weights[k] + (1.0 - state.beta1) * grads.weights[k];
        state.v.weights[k].array() = state.beta2 * state.v.weights[k].array() +
                                     (1.0 - state.beta2) * grads.weights[k].array().square();
        state.m.biases[k] = state.beta1 * state.m.biases[k] + (1.0 - state.beta1) * grads.biases[k];
        state.v.biases[k].array() = state.beta2 * state.v.biases[k].array() +
                                    (1.0 - state.beta2) * grads.biases[k].array().square();
        net.weights[k].array() -=
            state.learning_rate * (state.m.weights[k].array() / bc1) /
            ((state.v.weights[k].array() / bc2).sqrt() + state.epsilon_stab);
        net.biases[k].array() -=
            state.learning_rate * (state.m.biases[k].array() / bc1) /
            ((state.v.biases[k].array() / bc2).sqrt() + state.epsilon_stab);
    }
}

void soft_update(Mlp& target, const Mlp& source, double tau) {
    if (!target.same_architecture(source)) {
        throw std::invalid_argument("soft_update: architecture mismatch");
    }
    for (std::size_t k = 0; k < target.weights.size(); ++k) {
        target.weights[k] = tau * source.weights[k] + (1.0 - tau) * target.weights[k];
        target.biases[k] = tau * source.biases[k] + (1.0 - tau) * target.biases[k];
    }
}

void Hyperparams::validate() const {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in01(gamma)) throw std::invalid_argument("hyperparams: gamma out of [0,1]");
    if (!in01(tau)) throw std::invalid_argument("hyperparams: tau out of [0,1]");
    if (!in01(epsilon_explore)) throw std::invalid_argument("hyperparams: epsilon_explore out of [0,1]");
    if (!(clip_ratio > 0.0)) throw std::invalid_argument("hyperparams: clip_ratio must be positive");
    if (!in01(gae_lambda)) throw std::invalid_argument("hyperparams: gae_lambda out of [0,1]");
    if (entropy_coef < 0.0) throw std::invalid_argument("hyperparams: entropy_coef must be non-negative");
    if (value_coef < 0.0) throw std::invalid_argument("hyperparams: value_coef must be non-negative");
    if (noise_sigma < 0.0) throw std::invalid_argument("hyperparams: noise_sigma must be non-negative");
    if (batch_size <= 0) throw std::invalid_argument("hyperparams: batch_size must be positive");
    if (buffer_capacity <= 0) throw std::invalid_argument("hyperparams: buffer_capacity must be positive");
}

}  // namespace marl

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace marl {

enum class Activation { Tanh, Relu };
enum class OutputActivation { Identity, Tanh, Softmax };

/// Dense feed-forward network with explicit parameters. Hosts every
/// function approximator in the framework (policies, critics, Q nets).
/// Arithmetic is double precision; checkpoints store single precision.
struct Mlp {
    std::vector<int> layer_sizes;              // at least 2 entries
    std::vector<Eigen::MatrixXd> weights;      // weights[k]: (sizes[k+1] x sizes[k])
    std::vector<Eigen::VectorXd> biases;       // biases[k]: sizes[k+1]
    Activation hidden_activation = Activation::Tanh;
    OutputActivation output_activation = OutputActivation::Identity;

    int input_size() const { return layer_sizes.front(); }
    int output_size() const { return layer_sizes.back(); }
    int num_layers() const { return static_cast<int>(weights.size()); }
    bool same_architecture(const Mlp& other) const;
    long parameter_count() const;
    bool all_finite() const;
};

/// Per-parameter values, shape-congruent with the Mlp they came from.
struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    static Gradients zeros_like(const Mlp& net);
    bool all_finite() const;
    void scale(double s);
    void add(const Gradients& other);
};

/// Glorot-uniform initialization: weights ~ U(-b, b) with
/// b = sqrt(6 / (fan_in + fan_out)); biases zero. Deterministic in seed.
Mlp mlp_init(const std::vector<int>& layer_sizes, Activation hidden, OutputActivation output,
             std::uint64_t seed);

/// Forward pass for a single input vector.
Eigen::VectorXd mlp_forward(const Mlp& net, const Eigen::VectorXd& input);

/// Batched forward pass; columns are samples.
Eigen::MatrixXd mlp_forward(const Mlp& net, const Eigen::MatrixXd& input);

/// Post-activation values recorded during a forward pass, for backprop.
struct MlpTrace {
    Eigen::MatrixXd input;
    std::vector<Eigen::MatrixXd> post;  // post[k]: activations after layer k
};

Eigen::MatrixXd mlp_forward_cached(const Mlp& net, const Eigen::MatrixXd& input, MlpTrace& trace);

/// Reverse-mode gradients of the forward map. `output_grad` is dL/d(output)
/// taken after the output activation; columns are samples. Returns dL/d(input).
Eigen::MatrixXd mlp_backward(const Mlp& net, const MlpTrace& trace,
                             const Eigen::MatrixXd& output_grad, Gradients& grads);

/// Single-vector convenience form: recomputes the forward trace internally
/// and returns (parameter gradients, input gradient).
std::pair<Gradients, Eigen::VectorXd> mlp_backward(const Mlp& net, const Eigen::VectorXd& input,
                                                   const Eigen::VectorXd& upstream_grad);

enum class OptimizerKind { Sgd, Adam };

struct OptimizerState {
    OptimizerKind kind = OptimizerKind::Adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon_stab = 1e-8;
    long step_count = 0;
    Gradients m;  // first moment (adam)
    Gradients v;  // second moment (adam)
};

OptimizerState make_optimizer(const Mlp& net, OptimizerKind kind, double learning_rate);

/// Applies one optimizer step in place. Throws std::invalid_argument on
/// non-finite gradients, leaving parameters untouched.
void optimizer_step(Mlp& net, const Gradients& grads, OptimizerState& state);

/// target <- tau * source + (1 - tau) * target, elementwise.
/// Throws std::invalid_argument on architecture mismatch.
void soft_update(Mlp& target, const Mlp& source, double tau);

/// Learner constants shared across algorithms. The valid ranges are
/// enforced by validate(), which names the offending field.
struct Hyperparams {
    double gamma = 0.99;          // discount, [0, 1]
    double tau = 0.01;            // soft-update rate, [0, 1]
    double epsilon_explore = 0.05;  // [0, 1]
    double clip_ratio = 0.2;      // > 0
    double gae_lambda = 0.95;     // [0, 1]
    double entropy_coef = 0.01;   // >= 0
    double value_coef = 0.5;      // >= 0
    double noise_sigma = 0.1;     // >= 0
    int batch_size = 64;          // > 0
    long buffer_capacity = 100000;  // > 0

    void validate() const;  // throws std::invalid_argument naming the field
};

// Softmax helpers shared by learners (column-wise over a batch).
Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& logits);
/// Backprop through column-wise softmax: given post-softmax probabilities p
/// and dL/dp, returns dL/dlogits.
Eigen::MatrixXd softmax_backward_columns(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& dprobs);

}  // namespace marl

#ifndef ENCOUNTER_AUTOENCODER_HPP
#define ENCOUNTER_AUTOENCODER_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace enc {

enum class Activation { Tanh, Linear };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Dense symmetric autoencoder. layer_dims are node-layer sizes, odd count,
// mirrored around the middle (latent) layer; weights[i] maps layer i to
// layer i+1 as x_{i+1} = act(w_i^T x_i + b_i). Default shape is five node
// layers with a 10-dimensional latent.
struct AutoencoderModel {
    std::vector<std::size_t> layer_dims;
    std::vector<Eigen::MatrixXd> weights; // weights[i] is layer_dims[i] x layer_dims[i+1]
    std::vector<Eigen::VectorXd> biases;
    std::vector<Activation> activations; // one per weight layer
    std::uint64_t seed = 0;
    std::size_t epochs_trained = 0;

    std::size_t input_dim() const { return layer_dims.front(); }
    std::size_t latent_dim() const { return layer_dims[layer_dims.size() / 2]; }
    std::size_t parameter_count() const;
};

struct TrainConfig {
    std::size_t epochs = 200;
    double learning_rate = 1e-3;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
};

struct AeGradient {
    std::vector<Eigen::MatrixXd> dw;
    std::vector<Eigen::VectorXd> db;
};

struct ForwardResult {
    Eigen::VectorXd latent;
    Eigen::VectorXd reconstruction;
};

struct TrainResult {
    AutoencoderModel model;
    std::vector<double> epoch_loss; // mean per-sample loss, one entry per epoch
};

// Weights i.i.d. Uniform(-1, 1) from a seeded stream (layer by layer,
// column-major within each matrix), biases zero, tanh hidden layers and a
// linear output layer. Throws config_error when dims are not symmetric,
// have even length, or are shorter than 3.
AutoencoderModel ae_init(const std::vector<std::size_t>& layer_dims, std::uint64_t seed);

ForwardResult ae_forward(const AutoencoderModel& model, const Eigen::VectorXd& x);

// Latent code only (middle-layer activation).
Eigen::VectorXd ae_encode(const AutoencoderModel& model, const Eigen::VectorXd& x);

// Squared reconstruction error, sum over components.
double ae_loss(const Eigen::VectorXd& x, const Eigen::VectorXd& reconstruction);

// Analytic gradient of the mean per-sample loss over a batch (one sample
// per column).
AeGradient ae_gradient(const AutoencoderModel& model, const Eigen::MatrixXd& batch);

// Mini-batch SGD with seeded shuffling; deterministic for a fixed config.
// dataset holds one sample per column. Throws training_diverged_error
// (naming the epoch) when the epoch loss stops being finite.
TrainResult ae_train(const AutoencoderModel& model, const Eigen::MatrixXd& dataset,
                     const TrainConfig& cfg);

} // namespace enc

#endif

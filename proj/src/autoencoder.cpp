#include "encounter/autoencoder.hpp"

#include "encounter/error.hpp"
#include "encounter/rng.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace enc {

const char* activation_name(Activation a) {
    return a == Activation::Tanh ? "tanh" : "linear";
}

Activation activation_from_name(const std::string& name) {
    if (name == "tanh") {
        return Activation::Tanh;
    }
    if (name == "linear") {
        return Activation::Linear;
    }
    throw format_error("unknown activation tag '" + name + "'");
}

std::size_t AutoencoderModel::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < layer_dims.size(); ++i) {
        n += layer_dims[i] * layer_dims[i + 1] + layer_dims[i + 1];
    }
    return n;
}

namespace {

void apply_activation(Eigen::MatrixXd& z, Activation act) {
    if (act == Activation::Tanh) {
        z = z.array().tanh();
    }
}

void check_layer_dims(const std::vector<std::size_t>& dims) {
    if (dims.size() < 3 || dims.size() % 2 == 0) {
        throw config_error("layer dims must be an odd-length list of at least 3 sizes");
    }
    for (std::size_t d : dims) {
        if (d == 0) {
            throw config_error("layer dims must be positive");
        }
    }
    for (std::size_t i = 0; i < dims.size() / 2; ++i) {
        if (dims[i] != dims[dims.size() - 1 - i]) {
            throw config_error("layer dims must be symmetric about the latent layer");
        }
    }
}

void check_input_dim(const AutoencoderModel& model, Eigen::Index rows) {
    if (static_cast<std::size_t>(rows) != model.input_dim()) {
        throw invalid_input_error("input dimension " + std::to_string(rows) +
                                  " does not match model input " +
                                  std::to_string(model.input_dim()));
    }
}

// Forward pass keeping post-activation values of every node layer.
std::vector<Eigen::MatrixXd> forward_layers(const AutoencoderModel& model,
                                            const Eigen::MatrixXd& batch) {
    std::vector<Eigen::MatrixXd> acts;
    acts.reserve(model.layer_dims.size());
    acts.push_back(batch);
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        Eigen::MatrixXd z = model.weights[i].transpose() * acts.back();
        z.colwise() += model.biases[i];
        apply_activation(z, model.activations[i]);
        acts.push_back(std::move(z));
    }
    return acts;
}

AeGradient backprop(const AutoencoderModel& model, const std::vector<Eigen::MatrixXd>& acts) {
    const Eigen::MatrixXd& input = acts.front();
    const Eigen::MatrixXd& output = acts.back();
    const double batch = static_cast<double>(input.cols());
    const std::size_t n_layers = model.weights.size();

    AeGradient grad;
    grad.dw.resize(n_layers);
    grad.db.resize(n_layers);

    // d(mean loss)/d(output); loss per sample is the squared error sum.
    Eigen::MatrixXd delta = 2.0 / batch * (output - input);
    for (std::size_t i = n_layers; i-- > 0;) {
        if (model.activations[i] == Activation::Tanh) {
            delta = delta.cwiseProduct(
                (1.0 - acts[i + 1].array().square()).matrix());
        }
        grad.dw[i] = acts[i] * delta.transpose();
        grad.db[i] = delta.rowwise().sum();
        if (i > 0) {
            delta = model.weights[i] * delta;
        }
    }
    return grad;
}

} // namespace

AutoencoderModel ae_init(const std::vector<std::size_t>& layer_dims, std::uint64_t seed) {
    check_layer_dims(layer_dims);
    AutoencoderModel model;
    model.layer_dims = layer_dims;
    model.seed = seed;
    Rng rng(seed);
    for (std::size_t i = 0; i + 1 < layer_dims.size(); ++i) {
        Eigen::MatrixXd w(layer_dims[i], layer_dims[i + 1]);
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            for (Eigen::Index r = 0; r < w.rows(); ++r) {
                w(r, c) = rng.uniform(-1.0, 1.0);
            }
        }
        model.weights.push_back(std::move(w));
        model.biases.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layer_dims[i + 1])));
        const bool last = i + 2 == layer_dims.size();
        model.activations.push_back(last ? Activation::Linear : Activation::Tanh);
    }
    return model;
}

ForwardResult ae_forward(const AutoencoderModel& model, const Eigen::VectorXd& x) {
    check_input_dim(model, x.size());
    const auto acts = forward_layers(model, x);
    ForwardResult out;
    out.latent = acts[model.layer_dims.size() / 2].col(0);
    out.reconstruction = acts.back().col(0);
    return out;
}

Eigen::VectorXd ae_encode(const AutoencoderModel& model, const Eigen::VectorXd& x) {
    check_input_dim(model, x.size());
    Eigen::MatrixXd a = x;
    for (std::size_t i = 0; i < model.layer_dims.size() / 2; ++i) {
        Eigen::MatrixXd z = model.weights[i].transpose() * a;
        z.colwise() += model.biases[i];
        apply_activation(z, model.activations[i]);
        a = std::move(z);
    }
    return a.col(0);
}

double ae_loss(const Eigen::VectorXd& x, const Eigen::VectorXd& reconstruction) {
    if (x.size() != reconstruction.size()) {
        throw invalid_input_error("loss operands have mismatched dimensions");
    }
    return (x - reconstruction).squaredNorm();
}

AeGradient ae_gradient(const AutoencoderModel& model, const Eigen::MatrixXd& batch) {
    check_input_dim(model, batch.rows());
    if (batch.cols() == 0) {
        throw invalid_input_error("gradient batch is empty");
    }
    return backprop(model, forward_layers(model, batch));
}

TrainResult ae_train(const AutoencoderModel& model, const Eigen::MatrixXd& dataset,
                     const TrainConfig& cfg) {
    check_input_dim(model, dataset.rows());
    if (dataset.cols() == 0) {
        throw invalid_input_error("training dataset is empty");
    }
    if (cfg.epochs == 0 || cfg.batch_size == 0 || cfg.learning_rate < 0.0) {
        throw config_error("train config fields must be positive");
    }

    TrainResult result;
    result.model = model;
    result.epoch_loss.reserve(cfg.epochs);
    AutoencoderModel& m = result.model;

    const std::size_t n = static_cast<std::size_t>(dataset.cols());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(cfg.seed);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t bsz = std::min(cfg.batch_size, n - start);
            Eigen::MatrixXd batch(dataset.rows(), static_cast<Eigen::Index>(bsz));
            for (std::size_t b = 0; b < bsz; ++b) {
                batch.col(static_cast<Eigen::Index>(b)) =
                    dataset.col(static_cast<Eigen::Index>(order[start + b]));
            }
            const auto acts = forward_layers(m, batch);
            loss_sum += (acts.back() - batch).squaredNorm();
            const AeGradient grad = backprop(m, acts);
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
                m.weights[i] -= cfg.learning_rate * grad.dw[i];
                m.biases[i] -= cfg.learning_rate * grad.db[i];
            }
        }
        const double epoch_loss = loss_sum / static_cast<double>(n);
        if (!std::isfinite(epoch_loss)) {
            throw training_diverged_error("training diverged at epoch " + std::to_string(epoch + 1));
        }
        result.epoch_loss.push_back(epoch_loss);
    }
    m.epochs_trained += cfg.epochs;
    return result;
}

} // namespace enc

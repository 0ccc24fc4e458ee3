#include "repclust/gcn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "repclust/rng.hpp"

namespace repclust {

void TrainConfig::validate() const {
    if (epochs < 1) throw InvalidArgument("epochs must be ≥ 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        throw InvalidArgument("learning rate must be positive");
    if (!(0.0 < mask_lo && mask_lo < mask_hi && mask_hi < 1.0))
        throw InvalidArgument("mask interval must satisfy 0 < lo < hi < 1");
    for (auto h : hidden)
        if (h == 0) throw InvalidArgument("hidden layer widths must be ≥ 1");
}

std::vector<std::size_t> GcnModel::dims() const {
    std::vector<std::size_t> d;
    if (weights.empty()) return d;
    d.push_back(static_cast<std::size_t>(weights.front().rows()));
    for (const auto& w : weights) d.push_back(static_cast<std::size_t>(w.cols()));
    return d;
}

GcnModel GcnModel::initialize(const std::vector<std::size_t>& dims, std::uint64_t seed) {
    if (dims.size() < 2) throw InvalidArgument("a GCN needs at least one layer");
    GcnModel m;
    m.seed = seed;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const auto fan_in = static_cast<Eigen::Index>(dims[l]);
        const auto fan_out = static_cast<Eigen::Index>(dims[l + 1]);
        if (fan_in < 1 || fan_out < 1) throw InvalidArgument("layer widths must be ≥ 1");
        const double limit = std::sqrt(6.0 / double(fan_in + fan_out));
        Matrix w(fan_in, fan_out);
        for (Eigen::Index i = 0; i < fan_in; ++i)
            for (Eigen::Index j = 0; j < fan_out; ++j) w(i, j) = rng.uniform(-limit, limit);
        m.weights.push_back(std::move(w));
        m.alpha.push_back(1.0);
    }
    return m;
}

void GcnModel::validate() const {
    if (weights.empty()) throw InvalidArgument("GCN model has no layers");
    if (alpha.size() != weights.size()) throw InvalidArgument("one α per layer required");
    for (std::size_t l = 1; l < weights.size(); ++l)
        if (weights[l].rows() != weights[l - 1].cols())
            throw InvalidArgument("GCN layer " + std::to_string(l) + " width mismatch");
    for (double a : alpha)
        if (!std::isfinite(a)) throw InvalidArgument("GCN α must be finite");
}

namespace {

// s_i = (α k_i + 1)^{-1/2}
Vector inv_sqrt_degrees(const AdjacencyMatrix& a, double alpha) {
    const Vector& k = a.degrees();
    Vector s(k.size());
    for (Eigen::Index i = 0; i < k.size(); ++i) {
        const double d = alpha * k(i) + 1.0;
        if (!(d > 0.0))
            throw ComputationError("normalized adjacency undefined: degree " + std::to_string(d) +
                                   " at node " + std::to_string(i) + " for α=" +
                                   std::to_string(alpha));
        s(i) = 1.0 / std::sqrt(d);
    }
    return s;
}

struct LayerCache {
    Matrix input;  // H^(l−1)
    Matrix m;      // H W
    Matrix av;     // A (s ⊙ M)
    Matrix pre;    // Ã H W
    Vector s;
};

// Computes Ã M without forming Ã: s ⊙ (α A (s ⊙ M) + s ⊙ M).
Matrix propagate(const AdjacencyMatrix& a, double alpha, const Vector& s, const Matrix& m,
                 Matrix* av_out) {
    const Matrix v = s.asDiagonal() * m;
    Matrix av = a.data() * v;
    Matrix z = s.asDiagonal() * (alpha * av + v);
    if (av_out) *av_out = std::move(av);
    return z;
}

void check_shapes(const GcnModel& m, const AdjacencyMatrix& a, const Matrix& x) {
    m.validate();
    if (static_cast<std::size_t>(x.rows()) != a.size())
        throw InvalidArgument("GCN features have " + std::to_string(x.rows()) +
                              " rows for a graph of " + std::to_string(a.size()) + " nodes");
    if (x.cols() != m.weights.front().rows())
        throw InvalidArgument("GCN features have width " + std::to_string(x.cols()) +
                              ", model expects " + std::to_string(m.weights.front().rows()));
}

Matrix forward(const GcnModel& model, const AdjacencyMatrix& a, const Matrix& x,
               std::vector<LayerCache>* caches) {
    Matrix h = x;
    const std::size_t L = model.num_layers();
    for (std::size_t l = 0; l < L; ++l) {
        LayerCache c;
        c.s = inv_sqrt_degrees(a, model.alpha[l]);
        c.m = h * model.weights[l];
        c.pre = propagate(a, model.alpha[l], c.s, c.m, &c.av);
        Matrix out = c.pre;
        if (l + 1 < L) out = out.cwiseMax(0.0);
        if (caches) {
            c.input = std::move(h);
            caches->push_back(std::move(c));
        }
        h = std::move(out);
    }
    return h;
}

void check_loss_nodes(std::span<const std::size_t> nodes, std::size_t n) {
    if (nodes.empty()) throw InvalidArgument("loss node set is empty");
    for (auto i : nodes)
        if (i >= n) throw InvalidArgument("node index " + std::to_string(i) + " out of range");
}

// Mean cross-entropy over nodes; optionally writes dL/dlogits.
double cross_entropy(const Matrix& logits, const LabelVector& y,
                     std::span<const std::size_t> nodes, Matrix* grad) {
    if (grad) grad->setZero(logits.rows(), logits.cols());
    const double inv = 1.0 / double(nodes.size());
    double loss = 0.0;
    for (auto i : nodes) {
        const auto row = logits.row(static_cast<Eigen::Index>(i));
        const double peak = row.maxCoeff();
        const auto shifted = (row.array() - peak).exp();
        const double z = shifted.sum();
        loss += (std::log(z) + peak - row(y[i])) * inv;
        if (grad) {
            grad->row(static_cast<Eigen::Index>(i)) = shifted / z * inv;
            (*grad)(static_cast<Eigen::Index>(i), y[i]) -= inv;
        }
    }
    return loss;
}

}  // namespace

Matrix normalize_adjacency(const AdjacencyMatrix& a, double alpha) {
    const Vector s = inv_sqrt_degrees(a, alpha);
    const auto n = static_cast<Eigen::Index>(a.size());
    Matrix out = alpha * a.data() + Matrix::Identity(n, n);
    return s.asDiagonal() * out * s.asDiagonal();
}

Matrix gcn_forward(const GcnModel& m, const AdjacencyMatrix& a, const Matrix& x) {
    check_shapes(m, a, x);
    return forward(m, a, x, nullptr);
}

Matrix label_features(const LabelVector& y, std::span<const std::size_t> hidden_nodes) {
    Matrix x = Matrix::Zero(static_cast<Eigen::Index>(y.size()),
                            static_cast<Eigen::Index>(y.num_classes()));
    for (std::size_t i = 0; i < y.size(); ++i) x(static_cast<Eigen::Index>(i), y[i]) = 1.0;
    for (auto i : hidden_nodes) {
        if (i >= y.size()) throw InvalidArgument("node index " + std::to_string(i) + " out of range");
        x.row(static_cast<Eigen::Index>(i)).setZero();
    }
    return x;
}

double gcn_loss(const GcnModel& m, const AdjacencyMatrix& a, const Matrix& x,
                const LabelVector& y, std::span<const std::size_t> loss_nodes) {
    check_shapes(m, a, x);
    check_loss_nodes(loss_nodes, a.size());
    return cross_entropy(forward(m, a, x, nullptr), y, loss_nodes, nullptr);
}

GcnGradient gcn_loss_gradient(const GcnModel& m, const AdjacencyMatrix& a, const Matrix& x,
                              const LabelVector& y, std::span<const std::size_t> loss_nodes) {
    check_shapes(m, a, x);
    check_loss_nodes(loss_nodes, a.size());
    if (static_cast<std::size_t>(m.weights.back().cols()) != y.num_classes())
        throw InvalidArgument("GCN output width differs from the number of classes");

    std::vector<LayerCache> caches;
    const Matrix logits = forward(m, a, x, &caches);
    GcnGradient g;
    Matrix grad;
    g.loss = cross_entropy(logits, y, loss_nodes, &grad);

    const std::size_t L = m.num_layers();
    g.weights.resize(L);
    g.alpha.assign(L, 0.0);
    const Matrix& A = a.data();
    const Vector& k = a.degrees();
    for (std::size_t l = L; l-- > 0;) {
        const LayerCache& c = caches[l];
        const double alpha = m.alpha[l];
        if (l + 1 < L) grad = grad.cwiseProduct((c.pre.array() > 0.0).cast<double>().matrix());

        // ∂s_i/∂α = −½ k_i s_i³
        const Vector ds = (-0.5 * k.array() * c.s.array().cube()).matrix();
        const Matrix dm_alpha = ds.asDiagonal() * (alpha * c.av + 2.0 * (c.s.asDiagonal() * c.m)) +
                                c.s.asDiagonal() * c.av +
                                alpha * (c.s.asDiagonal() * (A * (ds.asDiagonal() * c.m)));
        g.alpha[l] = grad.cwiseProduct(dm_alpha).sum();

        // Ãᵀ G with Ã symmetric in structure: s ⊙ (α Aᵀ(s ⊙ G) + s ⊙ G)
        const Matrix sg = c.s.asDiagonal() * grad;
        const Matrix dm = c.s.asDiagonal() * (alpha * (A.transpose() * sg) + sg);
        g.weights[l] = c.input.transpose() * dm;
        if (l > 0) grad = dm * m.weights[l].transpose();
    }
    return g;
}

std::vector<std::uint32_t> argmax_rows(const Matrix& logits) {
    std::vector<std::uint32_t> out(static_cast<std::size_t>(logits.rows()));
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < logits.cols(); ++j)
            if (logits(i, j) > logits(i, best)) best = j;
        out[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(best);
    }
    return out;
}

GcnTrainResult train_gcn(const AdjacencyMatrix& a, const LabelVector& y, const TrainConfig& cfg,
                         std::span<const std::size_t> holdout) {
    cfg.validate();
    const std::size_t n = a.size();
    if (y.size() != n)
        throw InvalidArgument("graph has " + std::to_string(n) + " nodes but " +
                              std::to_string(y.size()) + " labels");
    if (n < 10) throw InvalidArgument("GCN training needs at least 10 nodes");
    y.require_all_classes_present();

    std::vector<bool> held(n, false);
    for (auto i : holdout) {
        if (i >= n) throw InvalidArgument("holdout index " + std::to_string(i) + " out of range");
        held[i] = true;
    }
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < n; ++i)
        if (!held[i]) pool.push_back(i);
    if (pool.empty()) throw InvalidArgument("every node is held out");

    std::vector<std::size_t> dims{y.num_classes()};
    dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
    dims.push_back(y.num_classes());

    GcnTrainResult result;
    GcnModel& model = result.model;
    model = GcnModel::initialize(dims, cfg.seed);
    model.config = cfg;
    Rng mask_rng = Rng::stream(cfg.seed, 1);

    const std::size_t L = model.num_layers();
    std::vector<Matrix> m1, m2;
    for (const auto& w : model.weights) {
        m1.push_back(Matrix::Zero(w.rows(), w.cols()));
        m2.push_back(Matrix::Zero(w.rows(), w.cols()));
    }
    std::vector<double> a1(L, 0.0), a2(L, 0.0);
    const Matrix base = label_features(y, holdout);

    result.loss_trace.reserve(cfg.epochs);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double rate = mask_rng.uniform(cfg.mask_lo, cfg.mask_hi);
        const auto count = std::min(
            pool.size(), std::max<std::size_t>(
                             1, static_cast<std::size_t>(std::ceil(rate * double(pool.size())))));
        // Partial Fisher–Yates: the first `count` entries become the mask.
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + mask_rng.below(pool.size() - i);
            std::swap(pool[i], pool[j]);
        }
        std::vector<std::size_t> masked(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
        std::sort(masked.begin(), masked.end());

        Matrix x = base;
        for (auto i : masked) x.row(static_cast<Eigen::Index>(i)).setZero();

        GcnGradient g;
        try {
            g = gcn_loss_gradient(model, a, x, y, masked);
        } catch (const ComputationError& e) {
            throw ComputationError("GCN training failed at epoch " + std::to_string(epoch) +
                                   ": " + e.what());
        }
        if (!std::isfinite(g.loss))
            throw ComputationError("GCN training diverged at epoch " + std::to_string(epoch) +
                                   " (non-finite loss)");
        result.loss_trace.push_back(g.loss);

        const double t = double(epoch + 1);
        const double c1 = 1.0 - std::pow(cfg.beta1, t);
        const double c2 = 1.0 - std::pow(cfg.beta2, t);
        for (std::size_t l = 0; l < L; ++l) {
            m1[l] = cfg.beta1 * m1[l] + (1.0 - cfg.beta1) * g.weights[l];
            m2[l] = cfg.beta2 * m2[l] + (1.0 - cfg.beta2) * g.weights[l].cwiseAbs2();
            model.weights[l].array() -=
                cfg.learning_rate * (m1[l].array() / c1) /
                ((m2[l].array() / c2).sqrt() + cfg.adam_eps);

            a1[l] = cfg.beta1 * a1[l] + (1.0 - cfg.beta1) * g.alpha[l];
            a2[l] = cfg.beta2 * a2[l] + (1.0 - cfg.beta2) * g.alpha[l] * g.alpha[l];
            model.alpha[l] -= cfg.learning_rate * (a1[l] / c1) / (std::sqrt(a2[l] / c2) + cfg.adam_eps);
            // Negative α can make αk_i + 1 ≤ 0 on dense graphs; keep Â nonnegative.
            model.alpha[l] = std::max(model.alpha[l], 0.0);
        }
    }
    return result;
}

double evaluate_gcn(const GcnModel& m, const AdjacencyMatrix& a, const LabelVector& y,
                    std::span<const std::size_t> test_mask) {
    if (test_mask.empty()) throw InvalidArgument("test mask is empty");
    if (y.size() != a.size()) throw InvalidArgument("label count differs from graph size");
    const Matrix logits = gcn_forward(m, a, label_features(y, test_mask));
    const auto pred = argmax_rows(logits);
    std::size_t correct = 0;
    for (auto i : test_mask)
        if (pred[i] == y[i]) ++correct;
    return double(correct) / double(test_mask.size());
}

namespace {

constexpr char kModelMagic[4] = {'R', 'P', 'C', 'G'};
constexpr std::uint32_t kModelVersion = 1;

template <class T>
void put(std::string& out, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    // Stored little-endian.
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    out.append(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& pos, const std::string& path) {
    if (pos + sizeof(T) > in.size())
        throw FormatError(FormatErrorKind::truncated, path, "model file ends early");
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, in.data() + pos, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    pos += sizeof(T);
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

void save_gcn_model(const GcnModel& m, const std::string& path) {
    m.validate();
    std::string out(kModelMagic, 4);
    put<std::uint32_t>(out, kModelVersion);
    put<std::uint64_t>(out, m.seed);
    put<std::uint64_t>(out, m.config.epochs);
    put<double>(out, m.config.learning_rate);
    put<double>(out, m.config.mask_lo);
    put<double>(out, m.config.mask_hi);
    const auto dims = m.dims();
    put<std::uint64_t>(out, m.num_layers());
    for (auto d : dims) put<std::uint64_t>(out, d);
    for (double a : m.alpha) put<double>(out, a);
    for (const auto& w : m.weights)
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j) put<double>(out, w(i, j));

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(path, "cannot open for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError(path, "write failed");
}

GcnModel load_gcn_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(path, "cannot open for reading");
    const std::string in((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (in.size() < 4 || std::memcmp(in.data(), kModelMagic, 4) != 0)
        throw FormatError(FormatErrorKind::malformed, path, "not a GCN model file");
    std::size_t pos = 4;
    const auto version = get<std::uint32_t>(in, pos, path);
    if (version != kModelVersion)
        throw FormatError(FormatErrorKind::malformed, path,
                          "unsupported model version " + std::to_string(version));
    GcnModel m;
    m.seed = get<std::uint64_t>(in, pos, path);
    m.config.seed = m.seed;
    m.config.epochs = get<std::uint64_t>(in, pos, path);
    m.config.learning_rate = get<double>(in, pos, path);
    m.config.mask_lo = get<double>(in, pos, path);
    m.config.mask_hi = get<double>(in, pos, path);
    const auto layers = get<std::uint64_t>(in, pos, path);
    if (layers == 0 || layers > 1024)
        throw FormatError(FormatErrorKind::malformed, path, "implausible layer count");
    std::vector<std::uint64_t> dims(layers + 1);
    for (auto& d : dims) {
        d = get<std::uint64_t>(in, pos, path);
        if (d == 0 || d > (1u << 20))
            throw FormatError(FormatErrorKind::malformed, path, "implausible layer width");
    }
    m.config.hidden.assign(dims.begin() + 1, dims.end() - 1);
    for (std::uint64_t l = 0; l < layers; ++l) m.alpha.push_back(get<double>(in, pos, path));
    for (std::uint64_t l = 0; l < layers; ++l) {
        Matrix w(static_cast<Eigen::Index>(dims[l]), static_cast<Eigen::Index>(dims[l + 1]));
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = get<double>(in, pos, path);
        m.weights.push_back(std::move(w));
    }
    if (pos != in.size())
        throw FormatError(FormatErrorKind::malformed, path, "trailing bytes after model");
    m.validate();
    return m;
}

}  // namespace repclust

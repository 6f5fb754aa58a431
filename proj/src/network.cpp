#include "a0c/network.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "a0c/errors.hpp"
#include "a0c/kernels.hpp"
#include "a0c/rng.hpp"

namespace a0c {

namespace {

double softplus(double z) {
    if (z > 30.0) return z;
    return std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

LayerParams make_layer(int out, int in) {
    LayerParams l;
    l.w = Matrix(out, in);
    l.b.assign(out, 0.0);
    return l;
}

void glorot_fill(Matrix& w, RandomStream& rng) {
    const double limit = std::sqrt(6.0 / (w.cols + w.rows));
    for (double& v : w.data) {
        v = rng.uniform(-limit, limit);
    }
}

}  // namespace

NetworkParams init_network(std::uint64_t seed, const NetConfig& cfg) {
    if (cfg.obs_dim <= 0 || cfg.n_a <= 0 || cfg.hidden <= 0 || cfg.depth <= 0) {
        throw std::invalid_argument("init_network: dimensions must be positive");
    }
    NetworkParams p;
    p.cfg = cfg;
    int in = cfg.obs_dim;
    for (int l = 0; l < cfg.depth; ++l) {
        p.trunk.push_back(make_layer(cfg.hidden, in));
        in = cfg.hidden;
    }
    p.policy_head = make_layer(2 * cfg.n_a, cfg.hidden);
    p.value_head = make_layer(1, cfg.hidden);

    RandomStream rng(seed);
    for (auto& layer : p.trunk) {
        glorot_fill(layer.w, rng);
    }
    glorot_fill(p.policy_head.w, rng);
    // The value head starts at exactly zero. Its targets are max-over-action
    // backups, which turn random positive head noise into a persistent
    // optimism bias under gamma = 1; starting from V = 0 keeps the first
    // targets inside the feasible (nonpositive-reward) range.
    return p;
}

NetworkParams zeros_like(const NetworkParams& like) {
    NetworkParams z;
    z.cfg = like.cfg;
    for (const auto& layer : like.trunk) {
        z.trunk.push_back(make_layer(layer.w.rows, layer.w.cols));
    }
    z.policy_head = make_layer(like.policy_head.w.rows, like.policy_head.w.cols);
    z.value_head = make_layer(like.value_head.w.rows, like.value_head.w.cols);
    return z;
}

void forward(const NetworkParams& p, const double* obs, int batch,
             ForwardCache& cache) {
    const NetConfig& cfg = p.cfg;
    cache.batch = batch;
    cache.x = Matrix(batch, cfg.obs_dim);
    std::memcpy(cache.x.data.data(), obs,
                sizeof(double) * static_cast<std::size_t>(batch) * cfg.obs_dim);

    cache.acts.assign(p.trunk.size(), Matrix());
    const double* in = cache.x.data.data();
    int in_dim = cfg.obs_dim;
    Matrix pre;
    for (std::size_t l = 0; l < p.trunk.size(); ++l) {
        const LayerParams& layer = p.trunk[l];
        pre = Matrix(batch, layer.w.rows);
        kernels::linear_forward(in, layer.w.data.data(), layer.b.data(),
                                pre.data.data(), batch, in_dim, layer.w.rows);
        cache.acts[l] = Matrix(batch, layer.w.rows);
        kernels::elu_forward(pre.data.data(), cache.acts[l].data.data(),
                             static_cast<std::int64_t>(pre.data.size()));
        in = cache.acts[l].data.data();
        in_dim = layer.w.rows;
    }

    cache.policy_raw = Matrix(batch, 2 * cfg.n_a);
    kernels::linear_forward(in, p.policy_head.w.data.data(),
                            p.policy_head.b.data(), cache.policy_raw.data.data(),
                            batch, in_dim, 2 * cfg.n_a);

    Matrix value_out(batch, 1);
    kernels::linear_forward(in, p.value_head.w.data.data(), p.value_head.b.data(),
                            value_out.data.data(), batch, in_dim, 1);
    cache.value.assign(value_out.data.begin(), value_out.data.end());

    cache.alpha = Matrix(batch, cfg.n_a);
    cache.beta = Matrix(batch, cfg.n_a);
    for (int b = 0; b < batch; ++b) {
        for (int i = 0; i < cfg.n_a; ++i) {
            cache.alpha(b, i) = 1.0 + softplus(cache.policy_raw(b, i));
            cache.beta(b, i) = 1.0 + softplus(cache.policy_raw(b, cfg.n_a + i));
        }
    }
}

ForwardOutput forward_one(const NetworkParams& p, const Observation& obs) {
    if (static_cast<int>(obs.values.size()) != p.cfg.obs_dim) {
        throw std::invalid_argument("forward: observation dimension mismatch");
    }
    ForwardCache cache;
    forward(p, obs.values.data(), 1, cache);
    ForwardOutput out;
    out.policy.alpha.assign(cache.alpha.data.begin(), cache.alpha.data.end());
    out.policy.beta.assign(cache.beta.data.begin(), cache.beta.data.end());
    out.value = cache.value[0];
    return out;
}

std::vector<ForwardOutput> forward_batch(const NetworkParams& p,
                                         const std::vector<Observation>& obs) {
    std::vector<ForwardOutput> outs;
    outs.reserve(obs.size());
    for (const Observation& o : obs) {
        outs.push_back(forward_one(p, o));
    }
    return outs;
}

NetworkParams backward(const NetworkParams& p, const ForwardCache& cache,
                       const HeadGrads& head) {
    const NetConfig& cfg = p.cfg;
    const int batch = cache.batch;
    if (head.d_alpha.rows != batch || head.d_beta.rows != batch ||
        static_cast<int>(head.d_value.size()) != batch) {
        throw std::invalid_argument("backward: head gradient shape mismatch");
    }
    NetworkParams grads = zeros_like(p);

    // Heads: alpha/beta go back through the 1 + softplus map.
    Matrix d_policy_raw(batch, 2 * cfg.n_a);
    for (int b = 0; b < batch; ++b) {
        for (int i = 0; i < cfg.n_a; ++i) {
            d_policy_raw(b, i) =
                head.d_alpha(b, i) * sigmoid(cache.policy_raw(b, i));
            d_policy_raw(b, cfg.n_a + i) =
                head.d_beta(b, i) * sigmoid(cache.policy_raw(b, cfg.n_a + i));
        }
    }

    const Matrix& top = cache.acts.back();
    kernels::linear_grad_params(d_policy_raw.data.data(), top.data.data(),
                                grads.policy_head.w.data.data(),
                                grads.policy_head.b.data(), batch, top.cols,
                                2 * cfg.n_a);
    kernels::linear_grad_params(head.d_value.data(), top.data.data(),
                                grads.value_head.w.data.data(),
                                grads.value_head.b.data(), batch, top.cols, 1);

    Matrix d_top(batch, top.cols);
    kernels::linear_grad_input(d_policy_raw.data.data(),
                               p.policy_head.w.data.data(), d_top.data.data(),
                               batch, top.cols, 2 * cfg.n_a);
    Matrix d_top_v(batch, top.cols);
    kernels::linear_grad_input(head.d_value.data(), p.value_head.w.data.data(),
                               d_top_v.data.data(), batch, top.cols, 1);
    for (std::size_t i = 0; i < d_top.data.size(); ++i) {
        d_top.data[i] += d_top_v.data[i];
    }

    // Trunk, last layer first.
    Matrix d_act = std::move(d_top);
    for (int l = static_cast<int>(p.trunk.size()) - 1; l >= 0; --l) {
        const Matrix& act = cache.acts[l];
        Matrix d_pre(batch, act.cols);
        kernels::elu_backward(act.data.data(), d_act.data.data(),
                              d_pre.data.data(),
                              static_cast<std::int64_t>(act.data.size()));
        const Matrix& input = (l == 0) ? cache.x : cache.acts[l - 1];
        kernels::linear_grad_params(d_pre.data.data(), input.data.data(),
                                    grads.trunk[l].w.data.data(),
                                    grads.trunk[l].b.data(), batch, input.cols,
                                    act.cols);
        if (l > 0) {
            Matrix d_in(batch, input.cols);
            kernels::linear_grad_input(d_pre.data.data(),
                                       p.trunk[l].w.data.data(),
                                       d_in.data.data(), batch, input.cols,
                                       act.cols);
            d_act = std::move(d_in);
        }
    }
    return grads;
}

RmsPropState make_rmsprop(const NetworkParams& params, double lr, double rho,
                          double eps) {
    RmsPropState st;
    st.lr = lr;
    st.rho = rho;
    st.eps = eps;
    st.v = zeros_like(params);
    return st;
}

void rmsprop_step(NetworkParams& params, const NetworkParams& grads,
                  RmsPropState& state) {
    visit_tensors(grads, [](const std::string& name, const auto& g) {
        for (double v : g) {
            if (!std::isfinite(v)) {
                throw NumericError("non-finite gradient in " + name);
            }
        }
    });

    std::vector<std::vector<double>*> param_arrays, acc_arrays;
    std::vector<const std::vector<double>*> grad_arrays;
    visit_tensors(params, [&](const std::string&, auto& a) {
        param_arrays.push_back(&a);
    });
    visit_tensors(grads, [&](const std::string&, const auto& a) {
        grad_arrays.push_back(&a);
    });
    visit_tensors(state.v, [&](const std::string&, auto& a) {
        acc_arrays.push_back(&a);
    });
    for (std::size_t i = 0; i < param_arrays.size(); ++i) {
        kernels::rmsprop_update(param_arrays[i]->data(), grad_arrays[i]->data(),
                                acc_arrays[i]->data(),
                                static_cast<std::int64_t>(param_arrays[i]->size()),
                                state.lr, state.rho, state.eps);
    }
}

namespace {

constexpr char kMagic[8] = {'A', '0', 'C', 'N', 'E', 'T', '0', '1'};

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) {
        throw std::runtime_error("checkpoint: truncated file");
    }
    return v;
}

struct TensorEntry {
    std::string name;
    std::vector<std::uint64_t> shape;
    std::vector<double>* data;
};

std::vector<TensorEntry> list_tensors(NetworkParams& p) {
    std::vector<TensorEntry> entries;
    auto add_layer = [&](const std::string& tag, LayerParams& l) {
        entries.push_back({tag + ".w",
                           {static_cast<std::uint64_t>(l.w.rows),
                            static_cast<std::uint64_t>(l.w.cols)},
                           &l.w.data});
        entries.push_back({tag + ".b", {l.b.size()}, &l.b});
    };
    for (std::size_t l = 0; l < p.trunk.size(); ++l) {
        add_layer("trunk" + std::to_string(l), p.trunk[l]);
    }
    add_layer("policy", p.policy_head);
    add_layer("value", p.value_head);
    return entries;
}

}  // namespace

void save_checkpoint(const NetworkParams& params, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("checkpoint: cannot open " + path);
    }
    os.write(kMagic, sizeof(kMagic));
    write_pod<std::uint32_t>(os, params.cfg.obs_dim);
    write_pod<std::uint32_t>(os, params.cfg.n_a);
    write_pod<std::uint32_t>(os, params.cfg.hidden);
    write_pod<std::uint32_t>(os, params.cfg.depth);

    auto entries = list_tensors(const_cast<NetworkParams&>(params));
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(entries.size()));
    for (const TensorEntry& e : entries) {
        write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(e.name.size()));
        os.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
        write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(e.shape.size()));
        for (std::uint64_t d : e.shape) {
            write_pod(os, d);
        }
        os.write(reinterpret_cast<const char*>(e.data->data()),
                 static_cast<std::streamsize>(e.data->size() * sizeof(double)));
    }
    if (!os) {
        throw std::runtime_error("checkpoint: write failed for " + path);
    }
}

NetworkParams load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("checkpoint: cannot open " + path);
    }
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("checkpoint: bad magic/version in " + path);
    }
    NetConfig cfg;
    cfg.obs_dim = static_cast<int>(read_pod<std::uint32_t>(is));
    cfg.n_a = static_cast<int>(read_pod<std::uint32_t>(is));
    cfg.hidden = static_cast<int>(read_pod<std::uint32_t>(is));
    cfg.depth = static_cast<int>(read_pod<std::uint32_t>(is));

    NetworkParams params = init_network(0, cfg);
    auto entries = list_tensors(params);
    const std::uint32_t count = read_pod<std::uint32_t>(is);
    if (count != entries.size()) {
        throw std::runtime_error("checkpoint: tensor count mismatch");
    }
    for (TensorEntry& e : entries) {
        const auto name_len = read_pod<std::uint32_t>(is);
        std::string stored(name_len, '\0');
        is.read(stored.data(), name_len);
        if (stored != e.name) {
            throw std::runtime_error("checkpoint: unexpected tensor " + stored);
        }
        const auto ndim = read_pod<std::uint32_t>(is);
        std::vector<std::uint64_t> shape(ndim);
        std::uint64_t n = 1;
        for (auto& d : shape) {
            d = read_pod<std::uint64_t>(is);
            n *= d;
        }
        if (shape != e.shape || n != e.data->size()) {
            throw std::runtime_error("checkpoint: shape mismatch for " + e.name);
        }
        is.read(reinterpret_cast<char*>(e.data->data()),
                static_cast<std::streamsize>(n * sizeof(double)));
        if (!is) {
            throw std::runtime_error("checkpoint: truncated tensor " + e.name);
        }
    }
    return params;
}

}  // namespace a0c

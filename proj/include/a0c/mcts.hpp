#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "a0c/beta_policy.hpp"
#include "a0c/env.hpp"
#include "a0c/rng.hpp"
#include "a0c/types.hpp"

namespace a0c {

struct SearchConfig {
    double c_puct = 0.05;
    double c_pw = 1.0;
    double kappa = 0.5;
    double gamma = 1.0;
    double c_b = 2.0;
    int proposal_retries = 10;      // resamples for zero-density proposals
    double boundary_margin = 1e-6;  // inward clamp after the retries run out
};

/// Root summary of one search: support actions A_0, their counts N_0, mean
/// values Q(s_0, a), and the off-policy value target max_a Q(s_0, a).
struct SearchResult {
    std::vector<Action> root_actions;
    std::vector<long> root_counts;
    std::vector<double> root_q;
    double value_target = 0.0;
};

/// Policy/value prediction for one observation.
struct EvalResult {
    BetaPolicyParams policy;
    double value = 0.0;
};

using Evaluator = std::function<EvalResult(const Observation&)>;

/// Search tree over snapshot states. Node visit counts follow
/// n(s) = sum_a n(s,a): a node's creation trace ends at the node and is not
/// counted, so the identity holds exactly at every node after every trace.
template <Environment E>
struct SearchTree {
    using State = typename E::State;

    struct Node;

    struct Edge {
        Action action;
        double reward = 0.0;  // immediate r(s, a), set at expansion
        long n = 0;
        double w = 0.0;
        double q = 0.0;
        std::unique_ptr<Node> child;
    };

    struct Node {
        State state;
        Observation obs;
        bool terminal = false;
        BetaPolicyParams policy;  // cached prediction, unset on terminal nodes
        double value = 0.0;       // cached V(obs); 0 on terminal nodes
        long n = 0;
        std::vector<Edge> edges;
    };

    std::unique_ptr<Node> root;
};

template <Environment E>
class Search {
public:
    using Tree = SearchTree<E>;
    using Node = typename Tree::Node;
    using Edge = typename Tree::Edge;
    using State = typename E::State;

    Search(const E& env, Evaluator evaluate, SearchConfig config)
        : env_(&env), evaluate_(std::move(evaluate)), cfg_(config) {}

    const SearchConfig& config() const { return cfg_; }

    std::unique_ptr<Node> make_node(const State& state, bool terminal) const {
        auto node = std::make_unique<Node>();
        node->state = state;
        node->obs = env_->observe(state);
        node->terminal = terminal;
        if (!terminal) {
            EvalResult ev = evaluate_(node->obs);
            node->policy = std::move(ev.policy);
            node->value = ev.value;
        }
        return node;
    }

    std::unique_ptr<Node> make_root(const State& state) const {
        return make_node(state, false);
    }

    /// Runs exactly n_trace select/expand/evaluate/backup traces from the
    /// root and summarizes the root statistics.
    SearchResult run(Node& root, int n_trace, RandomStream& rng) const {
        if (root.terminal) {
            throw std::logic_error("run_search: root is terminal");
        }
        if (n_trace < 1) {
            throw std::invalid_argument("run_search: budget must be >= 1");
        }
        std::vector<std::pair<Node*, Edge*>> path;
        for (int t = 0; t < n_trace; ++t) {
            path.clear();
            trace(root, path, rng);
        }

        SearchResult result;
        result.root_actions.reserve(root.edges.size());
        result.root_counts.reserve(root.edges.size());
        result.root_q.reserve(root.edges.size());
        double best_q = -std::numeric_limits<double>::infinity();
        for (const Edge& e : root.edges) {
            result.root_actions.push_back(e.action);
            result.root_counts.push_back(e.n);
            result.root_q.push_back(e.q);
            if (e.q > best_q) best_q = e.q;
        }
        result.value_target = best_q;
        return result;
    }

    /// Progressive widening count m(s) = ceil(c_pw * max(n, 1)^kappa).
    long widen_limit(long n) const {
        const double base = static_cast<double>(n < 1 ? 1 : n);
        return static_cast<long>(std::ceil(cfg_.c_pw * std::pow(base, cfg_.kappa)));
    }

    /// Appends a fresh edge with an action proposed by the policy when the
    /// widening bound allows it; returns nullptr otherwise. A fresh node
    /// (n = 0) always receives its first edge here.
    Edge* maybe_widen(Node& node, RandomStream& rng) const {
        if (node.terminal) {
            return nullptr;
        }
        if (static_cast<long>(node.edges.size()) >= widen_limit(node.n)) {
            return nullptr;
        }
        Action proposal = propose_action(node, rng);
        Edge edge;
        edge.action = std::move(proposal);
        node.edges.push_back(std::move(edge));
        return &node.edges.back();
    }

    /// argmax over existing edges of Q + c_puct * sqrt(n(s)) / (n(s,a) + 1);
    /// ties break toward the lowest index.
    int select_edge(const Node& node) const {
        if (node.edges.empty()) {
            throw std::logic_error("select_edge: node has no edges");
        }
        const double bonus_scale =
            cfg_.c_puct * std::sqrt(static_cast<double>(node.n));
        int best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < static_cast<int>(node.edges.size()); ++i) {
            const Edge& e = node.edges[i];
            const double score = e.q + bonus_scale / static_cast<double>(e.n + 1);
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        return best;
    }

    /// Simulates the edge's action from the parent snapshot, records the
    /// immediate reward, attaches the child node, and returns the leaf value
    /// (V of the child, or 0 for a terminal child).
    double expand_and_evaluate(Edge& edge, const Node& parent) const {
        if (edge.child) {
            throw std::logic_error("expand_and_evaluate: edge already expanded");
        }
        StepResult<State> sr = env_->step(parent.state, edge.action);
        edge.reward = sr.reward;
        edge.child = make_node(sr.next_state, sr.terminal);
        return edge.child->value;
    }

    /// Recursive Bellman backup R_i = r_i + gamma * R_{i+1} along the trace,
    /// leaf to root; increments visit counts and refreshes Q = W / n.
    static void backup(std::vector<std::pair<Node*, Edge*>>& path,
                       double leaf_value, double gamma) {
        double ret = leaf_value;
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            Node* node = it->first;
            Edge* edge = it->second;
            ret = edge->reward + gamma * ret;
            edge->w += ret;
            edge->n += 1;
            edge->q = edge->w / static_cast<double>(edge->n);
            node->n += 1;
        }
    }

private:
    void trace(Node& root, std::vector<std::pair<Node*, Edge*>>& path,
               RandomStream& rng) const {
        Node* node = &root;
        double leaf_value = 0.0;
        for (;;) {
            if (node->terminal) {
                break;
            }
            if (Edge* fresh = maybe_widen(*node, rng)) {
                path.emplace_back(node, fresh);
                leaf_value = expand_and_evaluate(*fresh, *node);
                break;
            }
            const int idx = select_edge(*node);
            Edge& edge = node->edges[idx];
            path.emplace_back(node, &edge);
            node = edge.child.get();
        }
        backup(path, leaf_value, cfg_.gamma);
    }

    Action propose_action(const Node& node, RandomStream& rng) const {
        for (int attempt = 0; attempt < cfg_.proposal_retries; ++attempt) {
            Action a = sample(node.policy, cfg_.c_b, rng);
            if (log_density(node.policy, a, cfg_.c_b) !=
                -std::numeric_limits<double>::infinity()) {
                return a;
            }
        }
        Action a = sample(node.policy, cfg_.c_b, rng);
        for (double& v : a.values) {
            const double lim = cfg_.c_b - cfg_.boundary_margin;
            if (v > lim) v = lim;
            if (v < -lim) v = -lim;
        }
        return a;
    }

    const E* env_;
    Evaluator evaluate_;
    SearchConfig cfg_;
};

/// Samples an edge index from the normalized root counts (Eq.-3-style
/// play distribution).
inline std::size_t sample_root_index(const SearchResult& result,
                                     RandomStream& rng) {
    long total = 0;
    for (long c : result.root_counts) total += c;
    if (total <= 0) {
        throw std::logic_error("sample_root_index: no root visits");
    }
    const long pick = static_cast<long>(rng.uniform_index(static_cast<std::size_t>(total)));
    long cum = 0;
    for (std::size_t i = 0; i < result.root_counts.size(); ++i) {
        cum += result.root_counts[i];
        if (pick < cum) return i;
    }
    return result.root_counts.size() - 1;
}

inline Action sample_root_action(const SearchResult& result, RandomStream& rng) {
    return result.root_actions[sample_root_index(result, rng)];
}

/// Promotes the chosen edge's child to root, keeping its statistics and
/// subtree; every sibling subtree is released.
template <Environment E>
void advance_root(SearchTree<E>& tree, std::size_t edge_index) {
    auto& edges = tree.root->edges;
    if (edge_index >= edges.size() || !edges[edge_index].child) {
        throw std::logic_error("advance_root: no expanded edge at index");
    }
    auto child = std::move(edges[edge_index].child);
    tree.root = std::move(child);
}

template <Environment E>
void advance_root(SearchTree<E>& tree, const Action& chosen) {
    auto& edges = tree.root->edges;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].action == chosen) {
            advance_root(tree, i);
            return;
        }
    }
    throw std::logic_error("advance_root: action does not match a root edge");
}

/// Structural self-check: visit-count conservation n(s) = sum_a n(s,a), the
/// widening bound, the Q*n = W identity, and child attachment. Throws
/// std::logic_error on the first violation.
template <typename Node>
void validate_subtree(const Node& node, const SearchConfig& cfg) {
    long count_sum = 0;
    for (const auto& e : node.edges) {
        count_sum += e.n;
        if (e.n > 0 && !e.child) {
            throw std::logic_error("tree invariant: visited edge without child");
        }
        if (e.n > 0 && std::abs(e.q * static_cast<double>(e.n) - e.w) > 1e-9) {
            throw std::logic_error("tree invariant: Q*n != W");
        }
    }
    if (node.n != count_sum) {
        throw std::logic_error("tree invariant: n(s) != sum of edge counts");
    }
    const double limit =
        std::ceil(cfg.c_pw * std::pow(static_cast<double>(node.n < 1 ? 1 : node.n),
                                      cfg.kappa)) + 1.0;
    if (static_cast<double>(node.edges.size()) > limit) {
        throw std::logic_error("tree invariant: widening bound exceeded");
    }
    if (node.terminal && !node.edges.empty()) {
        throw std::logic_error("tree invariant: terminal node has edges");
    }
    for (const auto& e : node.edges) {
        if (e.child) {
            validate_subtree(*e.child, cfg);
        }
    }
}

/// Depth-limited text rendering of nodes/edges with n, W, Q (debug aid and
/// golden-file anchor).
template <typename Node>
void dump_tree(const Node& node, int max_depth, std::string& out,
               int depth = 0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%*snode n=%ld%s\n", 4 * depth, "", node.n,
                  node.terminal ? " terminal" : "");
    out += buf;
    if (depth >= max_depth) {
        return;
    }
    for (const auto& e : node.edges) {
        std::string astr;
        for (std::size_t i = 0; i < e.action.values.size(); ++i) {
            char num[32];
            std::snprintf(num, sizeof(num), "%s%.6g", i ? "," : "",
                          e.action.values[i]);
            astr += num;
        }
        std::snprintf(buf, sizeof(buf), "%*sedge a=[%s] n=%ld w=%.6g q=%.6g\n",
                      4 * depth + 2, "", astr.c_str(), e.n, e.w, e.q);
        out += buf;
        if (e.child) {
            dump_tree(*e.child, max_depth, out, depth + 1);
        }
    }
}

template <typename Node>
std::string dump_tree(const Node& node, int max_depth) {
    std::string out;
    dump_tree(node, max_depth, out);
    return out;
}

}  // namespace a0c

#include "pcram/synth.hpp"

#include <algorithm>
#include <cassert>

namespace pcram {

NodeId SyncBuilder::mk(NodeKind k, NodeId a, NodeId b, int32_t d) {
    NodeId id = c_.add_gate(k, a, b);
    depth_.push_back(d);
    chains_.emplace_back();
    return id;
}

NodeId SyncBuilder::input() {
    NodeId id = c_.add_input();
    depth_.push_back(0);
    chains_.emplace_back();
    return id;
}

SyncBuilder::Word SyncBuilder::input_word(unsigned w) {
    Word xs(w);
    for (auto& x : xs) x = input();
    return xs;
}

NodeId SyncBuilder::constant(bool v) {
    auto it = const_cache_.find(v);
    if (it != const_cache_.end()) return it->second;
    NodeId id = mk(v ? NodeKind::Const1 : NodeKind::Const0, kNoNode, kNoNode, 1);
    const_cache_[v] = id;
    return id;
}

SyncBuilder::Word SyncBuilder::const_word(uint64_t value, unsigned w) {
    Word xs(w);
    for (unsigned i = 0; i < w; ++i) xs[i] = constant((value >> i) & 1);
    return xs;
}

int32_t SyncBuilder::word_depth(const Word& xs) const {
    int32_t d = 0;
    for (NodeId x : xs) d = std::max(d, depth_[x]);
    return d;
}

NodeId SyncBuilder::lift(NodeId x, int32_t to) {
    int32_t have = depth_[x];
    if (to <= have) return x;
    auto& chain = chains_[x];
    while (static_cast<int32_t>(chain.size()) < to - have) {
        NodeId prev = chain.empty() ? x : chain.back();
        chain.push_back(mk(NodeKind::Id, prev, kNoNode, depth_[prev] + 1));
        // mk() may reallocate chains_; re-fetch through the index each loop.
    }
    return chains_[x][to - have - 1];
}

SyncBuilder::Word SyncBuilder::lift_word(const Word& xs, int32_t to) {
    Word out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) out[i] = lift(xs[i], to);
    return out;
}

NodeId SyncBuilder::band(NodeId a, NodeId b) {
    int32_t d = std::max(depth_[a], depth_[b]);
    return mk(NodeKind::And, lift(a, d), lift(b, d), d + 1);
}

NodeId SyncBuilder::bor(NodeId a, NodeId b) {
    int32_t d = std::max(depth_[a], depth_[b]);
    return mk(NodeKind::Or, lift(a, d), lift(b, d), d + 1);
}

NodeId SyncBuilder::bnot(NodeId a) { return mk(NodeKind::Not, a, kNoNode, depth_[a] + 1); }
NodeId SyncBuilder::bid(NodeId a) { return mk(NodeKind::Id, a, kNoNode, depth_[a] + 1); }

NodeId SyncBuilder::bxor(NodeId a, NodeId b) {
    NodeId o = bor(a, b);
    NodeId n = bnot(band(a, b));
    return band(o, n);
}

NodeId SyncBuilder::beq(NodeId a, NodeId b) {
    NodeId both = band(a, b);
    NodeId neither = band(bnot(a), bnot(b));
    return bor(both, neither);
}

NodeId SyncBuilder::mux(NodeId s, NodeId lo, NodeId hi) {
    NodeId ns = bnot(s);
    return bor(band(hi, s), band(lo, ns));
}

SyncBuilder::Word SyncBuilder::mux_word(NodeId s, const Word& lo, const Word& hi) {
    assert(lo.size() == hi.size());
    NodeId ns = bnot(s);
    Word out(lo.size());
    for (size_t i = 0; i < lo.size(); ++i)
        out[i] = bor(band(hi[i], s), band(lo[i], ns));
    return out;
}

NodeId SyncBuilder::and_tree(std::vector<NodeId> xs) {
    assert(!xs.empty());
    while (xs.size() > 1) {
        std::vector<NodeId> next;
        for (size_t i = 0; i + 1 < xs.size(); i += 2) next.push_back(band(xs[i], xs[i + 1]));
        if (xs.size() & 1) next.push_back(xs.back());
        xs = std::move(next);
    }
    return xs[0];
}

NodeId SyncBuilder::or_tree(std::vector<NodeId> xs) {
    assert(!xs.empty());
    while (xs.size() > 1) {
        std::vector<NodeId> next;
        for (size_t i = 0; i + 1 < xs.size(); i += 2) next.push_back(bor(xs[i], xs[i + 1]));
        if (xs.size() & 1) next.push_back(xs.back());
        xs = std::move(next);
    }
    return xs[0];
}

SyncBuilder::Word SyncBuilder::word_and(const Word& a, const Word& b) {
    Word out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = band(a[i], b[i]);
    return out;
}

SyncBuilder::Word SyncBuilder::word_or(const Word& a, const Word& b) {
    Word out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = bor(a[i], b[i]);
    return out;
}

SyncBuilder::Word SyncBuilder::word_xor(const Word& a, const Word& b) {
    Word out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = bxor(a[i], b[i]);
    return out;
}

SyncBuilder::Word SyncBuilder::word_not(const Word& a) {
    Word out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = bnot(a[i]);
    return out;
}

SyncBuilder::Word SyncBuilder::add(const Word& a, const Word& b, bool carry_in) {
    assert(a.size() == b.size());
    const size_t w = a.size();
    Word p(w), g(w);
    for (size_t i = 0; i < w; ++i) {
        p[i] = bxor(a[i], b[i]);
        g[i] = band(a[i], b[i]);
    }
    if (carry_in) {
        // carry into bit 0 is 1: g0' = a0 | b0, p0 flips the sum bit later
        g[0] = bor(a[0], b[0]);
    }
    // Kogge-Stone prefix: G[i] = carry out of bit i.
    Word G = g, P = p;
    for (size_t step = 1; step < w; step <<= 1) {
        Word G2 = G, P2 = P;
        for (size_t i = step; i < w; ++i) {
            G2[i] = bor(G[i], band(P[i], G[i - step]));
            P2[i] = band(P[i], P[i - step]);
        }
        G = std::move(G2);
        P = std::move(P2);
    }
    Word sum(w);
    sum[0] = carry_in ? bnot(p[0]) : bid(p[0]);
    for (size_t i = 1; i < w; ++i) sum[i] = bxor(p[i], G[i - 1]);
    return sum;
}

SyncBuilder::Word SyncBuilder::sub(const Word& a, const Word& b) {
    return add(a, word_not(b), true);
}

SyncBuilder::Word SyncBuilder::increment(const Word& a) {
    // a + 1: carry into bit i is AND of bits 0..i-1 (prefix tree).
    const size_t w = a.size();
    Word out(w);
    out[0] = bnot(a[0]);
    std::vector<NodeId> prefix(w); // prefix[i] = a0 & .. & ai
    prefix[0] = bid(a[0]);
    for (size_t i = 1; i < w; ++i) prefix[i] = band(prefix[i - 1], a[i]);
    // linear prefix keeps it simple; depth w is fine for the small words
    // this is used on -- the adder path is used where depth matters
    for (size_t i = 1; i < w; ++i) out[i] = bxor(a[i], prefix[i - 1]);
    return out;
}

NodeId SyncBuilder::eq_word(const Word& a, const Word& b) {
    std::vector<NodeId> eqs(a.size());
    for (size_t i = 0; i < a.size(); ++i) eqs[i] = beq(a[i], b[i]);
    return and_tree(std::move(eqs));
}

NodeId SyncBuilder::is_zero(const Word& a) {
    std::vector<NodeId> xs(a.begin(), a.end());
    return bnot(or_tree(std::move(xs)));
}

NodeId SyncBuilder::lt_word(const Word& a, const Word& b) {
    // Pairwise (eq, lt) combine from LSB to MSB.
    struct EL { NodeId eq, lt; };
    std::vector<EL> v(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        v[i].eq = beq(a[i], b[i]);
        v[i].lt = band(bnot(a[i]), b[i]);
    }
    while (v.size() > 1) {
        std::vector<EL> next;
        for (size_t i = 0; i + 1 < v.size(); i += 2) {
            const EL& lo = v[i];
            const EL& hi = v[i + 1];
            EL m;
            m.lt = bor(hi.lt, band(hi.eq, lo.lt));
            m.eq = band(hi.eq, lo.eq);
            next.push_back(m);
        }
        if (v.size() & 1) next.push_back(v.back());
        v = std::move(next);
    }
    return v[0].lt;
}

NodeId SyncBuilder::le_word(const Word& a, const Word& b) { return bnot(lt_word(b, a)); }

SyncBuilder::Word SyncBuilder::shl_var(const Word& a, const Word& amount) {
    size_t w = a.size();
    assert((w & (w - 1)) == 0);
    unsigned levels = 0;
    while ((size_t{1} << levels) < w) ++levels;
    Word cur = a;
    for (unsigned j = 0; j < levels; ++j) {
        size_t sh = size_t{1} << j;
        Word shifted(w);
        for (size_t i = 0; i < w; ++i) shifted[i] = (i < sh) ? constant(false) : cur[i - sh];
        cur = mux_word(amount[j], cur, shifted);
    }
    return cur;
}

SyncBuilder::Word SyncBuilder::shr_var(const Word& a, const Word& amount) {
    size_t w = a.size();
    assert((w & (w - 1)) == 0);
    unsigned levels = 0;
    while ((size_t{1} << levels) < w) ++levels;
    Word cur = a;
    for (unsigned j = 0; j < levels; ++j) {
        size_t sh = size_t{1} << j;
        Word shifted(w);
        for (size_t i = 0; i < w; ++i) shifted[i] = (i + sh >= w) ? constant(false) : cur[i + sh];
        cur = mux_word(amount[j], cur, shifted);
    }
    return cur;
}

SyncBuilder::Word SyncBuilder::splice(const Circuit& sub, const Word& ins) {
    if (!sub.finalized()) throw CircuitError("splice: subcircuit must be finalized");
    if (ins.size() != sub.num_inputs())
        throw CircuitError("splice: subcircuit '" + sub.name() + "' takes " +
                           std::to_string(sub.num_inputs()) + " inputs, got " +
                           std::to_string(ins.size()));
    int32_t base = word_depth(ins);
    Word lifted = lift_word(ins, base);

    std::vector<NodeId> remap(sub.num_nodes(), kNoNode);
    for (size_t i = 0; i < sub.num_inputs(); ++i) remap[sub.inputs()[i]] = lifted[i];
    for (NodeId id : sub.topo_order()) {
        const auto& nd = sub.node(id);
        if (nd.kind == NodeKind::Input) continue;
        NodeId a = kNoNode, b = kNoNode;
        unsigned ar = arity_of(nd.kind);
        if (ar >= 1) a = remap[nd.fanin[0]];
        if (ar >= 2) b = remap[nd.fanin[1]];
        remap[id] = mk(nd.kind, a, b, base + sub.node_depth(id));
    }
    Word outs(sub.num_outputs());
    for (size_t i = 0; i < sub.num_outputs(); ++i) outs[i] = remap[sub.outputs()[i]];
    return outs;
}

void SyncBuilder::set_outputs(Word outs, bool pad_to_common) {
    outputs_ = std::move(outs);
    outputs_padded_ = pad_to_common;
}

void SyncBuilder::append_outputs(const Word& outs) {
    outputs_.insert(outputs_.end(), outs.begin(), outs.end());
    outputs_padded_ = true;
}

Circuit SyncBuilder::finish(std::string name) {
    // Output nodes must be gates without outgoing edges and distinct, so
    // wrap any input, consumed node, or repeated node in a fresh ID. Then
    // pad everything to one depth with private chains.
    std::vector<uint32_t> consumers(c_.num_nodes(), 0);
    for (NodeId id = 0; id < c_.num_nodes(); ++id) {
        const auto& nd = c_.node(id);
        for (unsigned i = 0; i < arity_of(nd.kind); ++i) ++consumers[nd.fanin[i]];
    }
    std::vector<bool> seen(c_.num_nodes(), false);
    std::vector<bool> wrap(outputs_.size(), false);
    int32_t target = 0;
    for (size_t i = 0; i < outputs_.size(); ++i) {
        NodeId o = outputs_[i];
        wrap[i] = c_.is_input(o) || consumers[o] > 0 || seen[o];
        seen[o] = true;
        target = std::max(target, depth_[o] + (wrap[i] ? 1 : 0));
    }
    if (!outputs_padded_) target = 0; // callers opting out still get wraps
    for (size_t i = 0; i < outputs_.size(); ++i) {
        NodeId o = outputs_[i];
        if (wrap[i]) o = bid(o);
        while (depth_[o] < target) o = bid(o);
        outputs_[i] = o;
    }
    c_.set_outputs(std::vector<NodeId>(outputs_.begin(), outputs_.end()));
    c_.set_name(std::move(name));
    c_.finalize();
    Circuit done = std::move(c_);
    c_ = Circuit();
    depth_.clear();
    chains_.clear();
    const_cache_.clear();
    outputs_.clear();
    return done;
}

} // namespace pcram

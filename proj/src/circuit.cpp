#include "pcram/circuit.hpp"

#include <algorithm>

namespace pcram {

const char* kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Input: return "INPUT";
        case NodeKind::And: return "AND";
        case NodeKind::Or: return "OR";
        case NodeKind::Not: return "NOT";
        case NodeKind::Id: return "ID";
        case NodeKind::Const0: return "CONST0";
        case NodeKind::Const1: return "CONST1";
    }
    return "?";
}

NodeId Circuit::add_input() {
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{NodeKind::Input, {kNoNode, kNoNode}});
    inputs_.push_back(id);
    finalized_ = false;
    return id;
}

NodeId Circuit::add_gate(NodeKind kind, NodeId a, NodeId b) {
    unsigned ar = arity_of(kind);
    if (kind == NodeKind::Input) throw CircuitError("add_gate: use add_input for input nodes");
    NodeId fan[2] = {a, b};
    for (unsigned i = 0; i < ar; ++i)
        if (fan[i] >= nodes_.size())
            throw CircuitError("add_gate: fanin refers to nonexistent node");
    return add_gate_unchecked(kind, a, b);
}

NodeId Circuit::add_gate_unchecked(NodeKind kind, NodeId a, NodeId b) {
    NodeId id = static_cast<NodeId>(nodes_.size());
    Node n{kind, {kNoNode, kNoNode}};
    unsigned ar = arity_of(kind);
    if (ar >= 1) n.fanin[0] = a;
    if (ar >= 2) n.fanin[1] = b;
    nodes_.push_back(n);
    finalized_ = false;
    return id;
}

namespace {

// Kahn topological sort. Returns false if a cycle remains.
bool topo_sort(const Circuit& c, std::vector<NodeId>& order) {
    const size_t n = c.num_nodes();
    std::vector<uint32_t> indeg(n, 0);
    std::vector<std::vector<NodeId>> consumers(n);
    for (NodeId id = 0; id < n; ++id) {
        const auto& nd = c.node(id);
        unsigned ar = arity_of(nd.kind);
        for (unsigned i = 0; i < ar; ++i) {
            NodeId f = nd.fanin[i];
            if (f >= n) continue; // diagnosed separately
            consumers[f].push_back(id);
            ++indeg[id];
        }
    }
    order.clear();
    order.reserve(n);
    std::vector<NodeId> queue;
    for (NodeId id = 0; id < n; ++id)
        if (indeg[id] == 0) queue.push_back(id);
    size_t head = 0;
    while (head < queue.size()) {
        NodeId id = queue[head++];
        order.push_back(id);
        for (NodeId cns : consumers[id])
            if (--indeg[cns] == 0) queue.push_back(cns);
    }
    return order.size() == n;
}

constexpr int32_t kUnset = -1;

// Depth assignment with flexible constant-fed subgraphs; fills report.
void assign_depths(const Circuit& c, const std::vector<NodeId>& topo, ValidationReport& rep) {
    const size_t n = c.num_nodes();
    rep.depth_by_node.assign(n, kUnset);
    auto& depth = rep.depth_by_node;

    // Minimal feasible height of constant-fed nodes (consts sit at >= 1).
    std::vector<int32_t> cheight(n, 0);
    bool sync = true;

    for (NodeId id : topo) {
        const auto& nd = c.node(id);
        switch (nd.kind) {
            case NodeKind::Input: depth[id] = 0; break;
            case NodeKind::Const0:
            case NodeKind::Const1: cheight[id] = 1; break;
            default: {
                unsigned ar = arity_of(nd.kind);
                int32_t dmax = kUnset, dmin = 0x7fffffff;
                int32_t ch = 0;
                for (unsigned i = 0; i < ar; ++i) {
                    NodeId f = nd.fanin[i];
                    if (depth[f] == kUnset) {
                        ch = std::max(ch, cheight[f]);
                    } else {
                        dmax = std::max(dmax, depth[f]);
                        dmin = std::min(dmin, depth[f]);
                    }
                }
                if (dmax == kUnset) {
                    cheight[id] = ch + 1; // still floating
                } else {
                    if (dmax != dmin) sync = false;
                    depth[id] = dmax + 1;
                }
            }
        }
    }

    // Backward pass: floating nodes take the depth their consumers demand.
    // Conflicting or infeasible demands break synchronicity.
    std::vector<int32_t> req(n, kUnset);
    int32_t out_depth_max = 0;
    for (NodeId o : c.outputs())
        if (depth[o] != kUnset) out_depth_max = std::max(out_depth_max, depth[o]);
    for (NodeId o : c.outputs())
        if (depth[o] == kUnset)
            req[o] = std::max(out_depth_max, cheight[o]);

    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        NodeId id = *it;
        if (depth[id] != kUnset) {
            // demands on floating fanins
            const auto& nd = c.node(id);
            unsigned ar = arity_of(nd.kind);
            for (unsigned i = 0; i < ar; ++i) {
                NodeId f = nd.fanin[i];
                if (depth[f] != kUnset) continue;
                int32_t want = depth[id] - 1;
                if (req[f] == kUnset)
                    req[f] = want;
                else if (req[f] != want)
                    sync = false;
            }
            continue;
        }
        if (req[id] == kUnset) req[id] = cheight[id]; // unconstrained float
        if (req[id] < cheight[id]) { sync = false; req[id] = cheight[id]; }
        depth[id] = req[id];
        const auto& nd = c.node(id);
        unsigned ar = arity_of(nd.kind);
        for (unsigned i = 0; i < ar; ++i) {
            NodeId f = nd.fanin[i];
            if (c.node(f).kind == NodeKind::Input) continue;
            int32_t want = depth[id] - 1;
            if (req[f] == kUnset)
                req[f] = want;
            else if (req[f] != want)
                sync = false;
        }
    }

    // Outputs must share one depth.
    if (!c.outputs().empty()) {
        int32_t d0 = depth[c.outputs()[0]];
        for (NodeId o : c.outputs())
            if (depth[o] != d0) sync = false;
    }
    rep.is_synchronous = sync;
}

} // namespace

ValidationReport validate(const Circuit& c) {
    ValidationReport rep;
    const size_t n = c.num_nodes();

    for (NodeId id = 0; id < n; ++id) {
        const auto& nd = c.node(id);
        unsigned ar = arity_of(nd.kind);
        for (unsigned i = 0; i < ar; ++i) {
            NodeId f = nd.fanin[i];
            if (f == kNoNode || f >= n)
                rep.arity_errors.push_back("node " + std::to_string(id) + " (" +
                                           kind_name(nd.kind) + "): missing fanin " +
                                           std::to_string(i));
        }
    }
    std::vector<uint32_t> consumed(n, 0);
    for (NodeId id = 0; id < n; ++id) {
        const auto& nd = c.node(id);
        unsigned ar = arity_of(nd.kind);
        for (unsigned i = 0; i < ar; ++i)
            if (nd.fanin[i] < n) ++consumed[nd.fanin[i]];
    }
    std::vector<bool> seen_out(n, false);
    for (NodeId o : c.outputs()) {
        if (o >= n) {
            rep.arity_errors.push_back("output refers to nonexistent node " + std::to_string(o));
            continue;
        }
        if (c.node(o).kind == NodeKind::Input)
            rep.arity_errors.push_back("output node " + std::to_string(o) +
                                       " is an input; route it through an ID gate");
        if (consumed[o] > 0)
            rep.arity_errors.push_back("output node " + std::to_string(o) + " has outgoing edges");
        if (seen_out[o])
            rep.arity_errors.push_back("node " + std::to_string(o) + " listed as output twice");
        seen_out[o] = true;
    }
    if (!rep.arity_errors.empty()) return rep;

    std::vector<NodeId> topo;
    rep.is_acyclic = topo_sort(c, topo);
    if (!rep.is_acyclic) return rep;

    assign_depths(c, topo, rep);
    return rep;
}

void Circuit::finalize() {
    ValidationReport rep = validate(*this);
    if (!rep.arity_errors.empty())
        throw CircuitError("circuit '" + name_ + "': " + rep.arity_errors.front());
    if (!rep.is_acyclic) throw CircuitError("circuit '" + name_ + "' contains a cycle");
    if (outputs_.empty()) throw CircuitError("circuit '" + name_ + "' has no outputs");
    if (!topo_sort(*this, topo_)) throw CircuitError("unreachable");
    depth_by_node_ = std::move(rep.depth_by_node);
    depth_ = 0;
    for (NodeId o : outputs_) depth_ = std::max(depth_, depth_by_node_[o]);
    finalized_ = true;
}

BitVec Circuit::evaluate(const BitVec& input_bits) const {
    require_finalized();
    if (input_bits.size() != inputs_.size())
        throw CircuitError("evaluate: circuit '" + name_ + "' takes " +
                           std::to_string(inputs_.size()) + " input bits, got " +
                           std::to_string(input_bits.size()));
    std::vector<uint8_t> val(nodes_.size(), 0);
    for (size_t i = 0; i < inputs_.size(); ++i) val[inputs_[i]] = input_bits.get(i) ? 1 : 0;
    for (NodeId id : topo_) {
        const Node& nd = nodes_[id];
        switch (nd.kind) {
            case NodeKind::Input: break;
            case NodeKind::And: val[id] = val[nd.fanin[0]] & val[nd.fanin[1]]; break;
            case NodeKind::Or: val[id] = val[nd.fanin[0]] | val[nd.fanin[1]]; break;
            case NodeKind::Not: val[id] = val[nd.fanin[0]] ^ 1; break;
            case NodeKind::Id: val[id] = val[nd.fanin[0]]; break;
            case NodeKind::Const0: val[id] = 0; break;
            case NodeKind::Const1: val[id] = 1; break;
        }
    }
    BitVec out(outputs_.size());
    for (size_t i = 0; i < outputs_.size(); ++i) out.set(i, val[outputs_[i]]);
    return out;
}

std::vector<uint64_t> Circuit::evaluate_words(const std::vector<uint64_t>& in, unsigned w,
                                              size_t out_words) const {
    BitVec bits = pack_words(in, w);
    BitVec out = evaluate(bits);
    return unpack_words(out, w, out_words);
}

Circuit synchronize(const Circuit& c) {
    ValidationReport rep = validate(c);
    if (!rep.structurally_ok())
        throw CircuitError("synchronize: circuit '" + c.name() + "' is structurally invalid");
    if (rep.is_synchronous) {
        Circuit out = c;
        out.finalize();
        return out;
    }

    // Pin every node at its canonical forward depth (constants at minimal
    // height) and lift shallow fanins with identity chains shared per source.
    std::vector<NodeId> topo;
    topo_sort(c, topo);
    const size_t n = c.num_nodes();
    std::vector<int32_t> depth(n, 0);
    for (NodeId id : topo) {
        const auto& nd = c.node(id);
        if (nd.kind == NodeKind::Input) { depth[id] = 0; continue; }
        unsigned ar = arity_of(nd.kind);
        int32_t d = 0;
        for (unsigned i = 0; i < ar; ++i) d = std::max(d, depth[nd.fanin[i]]);
        depth[id] = d + 1;
    }

    Circuit out(c.name());
    std::vector<NodeId> remap(n, kNoNode);
    // chains[src] = successive ID nodes lifting src by 1, 2, ...
    std::vector<std::vector<NodeId>> chains(n);

    for (NodeId in_id : c.inputs()) remap[in_id] = out.add_input();

    auto lifted = [&](NodeId src, int32_t target) {
        int32_t have = depth[src];
        if (target <= have) return remap[src];
        auto& chain = chains[src];
        while (static_cast<int32_t>(chain.size()) < target - have) {
            NodeId prev = chain.empty() ? remap[src] : chain.back();
            chain.push_back(out.add_gate(NodeKind::Id, prev));
        }
        return chain[target - have - 1];
    };

    for (NodeId id : topo) {
        const auto& nd = c.node(id);
        if (nd.kind == NodeKind::Input) continue;
        unsigned ar = arity_of(nd.kind);
        NodeId fan[2] = {kNoNode, kNoNode};
        for (unsigned i = 0; i < ar; ++i) fan[i] = lifted(nd.fanin[i], depth[id] - 1);
        remap[id] = out.add_gate(nd.kind, fan[0], fan[1]);
    }

    int32_t out_depth = 0;
    for (NodeId o : c.outputs()) out_depth = std::max(out_depth, depth[o]);
    std::vector<NodeId> outs;
    outs.reserve(c.outputs().size());
    for (NodeId o : c.outputs()) outs.push_back(lifted(o, out_depth));
    out.set_outputs(std::move(outs));
    out.finalize();
    return out;
}

} // namespace pcram

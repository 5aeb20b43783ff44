#pragma once

#include "pcram/bitvec.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcram {

using NodeId = uint32_t;
constexpr NodeId kNoNode = 0xffffffff;

enum class NodeKind : uint8_t { Input, And, Or, Not, Id, Const0, Const1 };

inline unsigned arity_of(NodeKind k) {
    switch (k) {
        case NodeKind::And:
        case NodeKind::Or: return 2;
        case NodeKind::Not:
        case NodeKind::Id: return 1;
        default: return 0;
    }
}

const char* kind_name(NodeKind k);

struct CircuitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Diagnosis produced by validate(). All fields are data, never thrown.
struct ValidationReport {
    bool is_acyclic = false;
    bool is_synchronous = false;
    std::vector<std::string> arity_errors;
    /// Canonical depth per node: inputs 0, gates 1 + fanin depth.
    /// Constant-fed subgraphs take the depth their consumers require,
    /// or their minimal height when unconstrained.
    std::vector<int32_t> depth_by_node;

    bool structurally_ok() const { return is_acyclic && arity_errors.empty(); }
};

/// A boolean circuit: labeled DAG over {AND, OR, NOT, ID, CONST0, CONST1}
/// with ordered input and output nodes. Node ids are dense integers in
/// creation order. Gates added through add_gate() can only reference
/// existing nodes, so such circuits are acyclic by construction; the
/// netlist parser uses the unchecked path and relies on finalize() to
/// reject malformed graphs.
class Circuit {
  public:
    struct Node {
        NodeKind kind;
        std::array<NodeId, 2> fanin{kNoNode, kNoNode};
    };

    Circuit() = default;
    explicit Circuit(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    NodeId add_input();

    /// Adds a gate whose fanins must already exist.
    NodeId add_gate(NodeKind kind, NodeId a = kNoNode, NodeId b = kNoNode);

    /// Adds a gate without fanin checks; finalize()/validate() will verify.
    NodeId add_gate_unchecked(NodeKind kind, NodeId a = kNoNode, NodeId b = kNoNode);

    void set_outputs(std::vector<NodeId> outs) { outputs_ = std::move(outs); finalized_ = false; }

    size_t num_nodes() const { return nodes_.size(); }
    const Node& node(NodeId id) const { return nodes_[id]; }
    bool is_input(NodeId id) const { return nodes_[id].kind == NodeKind::Input; }

    const std::vector<NodeId>& inputs() const { return inputs_; }
    const std::vector<NodeId>& outputs() const { return outputs_; }
    size_t num_inputs() const { return inputs_.size(); }
    size_t num_outputs() const { return outputs_.size(); }

    /// Number of gate nodes (inputs excluded).
    size_t size() const { return nodes_.size() - inputs_.size(); }

    /// Validates structure, caches topological order and depths.
    /// Throws CircuitError if the graph is cyclic or has arity errors.
    /// Being asynchronous is not an error here.
    void finalize();

    bool finalized() const { return finalized_; }
    int32_t depth() const { require_finalized(); return depth_; }
    int32_t node_depth(NodeId id) const { require_finalized(); return depth_by_node_[id]; }
    const std::vector<NodeId>& topo_order() const { require_finalized(); return topo_; }

    /// Reference combinational evaluation in topological order.
    /// Throws CircuitError on input length mismatch.
    BitVec evaluate(const BitVec& input_bits) const;

    /// Convenience: evaluate on w-bit words.
    std::vector<uint64_t> evaluate_words(const std::vector<uint64_t>& in, unsigned w,
                                         size_t out_words) const;

  private:
    void require_finalized() const {
        if (!finalized_) throw CircuitError("circuit '" + name_ + "' not finalized");
    }

    friend ValidationReport validate(const Circuit& c);

    std::string name_;
    std::vector<Node> nodes_;
    std::vector<NodeId> inputs_;
    std::vector<NodeId> outputs_;

    bool finalized_ = false;
    std::vector<NodeId> topo_;
    std::vector<int32_t> depth_by_node_;
    int32_t depth_ = 0;
};

/// Full structural diagnosis: acyclicity, arities, depth map, synchronicity.
ValidationReport validate(const Circuit& c);

/// Returns an evaluate-equivalent synchronous circuit of equal depth,
/// inserting identity chains (shared per source node) where fanin depths
/// disagree. An already-synchronous circuit is returned unchanged.
Circuit synchronize(const Circuit& c);

} // namespace pcram

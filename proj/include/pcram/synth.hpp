#pragma once

#include "pcram/circuit.hpp"

#include <map>
#include <string>
#include <vector>

namespace pcram {

/// Incremental builder for synchronous circuits. Every gate helper lifts
/// its operands to a common depth with identity chains before wiring, so
/// the finished circuit is synchronous by construction. Lift chains are
/// shared per source node.
///
/// Words are vectors of node ids, least significant bit first.
class SyncBuilder {
  public:
    using Word = std::vector<NodeId>;

    NodeId input();
    Word input_word(unsigned w);

    /// CONST gate at depth 1, shared per value.
    NodeId constant(bool v);
    Word const_word(uint64_t value, unsigned w);

    int32_t depth_of(NodeId x) const { return depth_[x]; }
    int32_t word_depth(const Word& xs) const;

    /// Identity chain raising x to the given depth (no-op if already there).
    NodeId lift(NodeId x, int32_t to);
    Word lift_word(const Word& xs, int32_t to);

    NodeId band(NodeId a, NodeId b);
    NodeId bor(NodeId a, NodeId b);
    NodeId bnot(NodeId a);
    NodeId bid(NodeId a);
    NodeId bxor(NodeId a, NodeId b); // 5 gates, depth +3
    NodeId beq(NodeId a, NodeId b);  // xnor, 6 gates, depth +3

    /// s ? hi : lo
    NodeId mux(NodeId s, NodeId lo, NodeId hi);
    Word mux_word(NodeId s, const Word& lo, const Word& hi);

    NodeId and_tree(std::vector<NodeId> xs);
    NodeId or_tree(std::vector<NodeId> xs);

    Word word_and(const Word& a, const Word& b);
    Word word_or(const Word& a, const Word& b);
    Word word_xor(const Word& a, const Word& b);
    Word word_not(const Word& a);

    /// Kogge-Stone addition mod 2^|a|. carry_in adds a constant 1.
    Word add(const Word& a, const Word& b, bool carry_in = false);
    Word sub(const Word& a, const Word& b); // mod 2^|a|
    Word increment(const Word& a);

    NodeId eq_word(const Word& a, const Word& b);
    NodeId is_zero(const Word& a);
    NodeId lt_word(const Word& a, const Word& b); // unsigned a < b
    NodeId le_word(const Word& a, const Word& b); // unsigned a <= b

    /// Variable shift by the low log2(|a|) bits of amount; |a| must be a
    /// power of two. Shifted-in bits are zero.
    Word shl_var(const Word& a, const Word& amount);
    Word shr_var(const Word& a, const Word& amount);

    /// Copies a finalized synchronous circuit into this graph, wiring its
    /// inputs to `ins` (lifted to a common depth). Returns its outputs.
    /// Adds exactly sub.size() gates when `ins` depths already agree.
    Word splice(const Circuit& sub, const Word& ins);

    /// Marks outputs; pads them to a common depth unless told otherwise.
    void set_outputs(Word outs, bool pad_to_common = true);
    void append_outputs(const Word& outs);

    /// Finalizes and returns the circuit. The builder is left empty.
    Circuit finish(std::string name);

    size_t gate_count() const { return c_.size(); }

  private:
    NodeId mk(NodeKind k, NodeId a = kNoNode, NodeId b = kNoNode, int32_t d = 0);

    Circuit c_;
    std::vector<int32_t> depth_;
    std::vector<std::vector<NodeId>> chains_;
    std::map<bool, NodeId> const_cache_;
    Word outputs_;
    bool outputs_padded_ = false;
};

} // namespace pcram

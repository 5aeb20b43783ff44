#pragma once

#include "pcram/circuit.hpp"

#include <vector>

namespace pcram {

/// Bit-sliced circuit evaluator: runs up to 64 independent input vectors
/// through one circuit per pass using word-wide gate operations. Agrees
/// exactly with Circuit::evaluate on every lane.
class BatchEvaluator {
  public:
    explicit BatchEvaluator(const Circuit& c);

    /// outputs[j] receives the output bits for inputs[j]. Any batch size.
    void run(const std::vector<const BitVec*>& inputs, std::vector<BitVec>& outputs) const;

    BitVec run_one(const BitVec& input) const;

    size_t num_inputs() const { return n_in_; }
    size_t num_outputs() const { return n_out_; }

  private:
    void run_chunk(const std::vector<const BitVec*>& inputs, size_t first, size_t count,
                   std::vector<BitVec>& outputs) const;

    struct Op {
        NodeKind kind;
        uint32_t dst, a, b;
    };
    size_t n_in_ = 0, n_out_ = 0, n_nodes_ = 0;
    std::vector<uint32_t> input_slots_;  // node id per input position
    std::vector<uint32_t> output_slots_; // node id per output position
    std::vector<Op> ops_;                // gates in topological order
};

/// 64x64 bit-matrix transpose in place: bit c of x[r] moves to bit r of x[c].
void transpose64(uint64_t x[64]);

} // namespace pcram

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "forrlab/params.hpp"
#include "forrlab/problem.hpp"

namespace forrlab {

// Deterministic query tree over {-1,1}^M. Nodes are stored in a flat pool;
// children index into it. A node with coord < 0 is a leaf carrying label.
struct TreeNode {
    int32_t coord = -1;
    int8_t label = 1;       // used when leaf
    int32_t child_pos = -1; // branch taken when z[coord] == +1
    int32_t child_neg = -1; // branch taken when z[coord] == -1
};

struct DecisionTree {
    uint32_t arity = 0;
    std::vector<TreeNode> nodes;
    int32_t root = -1;

    static DecisionTree leaf(uint32_t arity, int8_t label);

    int8_t eval(const SignVec& z) const;
    int8_t eval_mask(uint64_t point_mask) const;  // bit i set <-> z_i = -1
    uint32_t depth() const;
    void validate() const;  // coordinate range and structural checks
};

// Pair of empirical distributions over {-1,1}^M given as dense histograms;
// the basis for exact-over-the-sample-set tree optimization. Guarded at
// M <= 12.
struct EmpiricalPair {
    uint32_t arity = 0;
    std::vector<double> p0, p1;  // each sums to ~1 over 2^M points

    static EmpiricalPair from_samples(uint32_t arity, std::span<const uint64_t> samples0,
                                      std::span<const uint64_t> samples1);
};

// Exact maximum of |E_{p0}[D] - E_{p1}[D]| over all decision trees of depth
// at most `depth`, by dynamic programming over partial assignments. This is
// the exhaustive scan: every tree in the class is dominated by the returned
// value, with equality achieved by the optimizer's tree.
double optimal_tree_gap(const EmpiricalPair& pair, uint32_t depth);

// Same optimum with the witness tree.
std::pair<double, DecisionTree> optimal_tree(const EmpiricalPair& pair, uint32_t depth);

// Greedy heuristic for sizes where the exhaustive scan is infeasible: at each
// node pick the coordinate whose split maximizes the empirical label gap.
DecisionTree greedy_tree(uint32_t arity, const std::vector<SignVec>& samples0,
                         const std::vector<SignVec>& samples1, uint32_t depth);

double empirical_tree_gap(const DecisionTree& tree, std::span<const uint64_t> samples0,
                          std::span<const uint64_t> samples1);

enum class ScanStrategy { Exhaustive, Greedy };

struct TreeScanReport {
    double max_gap = 0.0;       // |E_{sigma0} D - E_{sigma1} D| of the best tree found
    double stderr_ = 0.0;       // Monte Carlo stderr of the gap for that fixed tree
    uint64_t n_samples = 0;     // per side
    uint32_t depth = 0;
    ScanStrategy strategy = ScanStrategy::Exhaustive;
    std::string note;           // multiple-testing caveat
    DecisionTree best_tree;
};

// Scans the depth-d tree class against coupled sigma_0 / sigma_1 samples.
// Exhaustive strategy requires 2kN <= 12 and depth <= 3.
TreeScanReport tree_advantage_scan(const ForrelationParams& params, uint32_t depth,
                                   ScanStrategy strategy, uint64_t n_samples, uint64_t seed,
                                   uint64_t max_rejects = 10000);

}  // namespace forrlab

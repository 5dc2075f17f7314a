#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace skelxai {

inline constexpr int kNtuJointCount = 25;

// Kinematic tree over skeleton joints plus the normalized adjacency used by
// the graph convolutions: D^-1/2 (A + I) D^-1/2 with A the symmetric binary
// adjacency of the tree.
struct SkeletonGraph {
    int node_count = 0;
    int root = 0;
    std::vector<std::pair<int, int>> edges;  // (child, parent)
    std::vector<int> parent;                 // parent[v]; -1 at the root
    std::vector<double> adjacency;           // node_count x node_count, row-major

    double adj(int i, int j) const {
        return adjacency[static_cast<std::size_t>(i) * node_count + j];
    }
};

// Validates that `edges` forms a spanning tree rooted at `root` and builds
// the normalized adjacency. Throws ConfigError on a malformed edge set.
SkeletonGraph build_graph(int node_count, std::span<const std::pair<int, int>> edges, int root);

// The fixed 25-joint NTU kinematic tree, rooted at the spine-center joint.
SkeletonGraph build_ntu_graph();

// Joint names in NTU index order (0-based).
const std::array<const char*, kNtuJointCount>& ntu_joint_names();

}  // namespace skelxai

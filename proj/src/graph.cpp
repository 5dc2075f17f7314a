#include "skelxai/graph.hpp"

#include <cmath>
#include <queue>
#include <string>

#include "skelxai/errors.hpp"

namespace skelxai {

SkeletonGraph build_graph(int node_count, std::span<const std::pair<int, int>> edges, int root) {
    if (node_count < 1) throw ConfigError("graph needs at least one node");
    if (root < 0 || root >= node_count) throw ConfigError("graph root out of range");
    if (static_cast<int>(edges.size()) != node_count - 1)
        throw ConfigError("graph needs exactly node_count-1 edges, got " +
                          std::to_string(edges.size()));

    SkeletonGraph g;
    g.node_count = node_count;
    g.root = root;
    g.edges.assign(edges.begin(), edges.end());
    g.parent.assign(node_count, -1);

    for (auto [child, parent] : edges) {
        if (child < 0 || child >= node_count || parent < 0 || parent >= node_count)
            throw ConfigError("graph edge index out of range");
        if (child == root) throw ConfigError("graph root cannot have a parent");
        if (g.parent[child] != -1)
            throw ConfigError("joint " + std::to_string(child) + " has two parents");
        g.parent[child] = parent;
    }
    for (int v = 0; v < node_count; ++v)
        if (v != root && g.parent[v] == -1)
            throw ConfigError("joint " + std::to_string(v) + " is not connected to the tree");

    // Connectivity/acyclicity: walking parents from every node must reach the
    // root within node_count steps.
    for (int v = 0; v < node_count; ++v) {
        int cur = v;
        int steps = 0;
        while (cur != root) {
            cur = g.parent[cur];
            if (++steps > node_count) throw ConfigError("graph contains a cycle");
        }
    }

    // Normalized adjacency of A + I.
    std::vector<double> a(static_cast<std::size_t>(node_count) * node_count, 0.0);
    auto at = [&](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * node_count + j];
    };
    for (int v = 0; v < node_count; ++v) at(v, v) = 1.0;
    for (auto [child, parent] : edges) {
        at(child, parent) = 1.0;
        at(parent, child) = 1.0;
    }
    std::vector<double> inv_sqrt_deg(node_count);
    for (int v = 0; v < node_count; ++v) {
        double deg = 0.0;
        for (int u = 0; u < node_count; ++u) deg += at(v, u);
        inv_sqrt_deg[v] = 1.0 / std::sqrt(deg);
    }
    g.adjacency.assign(a.size(), 0.0);
    for (int i = 0; i < node_count; ++i)
        for (int j = 0; j < node_count; ++j)
            g.adjacency[static_cast<std::size_t>(i) * node_count + j] =
                inv_sqrt_deg[i] * at(i, j) * inv_sqrt_deg[j];
    return g;
}

namespace {

// Child -> parent pairs of the NTU tree, 0-based, rooted at joint 1
// (spine-center). Kinect v2 joint order.
constexpr std::pair<int, int> kNtuEdges[kNtuJointCount - 1] = {
    {0, 1},    // spine_base      -> spine_mid
    {20, 1},   // spine_shoulder  -> spine_mid
    {2, 20},   // neck            -> spine_shoulder
    {3, 2},    // head            -> neck
    {4, 20},   // shoulder_left   -> spine_shoulder
    {5, 4},    // elbow_left      -> shoulder_left
    {6, 5},    // wrist_left      -> elbow_left
    {7, 6},    // hand_left       -> wrist_left
    {8, 20},   // shoulder_right  -> spine_shoulder
    {9, 8},    // elbow_right     -> shoulder_right
    {10, 9},   // wrist_right     -> elbow_right
    {11, 10},  // hand_right      -> wrist_right
    {12, 0},   // hip_left        -> spine_base
    {13, 12},  // knee_left       -> hip_left
    {14, 13},  // ankle_left      -> knee_left
    {15, 14},  // foot_left       -> ankle_left
    {16, 0},   // hip_right       -> spine_base
    {17, 16},  // knee_right      -> hip_right
    {18, 17},  // ankle_right     -> knee_right
    {19, 18},  // foot_right      -> ankle_right
    {21, 7},   // handtip_left    -> hand_left
    {22, 7},   // thumb_left      -> hand_left
    {23, 11},  // handtip_right   -> hand_right
    {24, 11},  // thumb_right     -> hand_right
};

constexpr std::array<const char*, kNtuJointCount> kNtuJointNames = {
    "spine_base",     "spine_mid",     "neck",           "head",
    "shoulder_left",  "elbow_left",    "wrist_left",     "hand_left",
    "shoulder_right", "elbow_right",   "wrist_right",    "hand_right",
    "hip_left",       "knee_left",     "ankle_left",     "foot_left",
    "hip_right",      "knee_right",    "ankle_right",    "foot_right",
    "spine_shoulder", "handtip_left",  "thumb_left",     "handtip_right",
    "thumb_right",
};

}  // namespace

SkeletonGraph build_ntu_graph() {
    return build_graph(kNtuJointCount, kNtuEdges, /*root=*/1);
}

const std::array<const char*, kNtuJointCount>& ntu_joint_names() { return kNtuJointNames; }

}  // namespace skelxai

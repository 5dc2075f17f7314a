#pragma once

#include "skelxai/graph.hpp"
#include "skelxai/sequence.hpp"
#include "skelxai/tensors.hpp"

namespace skelxai {

// The three model input branches derived from raw positions. All branches
// share the T x V x 3 shape of the source sequence.
struct MultiBranchInput {
    JointFrames joint;     // positions centered on the root joint
    JointFrames velocity;  // forward temporal difference, zero on the last frame
    JointFrames bone;      // child minus parent, zero at the root

    int frames() const { return joint.frames; }
    int joints() const { return joint.joints; }
};

// Derives the joint/velocity/bone branches:
//   joint[t,v]    = positions[t,v] - positions[t,root]
//   velocity[t,v] = positions[min(t+1,T-1),v] - positions[t,v]
//   bone[t,v]     = positions[t,v] - positions[t,parent(v)]   (zero at root)
// Throws PreprocessError when the sequence joint count does not match the
// graph.
MultiBranchInput preprocess(const SkeletonSequence& seq, const SkeletonGraph& graph);

}  // namespace skelxai

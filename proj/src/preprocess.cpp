#include "skelxai/preprocess.hpp"

#include <string>

#include "skelxai/errors.hpp"

namespace skelxai {

MultiBranchInput preprocess(const SkeletonSequence& seq, const SkeletonGraph& graph) {
    seq.validate();
    const int frames = seq.frames();
    const int joints = seq.joints();
    if (joints != graph.node_count)
        throw PreprocessError("sequence has " + std::to_string(joints) +
                              " joints but graph expects " + std::to_string(graph.node_count));

    MultiBranchInput out;
    out.joint = JointFrames(frames, joints);
    out.velocity = JointFrames(frames, joints);
    out.bone = JointFrames(frames, joints);

    const auto& pos = seq.positions;
    for (int t = 0; t < frames; ++t) {
        const int tn = t + 1 < frames ? t + 1 : frames - 1;
        for (int v = 0; v < joints; ++v) {
            const int parent = graph.parent[v];
            for (int a = 0; a < 3; ++a) {
                out.joint.at(t, v, a) = pos.at(t, v, a) - pos.at(t, graph.root, a);
                out.velocity.at(t, v, a) = pos.at(tn, v, a) - pos.at(t, v, a);
                out.bone.at(t, v, a) =
                    parent < 0 ? 0.0 : pos.at(t, v, a) - pos.at(t, parent, a);
            }
        }
    }
    return out;
}

}  // namespace skelxai

#pragma once

#include <string>

#include "skelxai/tensors.hpp"

namespace skelxai {

// One skeleton recording: T frames of V joints with (x, y, z) in meters.
struct SkeletonSequence {
    std::string sample_id;
    int label = -1;  // action-class id; -1 when unknown
    JointFrames positions;

    int frames() const { return positions.frames; }
    int joints() const { return positions.joints; }

    // Throws ValidationError unless T >= 2, V >= 1 and all coordinates are
    // finite.
    void validate() const;
};

// Interchange document: {sample_id, label, frames, joints, positions}.
// Positions are a T x V x 3 nested array in meters. Round-trips exactly.
std::string sequence_to_json(const SkeletonSequence& seq);
SkeletonSequence sequence_from_json(const std::string& text);

}  // namespace skelxai

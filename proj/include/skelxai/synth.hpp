#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "skelxai/sequence.hpp"

namespace skelxai {

inline constexpr int kSynthDefaultFrames = 64;
inline constexpr double kSynthDefaultNoiseSigma = 0.005;  // meters

// One joint of a synthetic action and the unit direction it oscillates
// along.
struct PlantedMotion {
    int joint;
    std::array<double, 3> direction;
};

// A synthetic action class: a sinusoidal trajectory applied to a fixed set
// of joints on the rest pose. The moving joints are the ground-truth
// "important" joints of the class.
struct SynthAction {
    std::string name;
    std::vector<PlantedMotion> motions;
    double amplitude_m;   // peak displacement of every planted joint
    double frequency;     // oscillation cycles over the whole sequence
    double phase_step;    // phase offset (radians) between consecutive planted joints
};

// The fixed catalog of synthetic actions (currently 8 classes over the
// 25-joint NTU skeleton).
const std::vector<SynthAction>& synth_catalog();
int synth_class_count();

// Ground-truth important joints of a class. Throws ConfigError on an unknown
// class id.
std::vector<int> synth_planted_joints(int class_id);

// Standing rest pose of the 25 joints (meters, y up).
const std::array<std::array<double, 3>, 25>& synth_rest_pose();

// Deterministic sample of the given class: rest pose + planted trajectory +
// Gaussian positional noise of scale noise_sigma on every joint. Identical
// arguments produce bitwise-identical sequences.
SkeletonSequence synth_generate(int class_id, std::uint64_t seed,
                                int frames = kSynthDefaultFrames,
                                double noise_sigma = kSynthDefaultNoiseSigma);

}  // namespace skelxai

#include "skelxai/synth.hpp"

#include <cmath>

#include "skelxai/errors.hpp"
#include "skelxai/graph.hpp"
#include "skelxai/rng.hpp"

namespace skelxai {

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::array<std::array<double, 3>, 25> kRestPose = {{
    {0.00, 1.00, 0.00},   // 0  spine_base
    {0.00, 1.16, 0.00},   // 1  spine_mid
    {0.00, 1.45, 0.00},   // 2  neck
    {0.00, 1.58, 0.00},   // 3  head
    {-0.18, 1.40, 0.00},  // 4  shoulder_left
    {-0.30, 1.15, 0.00},  // 5  elbow_left
    {-0.34, 0.92, 0.00},  // 6  wrist_left
    {-0.35, 0.85, 0.02},  // 7  hand_left
    {0.18, 1.40, 0.00},   // 8  shoulder_right
    {0.30, 1.15, 0.00},   // 9  elbow_right
    {0.34, 0.92, 0.00},   // 10 wrist_right
    {0.35, 0.85, 0.02},   // 11 hand_right
    {-0.09, 0.95, 0.00},  // 12 hip_left
    {-0.10, 0.52, 0.00},  // 13 knee_left
    {-0.11, 0.08, 0.00},  // 14 ankle_left
    {-0.11, 0.02, 0.12},  // 15 foot_left
    {0.09, 0.95, 0.00},   // 16 hip_right
    {0.10, 0.52, 0.00},   // 17 knee_right
    {0.11, 0.08, 0.00},   // 18 ankle_right
    {0.11, 0.02, 0.12},   // 19 foot_right
    {0.00, 1.32, 0.00},   // 20 spine_shoulder
    {-0.36, 0.78, 0.03},  // 21 handtip_left
    {-0.32, 0.82, 0.05},  // 22 thumb_left
    {0.36, 0.78, 0.03},   // 23 handtip_right
    {0.32, 0.82, 0.05},   // 24 thumb_right
}};

constexpr std::array<double, 3> kUp = {0.0, 1.0, 0.0};
constexpr std::array<double, 3> kForward = {0.0, 0.0, 1.0};
constexpr std::array<double, 3> kSide = {1.0, 0.0, 0.0};
constexpr std::array<double, 3> kSideNeg = {-1.0, 0.0, 0.0};

std::vector<SynthAction> make_catalog() {
    std::vector<SynthAction> catalog;
    catalog.push_back({"raise_right_arm",
                       {{9, kUp}, {10, kUp}, {11, kUp}, {23, kUp}, {24, kUp}},
                       0.25, 1.0, 0.30});
    catalog.push_back({"raise_left_arm",
                       {{5, kUp}, {6, kUp}, {7, kUp}, {21, kUp}, {22, kUp}},
                       0.25, 1.0, 0.30});
    catalog.push_back({"kick_right_leg",
                       {{17, kForward}, {18, kForward}, {19, kForward}},
                       0.22, 1.0, 0.50});
    catalog.push_back({"kick_left_leg",
                       {{13, kForward}, {14, kForward}, {15, kForward}},
                       0.22, 1.0, 0.50});
    catalog.push_back({"nod_head", {{2, kForward}, {3, kForward}}, 0.12, 2.0, 0.30});
    catalog.push_back({"wave_right_hand",
                       {{10, kSide}, {11, kSide}, {23, kSide}, {24, kSide}},
                       0.18, 3.0, 0.25});
    catalog.push_back({"clap_hands",
                       {{6, kSide}, {7, kSide}, {21, kSide},
                        {10, kSideNeg}, {11, kSideNeg}, {23, kSideNeg}},
                       0.20, 2.0, 0.0});
    catalog.push_back({"shrug_shoulders", {{4, kUp}, {8, kUp}}, 0.10, 2.0, 0.0});
    return catalog;
}

}  // namespace

const std::vector<SynthAction>& synth_catalog() {
    static const std::vector<SynthAction> catalog = make_catalog();
    return catalog;
}

int synth_class_count() { return static_cast<int>(synth_catalog().size()); }

std::vector<int> synth_planted_joints(int class_id) {
    if (class_id < 0 || class_id >= synth_class_count())
        throw ConfigError("unknown synthetic class id " + std::to_string(class_id));
    std::vector<int> joints;
    for (const auto& m : synth_catalog()[class_id].motions) joints.push_back(m.joint);
    return joints;
}

const std::array<std::array<double, 3>, 25>& synth_rest_pose() { return kRestPose; }

SkeletonSequence synth_generate(int class_id, std::uint64_t seed, int frames,
                                double noise_sigma) {
    if (class_id < 0 || class_id >= synth_class_count())
        throw ConfigError("unknown synthetic class id " + std::to_string(class_id));
    if (frames < 2) throw ConfigError("synthetic sequences need at least 2 frames");
    if (noise_sigma < 0.0) throw ConfigError("noise_sigma must be >= 0");

    const SynthAction& action = synth_catalog()[class_id];

    SkeletonSequence seq;
    seq.sample_id = "synth_c" + std::to_string(class_id) + "_s" + std::to_string(seed);
    seq.label = class_id;
    seq.positions = JointFrames(frames, kNtuJointCount);

    for (int t = 0; t < frames; ++t)
        for (int v = 0; v < kNtuJointCount; ++v)
            for (int a = 0; a < 3; ++a) seq.positions.at(t, v, a) = kRestPose[v][a];

    for (std::size_t m = 0; m < action.motions.size(); ++m) {
        const auto& motion = action.motions[m];
        const double phase = action.phase_step * static_cast<double>(m);
        for (int t = 0; t < frames; ++t) {
            const double s = action.amplitude_m *
                             std::sin(2.0 * kPi * action.frequency * t / frames + phase);
            for (int a = 0; a < 3; ++a)
                seq.positions.at(t, motion.joint, a) += s * motion.direction[a];
        }
    }

    if (noise_sigma > 0.0) {
        // Counter-keyed noise: one normal per (t, v, axis), so the field is
        // independent of generation order.
        const std::uint64_t base = rng::derive(seed, {0x53594eULL, static_cast<std::uint64_t>(class_id)});
        for (int t = 0; t < frames; ++t)
            for (int v = 0; v < kNtuJointCount; ++v)
                for (int a = 0; a < 3; ++a) {
                    const std::uint64_t key =
                        rng::derive(base, {static_cast<std::uint64_t>(t),
                                           static_cast<std::uint64_t>(v),
                                           static_cast<std::uint64_t>(a)});
                    seq.positions.at(t, v, a) += noise_sigma * rng::gaussian_pair(key)[0];
                }
    }

    return seq;
}

}  // namespace skelxai

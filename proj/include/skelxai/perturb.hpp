#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "skelxai/sequence.hpp"

namespace skelxai {

// Seeded spherical perturbation of a set of joints. `samples` is the number
// of independent draws the neighborhood consists of; each draw is addressed
// by a draw index in [0, samples).
struct PerturbationSpec {
    double radius_m = 0.0;
    std::vector<int> targets;  // joint indices
    std::uint64_t seed = 0;
    int samples = 1;

    // Throws ValidationError/TargetError when a field is out of range.
    void validate(int joint_count) const;
};

// Spherical direction and the Cartesian displacement it converts to:
//   dx = r sin(phi) cos(theta), dy = r sin(phi) sin(theta), dz = r cos(phi)
struct JointOffset {
    double theta = 0.0;  // azimuthal angle, [0, 2*pi)
    double phi = 0.0;    // polar angle, [0, pi)
    double dx = 0.0, dy = 0.0, dz = 0.0;
};

// One offset per target joint. The two angles come from a Gaussian stream
// keyed by (seed, draw_index, joint): theta = z1 mod 2*pi, phi = |z2| mod pi.
// Values depend only on the key, never on iteration order.
std::map<int, JointOffset> draw_offsets(const PerturbationSpec& spec, int draw_index);

// Adds the draw's offset to every frame of each target joint. Non-target
// joints are bitwise unchanged; label and metadata are preserved.
SkeletonSequence perturb(const SkeletonSequence& seq, const PerturbationSpec& spec,
                         int draw_index);

}  // namespace skelxai

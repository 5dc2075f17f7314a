#include "skelxai/perturb.hpp"

#include <cmath>
#include <string>

#include "skelxai/errors.hpp"
#include "skelxai/rng.hpp"

namespace skelxai {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kOffsetTag = 0x504552ULL;

// Mathematical modulus into [0, m).
double positive_mod(double x, double m) {
    double r = std::fmod(x, m);
    return r < 0.0 ? r + m : r;
}

}  // namespace

void PerturbationSpec::validate(int joint_count) const {
    if (!(radius_m >= 0.0)) throw ValidationError("perturbation radius must be >= 0");
    if (samples < 1) throw ValidationError("perturbation draw count must be >= 1");
    for (int v : targets)
        if (v < 0 || v >= joint_count)
            throw TargetError("perturbation target joint " + std::to_string(v) +
                              " out of range [0, " + std::to_string(joint_count) + ")");
}

std::map<int, JointOffset> draw_offsets(const PerturbationSpec& spec, int draw_index) {
    std::map<int, JointOffset> offsets;
    for (int joint : spec.targets) {
        const std::uint64_t key =
            rng::derive(spec.seed, {kOffsetTag, static_cast<std::uint64_t>(draw_index),
                                    static_cast<std::uint64_t>(joint)});
        const auto z = rng::gaussian_pair(key);
        JointOffset off;
        off.theta = positive_mod(z[0], 2.0 * kPi);
        off.phi = positive_mod(std::fabs(z[1]), kPi);
        off.dx = spec.radius_m * std::sin(off.phi) * std::cos(off.theta);
        off.dy = spec.radius_m * std::sin(off.phi) * std::sin(off.theta);
        off.dz = spec.radius_m * std::cos(off.phi);
        offsets.emplace(joint, off);
    }
    return offsets;
}

SkeletonSequence perturb(const SkeletonSequence& seq, const PerturbationSpec& spec,
                         int draw_index) {
    spec.validate(seq.joints());
    SkeletonSequence out = seq;
    const auto offsets = draw_offsets(spec, draw_index);
    for (const auto& [joint, off] : offsets) {
        for (int t = 0; t < out.frames(); ++t) {
            out.positions.at(t, joint, 0) += off.dx;
            out.positions.at(t, joint, 1) += off.dy;
            out.positions.at(t, joint, 2) += off.dz;
        }
    }
    return out;
}

}  // namespace skelxai

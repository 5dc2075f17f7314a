#include <doctest.h>

#include <cmath>

#include "skelxai/errors.hpp"
#include "skelxai/perturb.hpp"
#include "skelxai/synth.hpp"

using namespace skelxai;

namespace {

constexpr double kPi = 3.14159265358979323846;

PerturbationSpec all_joints_spec(double radius_m, std::uint64_t seed, int samples = 1) {
    PerturbationSpec spec;
    spec.radius_m = radius_m;
    spec.targets.resize(25);
    for (int v = 0; v < 25; ++v) spec.targets[v] = v;
    spec.seed = seed;
    spec.samples = samples;
    return spec;
}

}  // namespace

TEST_CASE("zero radius gives zero offsets") {
    const auto offsets = draw_offsets(all_joints_spec(0.0, 3), 0);
    for (const auto& [joint, off] : offsets) {
        CHECK(off.dx == 0.0);
        CHECK(off.dy == 0.0);
        CHECK(off.dz == 0.0);
    }
}

TEST_CASE("offsets are deterministic per (spec, draw)") {
    const PerturbationSpec spec = all_joints_spec(0.05, 99, 4);
    const auto a = draw_offsets(spec, 2);
    const auto b = draw_offsets(spec, 2);
    REQUIRE(a.size() == b.size());
    for (const auto& [joint, off] : a) {
        CHECK(off.dx == b.at(joint).dx);
        CHECK(off.dy == b.at(joint).dy);
        CHECK(off.dz == b.at(joint).dz);
    }
    // Different draw index: different but still reproducible offsets.
    const auto c = draw_offsets(spec, 3);
    const auto c2 = draw_offsets(spec, 3);
    bool any_diff = false;
    for (const auto& [joint, off] : c) {
        any_diff = any_diff || off.dx != a.at(joint).dx;
        CHECK(off.dx == c2.at(joint).dx);
    }
    CHECK(any_diff);
}

TEST_CASE("every offset norm equals the radius") {
    const double radius = 0.025;
    const auto offsets = draw_offsets(all_joints_spec(radius, 7), 0);
    for (const auto& [joint, off] : offsets) {
        const double norm = std::sqrt(off.dx * off.dx + off.dy * off.dy + off.dz * off.dz);
        CHECK(std::fabs(norm - radius) <= 1e-12 * radius);
    }
}

TEST_CASE("angles stay in their spherical ranges and convert exactly") {
    const double radius = 0.4;
    for (int draw = 0; draw < 8; ++draw) {
        const auto offsets = draw_offsets(all_joints_spec(radius, 1234), draw);
        for (const auto& [joint, off] : offsets) {
            CHECK(off.theta >= 0.0);
            CHECK(off.theta < 2.0 * kPi);
            CHECK(off.phi >= 0.0);
            CHECK(off.phi < kPi);
            CHECK(off.dx == radius * std::sin(off.phi) * std::cos(off.theta));
            CHECK(off.dy == radius * std::sin(off.phi) * std::sin(off.theta));
            CHECK(off.dz == radius * std::cos(off.phi));
        }
    }
}

TEST_CASE("empty target set leaves the sequence identical") {
    const SkeletonSequence seq = synth_generate(0, 1);
    PerturbationSpec spec;
    spec.radius_m = 0.1;
    spec.seed = 5;
    const SkeletonSequence out = perturb(seq, spec, 0);
    CHECK(out.positions.values == seq.positions.values);
    CHECK(out.sample_id == seq.sample_id);
    CHECK(out.label == seq.label);
}

TEST_CASE("perturbation moves targets by the radius and nothing else") {
    const SkeletonSequence seq = synth_generate(2, 8);
    PerturbationSpec spec;
    spec.radius_m = 0.025;
    spec.targets = {3, 11, 19};
    spec.seed = 21;
    spec.samples = 2;
    const SkeletonSequence out = perturb(seq, spec, 1);
    const auto offsets = draw_offsets(spec, 1);

    for (int t = 0; t < seq.frames(); ++t)
        for (int v = 0; v < seq.joints(); ++v) {
            if (offsets.count(v)) {
                const JointOffset& off = offsets.at(v);
                // The same offset is applied in every frame.
                CHECK(out.positions.at(t, v, 0) == seq.positions.at(t, v, 0) + off.dx);
                CHECK(out.positions.at(t, v, 1) == seq.positions.at(t, v, 1) + off.dy);
                CHECK(out.positions.at(t, v, 2) == seq.positions.at(t, v, 2) + off.dz);
                double disp_sq = 0.0;
                for (int a = 0; a < 3; ++a) {
                    const double d = out.positions.at(t, v, a) - seq.positions.at(t, v, a);
                    disp_sq += d * d;
                }
                CHECK(std::fabs(std::sqrt(disp_sq) - spec.radius_m) <=
                      1e-9 * spec.radius_m);
            } else {
                for (int a = 0; a < 3; ++a)
                    CHECK(out.positions.at(t, v, a) == seq.positions.at(t, v, a));
            }
        }
}

TEST_CASE("perturbed output is reproducible") {
    const SkeletonSequence seq = synth_generate(1, 3);
    const PerturbationSpec spec = all_joints_spec(0.8, 77, 3);
    const SkeletonSequence a = perturb(seq, spec, 2);
    const SkeletonSequence b = perturb(seq, spec, 2);
    CHECK(a.positions.values == b.positions.values);
}

TEST_CASE("target out of range raises TargetError") {
    const SkeletonSequence seq = synth_generate(0, 1);
    PerturbationSpec spec;
    spec.radius_m = 0.01;
    spec.targets = {25};
    CHECK_THROWS_AS(perturb(seq, spec, 0), TargetError);
}

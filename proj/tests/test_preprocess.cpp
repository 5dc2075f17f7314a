#include <doctest.h>

#include <vector>

#include "skelxai/errors.hpp"
#include "skelxai/preprocess.hpp"
#include "skelxai/rng.hpp"
#include "skelxai/synth.hpp"

using namespace skelxai;

namespace {

SkeletonGraph chain3() {
    const std::vector<std::pair<int, int>> edges = {{1, 0}, {2, 1}};
    return build_graph(3, edges, 0);
}

}  // namespace

TEST_CASE("bone vectors on a hand-computed chain fixture") {
    const SkeletonGraph graph = chain3();
    SkeletonSequence seq;
    seq.sample_id = "chain";
    seq.positions = JointFrames(2, 3);
    // frame 0: (0,0,0), (1,0,0), (1,2,0)
    seq.positions.at(0, 1, 0) = 1.0;
    seq.positions.at(0, 2, 0) = 1.0;
    seq.positions.at(0, 2, 1) = 2.0;
    // frame 1: (0,0,1), (2,0,1), (3,1,1)
    seq.positions.at(1, 0, 2) = 1.0;
    seq.positions.at(1, 1, 0) = 2.0;
    seq.positions.at(1, 1, 2) = 1.0;
    seq.positions.at(1, 2, 0) = 3.0;
    seq.positions.at(1, 2, 1) = 1.0;
    seq.positions.at(1, 2, 2) = 1.0;

    const MultiBranchInput input = preprocess(seq, graph);

    // bones: child minus parent, zero at root
    CHECK(input.bone.at(0, 0, 0) == 0.0);
    CHECK(input.bone.at(0, 1, 0) == 1.0);
    CHECK(input.bone.at(0, 2, 0) == 0.0);
    CHECK(input.bone.at(0, 2, 1) == 2.0);
    CHECK(input.bone.at(1, 1, 0) == 2.0);
    CHECK(input.bone.at(1, 1, 2) == 0.0);
    CHECK(input.bone.at(1, 2, 0) == 1.0);
    CHECK(input.bone.at(1, 2, 1) == 1.0);
    CHECK(input.bone.at(1, 2, 2) == 0.0);

    // joint branch: centered on the root
    CHECK(input.joint.at(1, 1, 0) == 2.0);
    CHECK(input.joint.at(1, 1, 2) == 0.0);
    CHECK(input.joint.at(1, 2, 0) == 3.0);

    // velocity: frame 1 minus frame 0, zero on the last frame
    CHECK(input.velocity.at(0, 0, 2) == 1.0);
    CHECK(input.velocity.at(0, 1, 0) == 1.0);
    CHECK(input.velocity.at(0, 2, 0) == 2.0);
    CHECK(input.velocity.at(0, 2, 1) == -1.0);
    CHECK(input.velocity.at(1, 0, 0) == 0.0);
    CHECK(input.velocity.at(1, 2, 2) == 0.0);
}

TEST_CASE("frame-constant sequences have a zero velocity branch") {
    const SkeletonGraph graph = build_ntu_graph();
    SkeletonSequence seq;
    seq.sample_id = "static";
    seq.positions = JointFrames(5, 25);
    rng::Stream stream(11);
    for (int v = 0; v < 25; ++v)
        for (int a = 0; a < 3; ++a) {
            const double value = stream.next_gaussian();
            for (int t = 0; t < 5; ++t) seq.positions.at(t, v, a) = value;
        }
    const MultiBranchInput input = preprocess(seq, graph);
    for (double x : input.velocity.values) CHECK(x == 0.0);
}

TEST_CASE("properties hold on random sequences") {
    const SkeletonGraph graph = build_ntu_graph();
    for (int rep = 0; rep < 20; ++rep) {
        SkeletonSequence seq;
        seq.sample_id = "rand";
        seq.positions = JointFrames(6, 25);
        rng::Stream stream(1000 + rep);
        for (double& x : seq.positions.values) x = stream.next_gaussian();

        const MultiBranchInput input = preprocess(seq, graph);

        // shape-preserving
        CHECK(input.joint.same_shape(seq.positions));
        CHECK(input.velocity.same_shape(seq.positions));
        CHECK(input.bone.same_shape(seq.positions));

        for (int t = 0; t < 6; ++t)
            for (int a = 0; a < 3; ++a) {
                // bone at the root is always zero
                CHECK(input.bone.at(t, graph.root, a) == 0.0);
                // joint branch at the root is always zero
                CHECK(input.joint.at(t, graph.root, a) == 0.0);
                // velocity of the last frame is zero
                CHECK(input.velocity.at(5, 0, a) == 0.0);
            }

        // deterministic
        const MultiBranchInput again = preprocess(seq, graph);
        CHECK(again.joint.values == input.joint.values);
        CHECK(again.velocity.values == input.velocity.values);
        CHECK(again.bone.values == input.bone.values);
    }
}

TEST_CASE("joint-count mismatch raises PreprocessError") {
    const SkeletonGraph graph = chain3();
    SkeletonSequence seq;
    seq.sample_id = "bad";
    seq.positions = JointFrames(2, 4);
    CHECK_THROWS_AS(preprocess(seq, graph), PreprocessError);
}

TEST_CASE("invalid sequences are rejected before preprocessing") {
    const SkeletonGraph graph = build_ntu_graph();

    SkeletonSequence one_frame;
    one_frame.sample_id = "one";
    one_frame.positions = JointFrames(1, 25);
    CHECK_THROWS_AS(preprocess(one_frame, graph), ValidationError);

    SkeletonSequence with_nan;
    with_nan.sample_id = "nan";
    with_nan.positions = JointFrames(3, 25);
    with_nan.positions.at(1, 3, 2) = std::nan("");
    CHECK_THROWS_AS(preprocess(with_nan, graph), ValidationError);
}

#include <doctest.h>

#include <string>

#include "skelxai/errors.hpp"
#include "skelxai/ntu_parser.hpp"
#include "skelxai/rng.hpp"

using namespace skelxai;

namespace {

// Hand-built two-frame file with recognizable coordinates.
std::string two_frame_fixture() {
    std::string text = "2\n";
    for (int t = 0; t < 2; ++t) {
        text += "1\n";
        text += "72057594037931101 0 1 1 1 1 0 0.1 -0.2 2\n";
        text += "25\n";
        for (int v = 0; v < 25; ++v) {
            text += std::to_string(t) + "." + std::to_string(v) + " ";
            text += std::to_string(t + v) + " ";
            text += "-0.5 100 200 300 400 1 0 0 0 2\n";
        }
    }
    return text;
}

}  // namespace

TEST_CASE("parses a two-frame file with known coordinates") {
    const SkeletonSequence seq =
        parse_ntu_skeleton(two_frame_fixture(), "S001C001P001R001A012.skeleton");
    CHECK(seq.frames() == 2);
    CHECK(seq.joints() == 25);
    CHECK(seq.label == 11);
    CHECK(seq.sample_id == "S001C001P001R001A012");
    for (int t = 0; t < 2; ++t)
        for (int v = 0; v < 25; ++v) {
            CHECK(seq.positions.at(t, v, 0) ==
                  std::stod(std::to_string(t) + "." + std::to_string(v)));
            CHECK(seq.positions.at(t, v, 1) == static_cast<double>(t + v));
            CHECK(seq.positions.at(t, v, 2) == -0.5);
        }
}

TEST_CASE("single-frame file is rejected by the sequence invariants") {
    std::string text = "1\n1\n0 0 0 0 0 0 0 0 0 2\n25\n";
    for (int v = 0; v < 25; ++v) text += "0.0 0.0 0.0 0 0 0 0 0 0 0 0 2\n";
    CHECK_THROWS_AS(parse_ntu_skeleton(text), ValidationError);
}

TEST_CASE("truncated file names the offending line") {
    std::string text = two_frame_fixture();
    // Cut inside the second frame's joint list.
    text.resize(text.size() / 2);
    try {
        parse_ntu_skeleton(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("malformed header is a ParseError with the line number") {
    CHECK_THROWS_AS(parse_ntu_skeleton("banana\n"), ParseError);
    CHECK_THROWS_AS(parse_ntu_skeleton(""), ParseError);
    try {
        parse_ntu_skeleton("banana\n");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
}

TEST_CASE("unsupported joint count") {
    std::string text = "2\n";
    for (int t = 0; t < 2; ++t) {
        text += "1\n0 0 0 0 0 0 0 0 0 2\n24\n";
        for (int v = 0; v < 24; ++v) text += "0 0 0\n";
    }
    CHECK_THROWS_AS(parse_ntu_skeleton(text), UnsupportedSkeleton);
}

TEST_CASE("zero bodies in every frame") {
    CHECK_THROWS_AS(parse_ntu_skeleton("2\n0\n0\n"), EmptySample);
}

TEST_CASE("frames without a body repeat the nearest tracked frame") {
    std::string text = "3\n";
    // frame 0: one body at x = 7
    text += "1\n0 0 0 0 0 0 0 0 0 2\n25\n";
    for (int v = 0; v < 25; ++v) text += "7 1 2 0 0 0 0 0 0 0 0 2\n";
    // frame 1: no body
    text += "0\n";
    // frame 2: one body at x = 9
    text += "1\n0 0 0 0 0 0 0 0 0 2\n25\n";
    for (int v = 0; v < 25; ++v) text += "9 1 2 0 0 0 0 0 0 0 0 2\n";

    const SkeletonSequence seq = parse_ntu_skeleton(text);
    CHECK(seq.positions.at(0, 0, 0) == 7.0);
    CHECK(seq.positions.at(1, 0, 0) == 7.0);
    CHECK(seq.positions.at(2, 0, 0) == 9.0);
}

TEST_CASE("multi-body frames keep the first body") {
    std::string text = "2\n";
    for (int t = 0; t < 2; ++t) {
        text += "2\n";
        text += "101 0 0 0 0 0 0 0 0 2\n25\n";
        for (int v = 0; v < 25; ++v) text += "1 1 1 0 0 0 0 0 0 0 0 2\n";
        text += "102 0 0 0 0 0 0 0 0 2\n25\n";
        for (int v = 0; v < 25; ++v) text += "2 2 2 0 0 0 0 0 0 0 0 2\n";
    }
    const SkeletonSequence seq = parse_ntu_skeleton(text);
    CHECK(seq.positions.at(0, 0, 0) == 1.0);
    CHECK(seq.positions.at(1, 24, 2) == 1.0);
}

TEST_CASE("writer round-trips coordinates exactly") {
    SkeletonSequence seq;
    seq.sample_id = "fixture";
    seq.label = 3;
    seq.positions = JointFrames(2, 25);
    rng::Stream stream(31);
    for (double& x : seq.positions.values) x = stream.next_gaussian() * 1.3;

    const std::string text = format_ntu_skeleton(seq);
    const SkeletonSequence back = parse_ntu_skeleton(text, "roundtripA004.skeleton");
    REQUIRE(back.frames() == seq.frames());
    REQUIRE(back.joints() == seq.joints());
    CHECK(back.label == 3);
    for (std::size_t i = 0; i < seq.positions.values.size(); ++i)
        CHECK(back.positions.values[i] == seq.positions.values[i]);
}

TEST_CASE("label extraction from filenames") {
    CHECK(label_from_ntu_filename("S001C002P003R002A060.skeleton") == 59);
    CHECK(label_from_ntu_filename("A001.skeleton") == 0);
    CHECK(label_from_ntu_filename("sample.skeleton") == -1);
    CHECK(label_from_ntu_filename("") == -1);
}

TEST_CASE("interchange JSON round-trips exactly") {
    SkeletonSequence seq;
    seq.sample_id = "json-roundtrip";
    seq.label = 5;
    seq.positions = JointFrames(3, 4);
    rng::Stream stream(77);
    for (double& x : seq.positions.values) x = stream.next_gaussian();

    const SkeletonSequence back = sequence_from_json(sequence_to_json(seq));
    CHECK(back.sample_id == seq.sample_id);
    CHECK(back.label == seq.label);
    REQUIRE(back.positions.values.size() == seq.positions.values.size());
    for (std::size_t i = 0; i < seq.positions.values.size(); ++i)
        CHECK(back.positions.values[i] == seq.positions.values[i]);
}

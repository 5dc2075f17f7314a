#pragma once

#include <string>
#include <string_view>

#include "skelxai/sequence.hpp"

namespace skelxai {

// Parses the NTU `.skeleton` text layout:
//
//   line 1: frame count
//   per frame: body count, then per body an info line, the joint count, and
//   one line per joint whose first three fields are x y z (meters).
//
// The positions of the first body of each frame are kept; frames without a
// tracked body repeat the nearest earlier tracked frame (or the first tracked
// frame for a leading gap). The label is taken from the `Axxx` filename
// suffix (0-based) when a filename is supplied.
//
// Errors: ParseError (malformed/truncated input, with line number),
// UnsupportedSkeleton (joint count != 25), EmptySample (no body in any
// frame), ValidationError (parsed sequence violates its invariants, e.g. a
// single-frame file).
SkeletonSequence parse_ntu_skeleton(std::string_view text, std::string_view filename = {});

// Writes a single-body `.skeleton` document for `seq`. Coordinates are
// printed with 17 significant digits so parsing the output reproduces the
// doubles exactly.
std::string format_ntu_skeleton(const SkeletonSequence& seq);

// 0-based action label from an NTU-style filename (`...A012.skeleton` -> 11),
// or -1 when the pattern is absent.
int label_from_ntu_filename(std::string_view filename);

}  // namespace skelxai

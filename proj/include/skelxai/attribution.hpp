#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skelxai/model.hpp"
#include "skelxai/tensors.hpp"

namespace skelxai {

enum class Method { CAM, GradCAM, Random };

const char* method_name(Method m);
Method method_from_string(std::string_view name);  // throws ConfigError

// Per-frame-per-joint scores, per-joint averages, the min-max normalized
// map and the joint ranking (descending score, ties broken by ascending
// joint index). `degenerate` marks samples whose per-joint scores were
// constant; their normalized map is all-zeros.
struct Attribution {
    Method method = Method::CAM;
    ScoreMap raw;                    // T' x V
    std::vector<double> per_joint;   // V, mean of raw across frames
    std::vector<double> normalized;  // V, in [0, 1]
    std::vector<int> ranking;        // permutation of 0..V-1
    bool degenerate = false;
};

// Min-max scaling to [0, 1]. A constant input maps to all-zeros and sets
// *degenerate.
std::vector<double> minmax_normalize(std::span<const double> values,
                                     bool* degenerate = nullptr);

// Indices sorted by value descending; equal values keep ascending index
// order.
std::vector<int> rank_descending(std::span<const double> values);

// Weighted sum of the final feature maps with the classifier row of
// class_id. Throws AttrError on an out-of-range class.
Attribution cam(const ForwardTrace& trace, const ModelParams& params, int class_id);

// Channel weights are the mean gradient of the class logit w.r.t. each
// feature map. No rectification is applied to the map by default; `rectify`
// clamps negative scores to zero before averaging.
Attribution gradcam(const ForwardTrace& trace, const ModelParams& params, int class_id,
                    bool rectify = false);

// Uniform[0,1) per-joint scores from the seed, broadcast across `frames`
// rows of the raw map.
Attribution random_attribution(int joints, std::uint64_t seed, int frames = 1);

// First k joints of the ranking and the complement, in ranking order.
// Throws RangeError unless 0 <= k <= V.
std::pair<std::vector<int>, std::vector<int>> top_k(const Attribution& attr, int k);

// Export document: {sample_id, method, class_id, per_joint, ranking}.
std::string attribution_to_json(const Attribution& attr, std::string_view sample_id,
                                int class_id);

}  // namespace skelxai

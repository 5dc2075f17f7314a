#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace skelxai {

// Dense T x V x 3 array of per-frame per-joint coordinates (meters).
struct JointFrames {
    int frames = 0;
    int joints = 0;
    std::vector<double> values;  // ((t * joints) + v) * 3 + axis

    JointFrames() = default;
    JointFrames(int t, int v)
        : frames(t), joints(v), values(static_cast<std::size_t>(t) * v * 3, 0.0) {}

    double& at(int t, int v, int axis) {
        return values[(static_cast<std::size_t>(t) * joints + v) * 3 + axis];
    }
    double at(int t, int v, int axis) const {
        return values[(static_cast<std::size_t>(t) * joints + v) * 3 + axis];
    }

    bool same_shape(const JointFrames& other) const {
        return frames == other.frames && joints == other.joints;
    }

    bool finite() const {
        for (double x : values)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

// Dense C x T x V feature array (channel-major).
struct FeatureMap {
    int channels = 0;
    int frames = 0;
    int joints = 0;
    std::vector<double> values;  // ((c * frames) + t) * joints + v

    FeatureMap() = default;
    FeatureMap(int c, int t, int v)
        : channels(c), frames(t), joints(v),
          values(static_cast<std::size_t>(c) * t * v, 0.0) {}

    double& at(int c, int t, int v) {
        return values[(static_cast<std::size_t>(c) * frames + t) * joints + v];
    }
    double at(int c, int t, int v) const {
        return values[(static_cast<std::size_t>(c) * frames + t) * joints + v];
    }
};

// Dense T x V score array used by attribution maps.
struct ScoreMap {
    int frames = 0;
    int joints = 0;
    std::vector<double> values;  // t * joints + v

    ScoreMap() = default;
    ScoreMap(int t, int v)
        : frames(t), joints(v), values(static_cast<std::size_t>(t) * v, 0.0) {}

    double& at(int t, int v) { return values[static_cast<std::size_t>(t) * joints + v]; }
    double at(int t, int v) const { return values[static_cast<std::size_t>(t) * joints + v]; }
};

}  // namespace skelxai

#include "skelxai/sequence.hpp"

#include <cmath>
#include <string>

#include <json.hpp>

#include "skelxai/errors.hpp"

namespace skelxai {

void SkeletonSequence::validate() const {
    if (positions.joints < 1)
        throw ValidationError("sequence '" + sample_id + "': joint count must be >= 1");
    if (positions.frames < 2)
        throw ValidationError("sequence '" + sample_id + "': frame count must be >= 2, got " +
                              std::to_string(positions.frames));
    if (static_cast<std::size_t>(positions.frames) * positions.joints * 3 !=
        positions.values.size())
        throw ValidationError("sequence '" + sample_id + "': position buffer size mismatch");
    if (!positions.finite())
        throw ValidationError("sequence '" + sample_id + "': positions contain NaN/Inf");
}

std::string sequence_to_json(const SkeletonSequence& seq) {
    nlohmann::ordered_json doc;
    doc["sample_id"] = seq.sample_id;
    doc["label"] = seq.label;
    doc["frames"] = seq.frames();
    doc["joints"] = seq.joints();
    auto frames = nlohmann::ordered_json::array();
    for (int t = 0; t < seq.frames(); ++t) {
        auto row = nlohmann::ordered_json::array();
        for (int v = 0; v < seq.joints(); ++v)
            row.push_back({seq.positions.at(t, v, 0), seq.positions.at(t, v, 1),
                           seq.positions.at(t, v, 2)});
        frames.push_back(std::move(row));
    }
    doc["positions"] = std::move(frames);
    return doc.dump();
}

SkeletonSequence sequence_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("sample JSON: ") + e.what());
    }
    try {
        SkeletonSequence seq;
        seq.sample_id = doc.at("sample_id").get<std::string>();
        seq.label = doc.at("label").get<int>();
        const int frames = doc.at("frames").get<int>();
        const int joints = doc.at("joints").get<int>();
        const auto& pos = doc.at("positions");
        if (static_cast<int>(pos.size()) != frames)
            throw ParseError("sample JSON: positions frame count does not match 'frames'");
        seq.positions = JointFrames(frames, joints);
        for (int t = 0; t < frames; ++t) {
            const auto& row = pos.at(t);
            if (static_cast<int>(row.size()) != joints)
                throw ParseError("sample JSON: frame " + std::to_string(t) +
                                 " joint count does not match 'joints'");
            for (int v = 0; v < joints; ++v)
                for (int a = 0; a < 3; ++a)
                    seq.positions.at(t, v, a) = row.at(v).at(a).get<double>();
        }
        return seq;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("sample JSON: ") + e.what());
    }
}

}  // namespace skelxai

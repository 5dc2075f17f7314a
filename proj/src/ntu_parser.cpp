#include "skelxai/ntu_parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "skelxai/errors.hpp"
#include "skelxai/graph.hpp"

namespace skelxai {

namespace {

// Line-oriented cursor that remembers the current line number for error
// messages.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string_view& line) {
        if (pos_ >= text_.size()) return false;
        std::size_t end = text_.find('\n', pos_);
        if (end == std::string_view::npos) end = text_.size();
        line = text_.substr(pos_, end - pos_);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos_ = end + 1;
        ++line_number_;
        return true;
    }

    int line_number() const { return line_number_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_number_ = 0;
};

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

int parse_count(const LineReader& reader, std::string_view line, const char* what) {
    auto fields = split_fields(line);
    int value = 0;
    if (fields.empty())
        throw ParseError("line " + std::to_string(reader.line_number()) + ": empty " +
                         std::string(what) + " line");
    auto f = fields[0];
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
    if (ec != std::errc{} || ptr != f.data() + f.size() || value < 0)
        throw ParseError("line " + std::to_string(reader.line_number()) + ": expected " +
                         std::string(what) + ", got '" + std::string(f) + "'");
    return value;
}

double parse_coord(const LineReader& reader, std::string_view field) {
    try {
        return std::stod(std::string(field));
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(reader.line_number()) +
                         ": bad coordinate '" + std::string(field) + "'");
    }
}

}  // namespace

int label_from_ntu_filename(std::string_view filename) {
    // Look for the last 'A' followed by three digits.
    for (std::size_t i = filename.size(); i-- > 0;) {
        if ((filename[i] == 'A' || filename[i] == 'a') && i + 3 < filename.size() &&
            std::isdigit(static_cast<unsigned char>(filename[i + 1])) &&
            std::isdigit(static_cast<unsigned char>(filename[i + 2])) &&
            std::isdigit(static_cast<unsigned char>(filename[i + 3]))) {
            int value = (filename[i + 1] - '0') * 100 + (filename[i + 2] - '0') * 10 +
                        (filename[i + 3] - '0');
            return value - 1;
        }
    }
    return -1;
}

SkeletonSequence parse_ntu_skeleton(std::string_view text, std::string_view filename) {
    LineReader reader(text);
    std::string_view line;

    if (!reader.next(line)) throw ParseError("line 1: missing frame-count header");
    const int frame_count = parse_count(reader, line, "frame count");
    if (frame_count == 0) throw ParseError("line 1: frame count is zero");

    std::vector<std::vector<double>> tracked(frame_count);  // 25*3 per tracked frame
    int joint_count_seen = -1;

    for (int t = 0; t < frame_count; ++t) {
        if (!reader.next(line))
            throw ParseError("line " + std::to_string(reader.line_number() + 1) +
                             ": truncated before body count of frame " + std::to_string(t));
        const int bodies = parse_count(reader, line, "body count");

        for (int b = 0; b < bodies; ++b) {
            if (!reader.next(line))
                throw ParseError("line " + std::to_string(reader.line_number() + 1) +
                                 ": truncated before body info of frame " + std::to_string(t));
            // body info line is not interpreted further

            if (!reader.next(line))
                throw ParseError("line " + std::to_string(reader.line_number() + 1) +
                                 ": truncated before joint count of frame " + std::to_string(t));
            const int joints = parse_count(reader, line, "joint count");
            if (joints != kNtuJointCount)
                throw UnsupportedSkeleton("line " + std::to_string(reader.line_number()) +
                                          ": joint count " + std::to_string(joints) +
                                          " is not supported (expected 25)");
            joint_count_seen = joints;

            std::vector<double> coords;
            coords.reserve(static_cast<std::size_t>(joints) * 3);
            for (int v = 0; v < joints; ++v) {
                if (!reader.next(line))
                    throw ParseError("line " + std::to_string(reader.line_number() + 1) +
                                     ": truncated inside joint list of frame " +
                                     std::to_string(t));
                auto fields = split_fields(line);
                if (fields.size() < 3)
                    throw ParseError("line " + std::to_string(reader.line_number()) +
                                     ": expected at least 3 coordinate fields, got " +
                                     std::to_string(fields.size()));
                for (int a = 0; a < 3; ++a) coords.push_back(parse_coord(reader, fields[a]));
            }
            // First body of the frame is the one we keep.
            if (b == 0) tracked[t] = std::move(coords);
        }
    }

    int first_tracked = -1;
    for (int t = 0; t < frame_count; ++t)
        if (!tracked[t].empty()) {
            first_tracked = t;
            break;
        }
    if (first_tracked < 0) throw EmptySample("no tracked body in any frame");

    SkeletonSequence seq;
    seq.sample_id = filename.empty() ? "ntu-sample" : std::string(filename);
    if (auto dot = seq.sample_id.find_last_of('.'); dot != std::string::npos)
        seq.sample_id.resize(dot);
    if (auto slash = seq.sample_id.find_last_of("/\\"); slash != std::string::npos)
        seq.sample_id.erase(0, slash + 1);
    seq.label = label_from_ntu_filename(filename);
    seq.positions = JointFrames(frame_count, joint_count_seen);

    const std::vector<double>* last = &tracked[first_tracked];
    for (int t = 0; t < frame_count; ++t) {
        if (!tracked[t].empty()) last = &tracked[t];
        for (int v = 0; v < joint_count_seen; ++v)
            for (int a = 0; a < 3; ++a)
                seq.positions.at(t, v, a) = (*last)[static_cast<std::size_t>(v) * 3 + a];
    }

    seq.validate();
    return seq;
}

std::string format_ntu_skeleton(const SkeletonSequence& seq) {
    std::string out;
    out += std::to_string(seq.frames());
    out += '\n';
    char buf[96];
    for (int t = 0; t < seq.frames(); ++t) {
        out += "1\n";
        out += "0 0 0 0 0 0 0 0 0 2\n";  // body info placeholder, tracking state 2
        out += std::to_string(seq.joints());
        out += '\n';
        for (int v = 0; v < seq.joints(); ++v) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g 0 0 0 0 0 0 0 0 2\n",
                          seq.positions.at(t, v, 0), seq.positions.at(t, v, 1),
                          seq.positions.at(t, v, 2));
            out += buf;
        }
    }
    return out;
}

}  // namespace skelxai

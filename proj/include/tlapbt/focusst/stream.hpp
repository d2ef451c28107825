#pragma once

#include "tlapbt/error.hpp"
#include "tlapbt/ir_json.hpp"
#include "tlapbt/value.hpp"

#include <cstddef>
#include <vector>

namespace tlapbt::focusst {

/// Finite prefix of a timed stream: entry t holds the messages of interval t.
using TimedStream = std::vector<std::vector<Value>>;

/// Exactly one message in every interval of [0, up_to).
inline bool ts(const TimedStream& s, std::size_t up_to)
{
    if (up_to > s.size()) {
        throw Error(ErrorCode::InvalidArgument, "ts: prefix has " + std::to_string(s.size()) +
                                                    " intervals, asked for " + std::to_string(up_to));
    }
    for (std::size_t t = 0; t < up_to; ++t) {
        if (s[t].size() != 1) {
            return false;
        }
    }
    return true;
}

inline bool ts(const TimedStream& s) { return ts(s, s.size()); }

/// Messages of the stream in order, interval boundaries dropped.
inline std::vector<Value> messages(const TimedStream& s)
{
    std::vector<Value> out;
    for (const auto& interval : s) {
        out.insert(out.end(), interval.begin(), interval.end());
    }
    return out;
}

inline Json stream_to_json(const TimedStream& s)
{
    Json out = Json::array();
    for (const auto& interval : s) {
        Json msgs = Json::array();
        for (const auto& m : interval) {
            msgs.push_back(value_to_json(m));
        }
        out.push_back(msgs);
    }
    return out;
}

inline TimedStream stream_from_json(const Json& j)
{
    if (!j.is_array()) {
        throw Error(ErrorCode::InvalidSpec, "timed stream must be an array of arrays");
    }
    TimedStream out;
    for (const auto& interval : j) {
        if (!interval.is_array()) {
            throw Error(ErrorCode::InvalidSpec, "timed stream interval must be an array");
        }
        auto& msgs = out.emplace_back();
        for (const auto& m : interval) {
            msgs.push_back(value_from_json(m));
        }
    }
    return out;
}

} // namespace tlapbt::focusst

#pragma once

#include "tlapbt/error.hpp"
#include "tlapbt/ir_json.hpp"
#include "tlapbt/value.hpp"

#include <map>
#include <string>
#include <vector>

namespace tlapbt::pbt {

struct Command {
    std::string op;
    std::map<std::string, Value> args;

    [[nodiscard]] std::string to_string() const
    {
        std::string out = op;
        if (!args.empty()) {
            out += "(";
            bool first = true;
            for (const auto& [k, v] : args) {
                out += (first ? "" : ", ") + k + "=" + v.to_string();
                first = false;
            }
            out += ")";
        }
        return out;
    }

    friend bool operator==(const Command&, const Command&) = default;
};

using CommandSequence = std::vector<Command>;
using Observation = std::map<std::string, Value>;

struct Reply {
    bool ok = true;
    Observation observed;
    std::string error;
};

inline constexpr const char* reset_op = "__reset";

inline Json command_to_json(const Command& c)
{
    Json args = Json::object();
    for (const auto& [k, v] : c.args) {
        args[k] = value_to_json(v);
    }
    return Json{{"op", c.op}, {"args", args}};
}

inline Command command_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("op") || !j["op"].is_string()) {
        throw Error(ErrorCode::ProtocolError, "command needs a string 'op': " + j.dump());
    }
    Command c{j["op"].get<std::string>(), {}};
    if (j.contains("args")) {
        if (!j["args"].is_object()) {
            throw Error(ErrorCode::ProtocolError, "'args' must be an object: " + j.dump());
        }
        for (const auto& [k, v] : j["args"].items()) {
            c.args.emplace(k, value_from_json(v));
        }
    }
    return c;
}

inline Json sequence_to_json(const CommandSequence& seq)
{
    Json out = Json::array();
    for (const auto& c : seq) {
        out.push_back(command_to_json(c));
    }
    return out;
}

inline CommandSequence sequence_from_json(const Json& j)
{
    if (!j.is_array()) {
        throw Error(ErrorCode::InvalidArgument, "command sequence must be an array");
    }
    CommandSequence out;
    for (const auto& c : j) {
        out.push_back(command_from_json(c));
    }
    return out;
}

inline Json observation_to_json(const Observation& o)
{
    Json out = Json::object();
    for (const auto& [k, v] : o) {
        out[k] = value_to_json(v);
    }
    return out;
}

inline Json reply_to_json(const Reply& r)
{
    if (r.ok) {
        return Json{{"ok", true}, {"observed", observation_to_json(r.observed)}};
    }
    return Json{{"ok", false}, {"error", r.error}};
}

inline Reply reply_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("ok") || !j["ok"].is_boolean()) {
        throw Error(ErrorCode::ProtocolError, "reply needs a boolean 'ok': " + j.dump());
    }
    Reply r;
    r.ok = j["ok"].get<bool>();
    if (!r.ok) {
        r.error = j.contains("error") && j["error"].is_string() ? j["error"].get<std::string>() : j.dump();
        return r;
    }
    if (j.contains("observed")) {
        if (!j["observed"].is_object()) {
            throw Error(ErrorCode::ProtocolError, "'observed' must be an object: " + j.dump());
        }
        try {
            for (const auto& [k, v] : j["observed"].items()) {
                r.observed.emplace(k, value_from_json(v));
            }
        } catch (const Error& e) {
            throw Error(ErrorCode::ProtocolError, std::string("bad observed value: ") + e.what());
        }
    }
    return r;
}

} // namespace tlapbt::pbt

#pragma once

#include "tlapbt/error.hpp"
#include "tlapbt/eval.hpp"
#include "tlapbt/expr.hpp"
#include "tlapbt/focusst/stream.hpp"
#include "tlapbt/ir_json.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tlapbt::focusst {

inline bool is_type_tag(const std::string& tag) { return tag == "int" || tag == "bool" || tag == "signal"; }

/// One asm/gar entry.
///   Ts:         ts(stream)
///   Always:     formula holds in every interval; each stream name is bound
///               to the set of its messages in that interval, `t` to the
///               interval index
///   Alternates: consecutive messages of the stream differ
struct StreamPredicate {
    enum class Kind { Ts, Always, Alternates };

    Kind kind = Kind::Ts;
    std::string stream;
    Expr formula;

    static StreamPredicate ts_of(std::string s) { return {Kind::Ts, std::move(s), {}}; }
    static StreamPredicate always(Expr f) { return {Kind::Always, {}, std::move(f)}; }
    static StreamPredicate alternates(std::string s) { return {Kind::Alternates, std::move(s), {}}; }

    /// Free names the predicate reads (streams, locals and possibly `t`).
    [[nodiscard]] std::set<std::string> mentions() const
    {
        if (kind != Kind::Always) {
            return {stream};
        }
        std::set<std::string> out;
        std::vector<std::string> bound;
        for_each_reference(
            formula,
            [&](const Expr& ref, const std::vector<std::string>& scope) {
                if (std::find(scope.begin(), scope.end(), ref.name()) == scope.end()) {
                    out.insert(ref.name());
                }
            },
            bound);
        return out;
    }
};

struct ComponentSpec {
    std::string name;
    std::map<std::string, std::string> in;
    std::map<std::string, std::string> out;
    std::map<std::string, std::string> local;
    std::map<std::string, Value> init;
    std::vector<StreamPredicate> asm_;
    std::vector<StreamPredicate> gar;
};

/// Problems with the section contents; empty when the component is usable.
inline std::vector<std::string> validate(const ComponentSpec& spec)
{
    std::vector<std::string> problems;
    std::set<std::string> names;
    for (const auto* section : {&spec.in, &spec.out, &spec.local}) {
        for (const auto& [n, tag] : *section) {
            if (!names.insert(n).second) {
                problems.push_back("'" + n + "' declared in more than one section");
            }
            if (!is_type_tag(tag)) {
                problems.push_back("'" + n + "' has unknown type '" + tag + "'");
            }
        }
    }
    if (names.contains("t")) {
        problems.push_back("'t' is reserved for the interval index");
    }
    for (const auto& [n, _] : spec.local) {
        if (!spec.init.contains(n)) {
            problems.push_back("local '" + n + "' has no initial value");
        }
    }
    for (const auto& [n, _] : spec.init) {
        if (!spec.local.contains(n)) {
            problems.push_back("init binds '" + n + "', which is not a local variable");
        }
    }
    for (std::size_t i = 0; i < spec.asm_.size(); ++i) {
        for (const auto& n : spec.asm_[i].mentions()) {
            if (n != "t" && !spec.in.contains(n)) {
                problems.push_back("asm " + std::to_string(i) + " mentions '" + n + "', which is not an input");
            }
        }
    }
    for (std::size_t i = 0; i < spec.gar.size(); ++i) {
        for (const auto& n : spec.gar[i].mentions()) {
            if (n != "t" && !names.contains(n)) {
                problems.push_back("gar " + std::to_string(i) + " mentions undeclared '" + n + "'");
            }
        }
    }
    return problems;
}

struct Verdict {
    enum class Kind { Conforms, AssumptionViolated, GuaranteeViolated };

    Kind kind = Kind::Conforms;
    std::size_t index = 0;
    std::optional<std::size_t> interval;

    [[nodiscard]] bool conforms() const { return kind == Kind::Conforms; }

    [[nodiscard]] std::string to_string() const
    {
        switch (kind) {
        case Kind::Conforms: return "Conforms";
        case Kind::AssumptionViolated: return "AssumptionViolated(" + std::to_string(index) + ")";
        case Kind::GuaranteeViolated:
            return "GuaranteeViolated(" + std::to_string(index) + ", " +
                   (interval ? std::to_string(*interval) : std::string("-")) + ")";
        }
        return {};
    }

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

using StreamMap = std::map<std::string, TimedStream>;

namespace detail {

// First interval in [0, up_to) where the predicate fails.
inline std::optional<std::size_t> first_failure(const StreamPredicate& p, const StreamMap& streams, std::size_t up_to)
{
    auto stream = [&](const std::string& n) -> const TimedStream& {
        auto it = streams.find(n);
        if (it == streams.end()) {
            throw Error(ErrorCode::InvalidArgument, "no stream named '" + n + "'");
        }
        return it->second;
    };
    switch (p.kind) {
    case StreamPredicate::Kind::Ts: {
        const TimedStream& s = stream(p.stream);
        for (std::size_t t = 0; t < up_to; ++t) {
            if (s[t].size() != 1) {
                return t;
            }
        }
        return std::nullopt;
    }
    case StreamPredicate::Kind::Alternates: {
        const TimedStream& s = stream(p.stream);
        std::optional<Value> last;
        for (std::size_t t = 0; t < up_to; ++t) {
            for (const auto& m : s[t]) {
                if (last && *last == m) {
                    return t;
                }
                last = m;
            }
        }
        return std::nullopt;
    }
    case StreamPredicate::Kind::Always: {
        State empty(make_variable_list({}), {});
        for (std::size_t t = 0; t < up_to; ++t) {
            Env env{{"t", Value::integer(static_cast<std::int64_t>(t))}};
            for (const auto& [n, s] : streams) {
                env.emplace_back(n, Value::set(s[t]));
            }
            Value v = eval_expr(p.formula, empty, nullptr, env);
            if (!v.as_bool()) {
                return t;
            }
        }
        return std::nullopt;
    }
    }
    return std::nullopt;
}

} // namespace detail

/// Judges a run over [0, up_to). Assumptions are checked first; when one
/// fails the guarantees are not judged. `locals` optionally carries the
/// local variables' values per interval for guarantees that read them.
inline Verdict check_asm_gar(const ComponentSpec& spec, const StreamMap& inputs, const StreamMap& outputs,
                             std::size_t up_to, const StreamMap& locals = {})
{
    StreamMap all;
    for (const auto* group : {&inputs, &outputs, &locals}) {
        for (const auto& [n, s] : *group) {
            if (s.size() < up_to) {
                throw Error(ErrorCode::InvalidArgument, "stream '" + n + "' covers " + std::to_string(s.size()) +
                                                            " intervals, need " + std::to_string(up_to));
            }
            all.emplace(n, s);
        }
    }
    for (std::size_t i = 0; i < spec.asm_.size(); ++i) {
        if (detail::first_failure(spec.asm_[i], inputs, up_to)) {
            return {Verdict::Kind::AssumptionViolated, i, std::nullopt};
        }
    }
    for (std::size_t i = 0; i < spec.gar.size(); ++i) {
        if (auto t = detail::first_failure(spec.gar[i], all, up_to)) {
            return {Verdict::Kind::GuaranteeViolated, i, t};
        }
    }
    return {};
}

inline Json predicate_to_json(const StreamPredicate& p)
{
    switch (p.kind) {
    case StreamPredicate::Kind::Ts: return Json{{"ts", p.stream}};
    case StreamPredicate::Kind::Alternates: return Json{{"alternates", p.stream}};
    case StreamPredicate::Kind::Always: return Json{{"always", expr_to_json(p.formula)}};
    }
    return nullptr;
}

inline StreamPredicate predicate_from_json(const Json& j)
{
    if (j.is_object() && j.size() == 1) {
        if (j.contains("ts") && j["ts"].is_string()) {
            return StreamPredicate::ts_of(j["ts"].get<std::string>());
        }
        if (j.contains("alternates") && j["alternates"].is_string()) {
            return StreamPredicate::alternates(j["alternates"].get<std::string>());
        }
        if (j.contains("always")) {
            return StreamPredicate::always(expr_from_json(j["always"]));
        }
    }
    throw Error(ErrorCode::InvalidSpec, "not a stream predicate: " + j.dump());
}

inline Json component_to_json(const ComponentSpec& spec)
{
    Json init = Json::object();
    for (const auto& [n, v] : spec.init) {
        init[n] = value_to_json(v);
    }
    Json asm_ = Json::array();
    for (const auto& p : spec.asm_) {
        asm_.push_back(predicate_to_json(p));
    }
    Json gar = Json::array();
    for (const auto& p : spec.gar) {
        gar.push_back(predicate_to_json(p));
    }
    return Json{{"name", spec.name}, {"in", spec.in},   {"out", spec.out}, {"local", spec.local},
                {"init", init},      {"asm", asm_},     {"gar", gar}};
}

inline ComponentSpec component_from_json(const Json& j)
{
    if (!j.is_object()) {
        throw Error(ErrorCode::InvalidSpec, "component spec must be a JSON object");
    }
    ComponentSpec spec;
    spec.name = j.value("name", "");
    auto tags = [&](const char* key) {
        std::map<std::string, std::string> out;
        if (j.contains(key)) {
            for (const auto& [n, tag] : j[key].items()) {
                if (!tag.is_string()) {
                    throw Error(ErrorCode::InvalidSpec, std::string(key) + "." + n + " must be a type tag");
                }
                out.emplace(n, tag.get<std::string>());
            }
        }
        return out;
    };
    spec.in = tags("in");
    spec.out = tags("out");
    spec.local = tags("local");
    if (j.contains("init")) {
        for (const auto& [n, v] : j["init"].items()) {
            spec.init.emplace(n, value_from_json(v));
        }
    }
    for (const char* key : {"asm", "gar"}) {
        if (!j.contains(key)) {
            continue;
        }
        auto& target = std::string(key) == "asm" ? spec.asm_ : spec.gar;
        for (const auto& p : j[key]) {
            target.push_back(predicate_from_json(p));
        }
    }
    auto problems = validate(spec);
    if (!problems.empty()) {
        throw Error(ErrorCode::InvalidSpec, "component '" + spec.name + "': " + problems.front());
    }
    return spec;
}

} // namespace tlapbt::focusst

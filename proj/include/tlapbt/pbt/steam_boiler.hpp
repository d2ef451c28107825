#pragma once

// Steam boiler API: model binding for the nine operations and a reference
// implementation (with two seeded faults) that speaks the adapter protocol.

#include "tlapbt/error.hpp"
#include "tlapbt/focusst/steam_boiler.hpp"
#include "tlapbt/ir_json.hpp"
#include "tlapbt/pbt/adapter.hpp"
#include "tlapbt/pbt/binding.hpp"
#include "tlapbt/spec.hpp"
#include "tlapbt/tla/parser.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace tlapbt::pbt {

inline const std::vector<std::string>& steam_boiler_ops()
{
    static const std::vector<std::string> ops{"startSystem", "endSystem",           "pumpDidOpen",
                                              "openPump",    "pumpDidClose",        "closePump",
                                              "waterLevelDidChange", "checkWaterLevel", "controlSignalDidChange"};
    return ops;
}

namespace detail {

struct OpText {
    const char* name;
    std::vector<std::pair<const char*, std::pair<std::int64_t, std::int64_t>>> args;
    const char* pre;
    const char* effect;
    std::vector<std::pair<const char*, const char*>> observe;
    unsigned weight;
};

inline const std::vector<OpText>& steam_boiler_text()
{
    static const std::vector<OpText> ops{
        {"startSystem", {}, "~running",
         "running' = TRUE /\\ level' = 500 /\\ pumpOn' = FALSE", {{"running", "running"}}, 1},
        {"endSystem", {}, "running",
         "running' = FALSE /\\ level' = level /\\ pumpOn' = pumpOn", {{"running", "running"}}, 1},
        {"pumpDidOpen", {}, "running",
         "running' = running /\\ level' = level /\\ pumpOn' = pumpOn", {{"open", "pumpOn"}}, 2},
        {"openPump", {}, "running /\\ ~pumpOn /\\ level < High",
         "running' = running /\\ level' = level /\\ pumpOn' = TRUE", {}, 1},
        {"pumpDidClose", {}, "running",
         "running' = running /\\ level' = level /\\ pumpOn' = pumpOn", {{"closed", "~pumpOn"}}, 2},
        {"closePump", {}, "running /\\ pumpOn /\\ level > Low",
         "running' = running /\\ level' = level /\\ pumpOn' = FALSE", {}, 1},
        {"waterLevelDidChange", {{"amount", {0, 10}}}, "running",
         R"(
            /\ running' = running
            /\ \/ pumpOn /\ level' = level + 10
               \/ ~pumpOn /\ level' = level - amount
            /\ \/ ~pumpOn /\ level' <= Low /\ pumpOn' = TRUE
               \/ pumpOn /\ level' >= High /\ pumpOn' = FALSE
               \/ /\ ~(~pumpOn /\ level' <= Low)
                  /\ ~(pumpOn /\ level' >= High)
                  /\ pumpOn' = pumpOn)",
         {}, 30},
        {"checkWaterLevel", {}, "running",
         "running' = running /\\ level' = level /\\ pumpOn' = pumpOn", {{"level", "level"}}, 3},
        {"controlSignalDidChange", {{"val", {0, 1}}},
         "running /\\ (val = 1 => level < High) /\\ (val = 0 => level > Low)",
         "running' = running /\\ level' = level /\\ pumpOn' = (val = 1)", {}, 1},
    };
    return ops;
}

} // namespace detail

/// Operations of the steam boiler API against a model over
/// {running, level, pumpOn} with the controller thresholds Low and High.
inline ModelBinding steam_boiler_binding()
{
    ModelBinding b;
    b.name = "steamboiler";
    for (const auto& t : detail::steam_boiler_text()) {
        tla::ExprScope scope{{"running", "level", "pumpOn"}, {"Low", "High"}, {}};
        OpBinding op;
        op.name = t.name;
        op.weight = t.weight;
        for (const auto& [arg, range] : t.args) {
            op.args.push_back({arg, Value::range(range.first, range.second).items()});
            scope.bound.emplace_back(arg);
        }
        op.precondition = tla::parse_expr(t.pre, scope);
        op.effect = tla::parse_expr(t.effect, scope);
        for (const auto& [key, e] : t.observe) {
            op.observe.emplace(key, tla::parse_expr(e, scope));
        }
        b.ops.push_back(std::move(op));
    }
    return b;
}

/// Model spec for the binding. Each action is one operation with its
/// arguments existentially quantified, so the model can also be explored.
inline TemporalSpec steam_boiler_model(const ModelBinding& binding, const focusst::Thresholds& thresholds = {})
{
    using namespace build;
    thresholds.validate();
    TemporalSpec spec;
    spec.name = "SteamBoilerApi";
    spec.variables = {"running", "level", "pumpOn"};
    spec.params = {{"Low", thresholds.low}, {"High", thresholds.high}};
    spec.init = tla::parse_expr("running = FALSE /\\ level = 500 /\\ pumpOn = FALSE",
                                {{"running", "level", "pumpOn"}, {}, {}});
    spec.invariants.emplace("TypeOK", tla::parse_expr("running \\in BOOLEAN /\\ pumpOn \\in BOOLEAN",
                                                      {{"running", "level", "pumpOn"}, {}, {}}));
    for (const auto& op : binding.ops) {
        Expr body = and_(op.precondition, op.effect);
        for (auto it = op.args.rbegin(); it != op.args.rend(); ++it) {
            body = exists(it->name, constant(Value::set(it->domain)), body);
        }
        spec.actions.push_back({op.name, body});
    }
    return spec;
}

/// Reference implementation of the steam boiler API.
class SteamBoilerSut {
public:
    enum class Mutant { None, LevelBand, PumpIgnore };

    static Mutant parse_mutant(std::string_view name)
    {
        if (name == "none") {
            return Mutant::None;
        }
        if (name == "level-band") {
            return Mutant::LevelBand;
        }
        if (name == "pump-ignore") {
            return Mutant::PumpIgnore;
        }
        throw Error(ErrorCode::InvalidArgument, "unknown mutant '" + std::string(name) + "'");
    }

    explicit SteamBoilerSut(Mutant mutant = Mutant::None, focusst::Thresholds thresholds = {}) : mutant_(mutant)
    {
        thresholds_ = mutant == Mutant::LevelBand ? focusst::Thresholds{190, 810} : thresholds;
    }

    /// One protocol exchange.
    Json handle(const Json& request)
    {
        if (!request.is_object() || !request.contains("op") || !request["op"].is_string()) {
            return error("request needs a string 'op'");
        }
        const std::string op = request["op"].get<std::string>();
        const Json args = request.value("args", Json::object());
        if (op == reset_op) {
            running_ = false;
            level_ = focusst::initial_level;
            pump_on_ = false;
            return ok({});
        }
        if (op == "startSystem") {
            running_ = true;
            level_ = focusst::initial_level;
            pump_on_ = false;
            return ok({{"running", true}});
        }
        if (op.empty() || !is_known(op)) {
            return error("unknown op '" + op + "'");
        }
        if (!running_) {
            return error("system is not running");
        }
        if (op == "endSystem") {
            running_ = false;
            return ok({{"running", false}});
        }
        if (op == "openPump") {
            open_pump();
            return ok({});
        }
        if (op == "closePump") {
            close_pump();
            return ok({});
        }
        if (op == "pumpDidOpen") {
            return ok({{"open", pump_on_}});
        }
        if (op == "pumpDidClose") {
            return ok({{"closed", !pump_on_}});
        }
        if (op == "checkWaterLevel") {
            return ok({{"level", level_}});
        }
        if (op == "waterLevelDidChange") {
            if (!args.contains("amount") || !args["amount"].is_number_integer()) {
                return error("waterLevelDidChange needs an integer 'amount'");
            }
            try {
                level_ = focusst::step_boiler(level_, pump_on_, args["amount"].get<std::int64_t>());
            } catch (const Error& e) {
                return error(e.what());
            }
            controller();
            return ok({});
        }
        // controlSignalDidChange
        if (!args.contains("val") || !args["val"].is_number_integer()) {
            return error("controlSignalDidChange needs an integer 'val'");
        }
        if (args["val"].get<std::int64_t>() == 1) {
            open_pump();
        } else {
            close_pump();
        }
        return ok({});
    }

private:
    static bool is_known(const std::string& op)
    {
        const auto& ops = steam_boiler_ops();
        return std::find(ops.begin(), ops.end(), op) != ops.end();
    }

    static Json ok(Json observed) { return Json{{"ok", true}, {"observed", observed.is_null() ? Json::object() : observed}}; }
    static Json error(const std::string& why) { return Json{{"ok", false}, {"error", why}}; }

    void open_pump()
    {
        if (mutant_ != Mutant::PumpIgnore) {
            pump_on_ = true;
        }
    }

    void close_pump() { pump_on_ = false; }

    // Switches the pump after a level change.
    void controller()
    {
        if (!pump_on_ && level_ <= thresholds_.low) {
            open_pump();
        } else if (pump_on_ && level_ >= thresholds_.high) {
            close_pump();
        }
    }

    Mutant mutant_;
    focusst::Thresholds thresholds_;
    bool running_ = false;
    std::int64_t level_ = focusst::initial_level;
    bool pump_on_ = false;
};

inline InProcessAdapter steam_boiler_adapter(SteamBoilerSut::Mutant mutant = SteamBoilerSut::Mutant::None)
{
    auto sut = std::make_shared<SteamBoilerSut>(mutant);
    return InProcessAdapter([sut](const Json& request) { return sut->handle(request); });
}

} // namespace tlapbt::pbt

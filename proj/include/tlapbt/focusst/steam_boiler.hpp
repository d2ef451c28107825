#pragma once

// Steam boiler closed loop: a tank with a pump that adds 10 gallons per
// interval when on, steam production that takes 0..10 gallons per interval
// when the pump is off, and a controller that switches the pump.

#include "tlapbt/error.hpp"
#include "tlapbt/expr.hpp"
#include "tlapbt/focusst/component.hpp"
#include "tlapbt/focusst/stream.hpp"
#include "tlapbt/spec.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace tlapbt::focusst {

inline constexpr std::int64_t initial_level = 500;
inline constexpr std::int64_t pump_rate = 10;
inline constexpr std::int64_t max_consumption = 10;
inline constexpr std::int64_t safe_min = 200;
inline constexpr std::int64_t safe_max = 800;
inline constexpr std::int64_t tank_capacity = 1000;

struct Thresholds {
    std::int64_t low = 300;
    std::int64_t high = 700;

    void validate() const
    {
        if (low >= high) {
            throw Error(ErrorCode::InvalidArgument,
                        "thresholds need low < high, got " + std::to_string(low) + "/" + std::to_string(high));
        }
    }

    friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

inline Value on_signal() { return Value::boolean(true); }
inline Value off_signal() { return Value::boolean(false); }

inline std::int64_t step_boiler(std::int64_t level, bool pump_on, std::int64_t consumption)
{
    if (consumption < 0 || consumption > max_consumption) {
        throw Error(ErrorCode::ConsumptionOutOfRange,
                    "consumption " + std::to_string(consumption) + " outside 0.." + std::to_string(max_consumption));
    }
    return pump_on ? level + pump_rate : level - consumption;
}

struct ControllerState {
    std::int64_t water_level = initial_level;
    bool pump_on = false;
    std::optional<Value> last_signal;

    friend bool operator==(const ControllerState&, const ControllerState&) = default;
};

struct ControllerStep {
    ControllerState state;
    std::optional<Value> signal;
};

/// Signals only on a threshold crossing that changes the pump state.
inline ControllerStep controller_step(const ControllerState& state, std::int64_t sensor_level,
                                      const Thresholds& thresholds = {})
{
    thresholds.validate();
    ControllerStep out{state, std::nullopt};
    out.state.water_level = sensor_level;
    if (!state.pump_on && sensor_level <= thresholds.low) {
        out.signal = on_signal();
    } else if (state.pump_on && sensor_level >= thresholds.high) {
        out.signal = off_signal();
    }
    if (out.signal) {
        out.state.pump_on = out.signal->as_bool();
        out.state.last_signal = out.signal;
    }
    return out;
}

struct ClosedLoopRun {
    TimedStream level;  // sensor reading of every interval
    TimedStream signal; // controller output, empty when silent
    TimedStream pump;   // pump state during every interval
};

/// Runs boiler and controller for `intervals` intervals. A signal emitted in
/// interval t switches the pump from interval t+1.
inline ClosedLoopRun simulate_closed_loop(const Thresholds& thresholds,
                                          const std::function<std::int64_t(std::size_t)>& consumption,
                                          std::size_t intervals)
{
    thresholds.validate();
    ClosedLoopRun run;
    std::int64_t level = initial_level;
    bool pump_on = false;
    ControllerState ctrl;
    for (std::size_t t = 0; t < intervals; ++t) {
        run.level.push_back({Value::integer(level)});
        run.pump.push_back({Value::boolean(pump_on)});
        ControllerStep step = controller_step(ctrl, level, thresholds);
        ctrl = step.state;
        run.signal.push_back(step.signal ? std::vector<Value>{*step.signal} : std::vector<Value>{});
        level = step_boiler(level, pump_on, consumption(t));
        pump_on = ctrl.pump_on;
    }
    return run;
}

inline ClosedLoopRun simulate_closed_loop(const Thresholds& thresholds, std::int64_t consumption, std::size_t intervals)
{
    return simulate_closed_loop(thresholds, [consumption](std::size_t) { return consumption; }, intervals);
}

/// Controller as an asm/gar component: one sensor reading per interval is
/// assumed; the reading stays in the safe band and on/off signals alternate.
inline ComponentSpec controller_component()
{
    using namespace build;
    ComponentSpec spec;
    spec.name = "Controller";
    spec.in = {{"level", "int"}};
    spec.out = {{"pump", "signal"}};
    spec.local = {{"pumpOn", "bool"}};
    spec.init = {{"pumpOn", Value::boolean(false)}};
    spec.asm_ = {StreamPredicate::ts_of("level")};
    spec.gar = {
        StreamPredicate::always(forall("l", var("level"), and_(le(lit(safe_min), var("l")), le(var("l"), lit(safe_max))))),
        StreamPredicate::alternates("pump"),
    };
    return spec;
}

inline Verdict check_closed_loop(const ClosedLoopRun& run)
{
    std::size_t n = run.level.size();
    return check_asm_gar(controller_component(), {{"level", run.level}}, {{"pump", run.signal}}, n,
                         {{"pumpOn", run.pump}});
}

struct ClosedLoop {
    Thresholds thresholds;
};

/// The closed loop as an explorable spec over {level, pumpOn}. Thresholds
/// become the parameters Low and High.
inline TemporalSpec to_temporal_spec(const ClosedLoop& loop = {})
{
    using namespace build;
    loop.thresholds.validate();
    Expr level = var("level");
    Expr pump = var("pumpOn");
    Expr level1 = primed("level");
    Expr pump1 = primed("pumpOn");
    Expr low = var("Low");
    Expr high = var("High");

    TemporalSpec spec;
    spec.name = "SteamBoiler";
    spec.variables = {"level", "pumpOn"};
    spec.params = {{"Low", loop.thresholds.low}, {"High", loop.thresholds.high}};
    spec.invariants.emplace("TypeOK", and_(in(level, range(lit(0), lit(tank_capacity))),
                                           in(pump, constant(Value::booleans()))));
    spec.invariants.emplace("Safe", and_(le(lit(safe_min), level), le(level, lit(safe_max))));
    spec.init = and_(eq(level, lit(initial_level)), eq(pump, truth(false)));

    Expr fill = and_(and_(eq(pump, truth(true)), eq(level1, add(level, lit(pump_rate)))),
                     or_(and_(ge(level, high), eq(pump1, truth(false))),
                         and_(lt(level, high), eq(pump1, truth(true)))));
    Expr drain = and_(and_(eq(pump, truth(false)),
                           exists("c", range(lit(0), lit(max_consumption)), eq(level1, sub(level, var("c"))))),
                      or_(and_(le(level, low), eq(pump1, truth(true))),
                          and_(gt(level, low), eq(pump1, truth(false)))));
    spec.actions = {{"Fill", fill}, {"Drain", drain}};
    return spec;
}

} // namespace tlapbt::focusst

#pragma once

// Built-in example modules. The same text ships as specs/<name>.tla.

#include "tlapbt/error.hpp"
#include "tlapbt/spec.hpp"
#include "tlapbt/tla/parser.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tlapbt::examples {

struct Example {
    std::string_view name;
    std::string_view module_name;
    std::string_view source;
    std::map<std::string, std::int64_t> default_params;
};

inline const std::vector<Example>& all()
{
    static const std::vector<Example> table{
        {"onebit", "OneBitClock", R"tla(VARIABLE b 
Init ==  (b = 0) \/ (b = 1) 
Next == \/ /\ b = 0
           /\ b' = 1
        \/ /\ b = 1
           /\ b' = 0
)tla", {}},
        {"diehard", "DieHard", R"tla(---- MODULE DieHard ----
\* Measuring 4 gallons with a 3 gallon jug and a 5 gallon jug.
VARIABLES small, big

TypeOK == /\ small \in 0..3
          /\ big \in 0..5

Init == /\ small = 0
        /\ big = 0

FillSmall == /\ small' = 3
             /\ big' = big

FillBig == /\ big' = 5
           /\ small' = small

EmptySmall == /\ small' = 0
              /\ big' = big

EmptyBig == /\ big' = 0
            /\ small' = small

SmallToBig == \/ /\ big + small <= 5
                 /\ big' = big + small
                 /\ small' = 0
              \/ /\ big + small > 5
                 /\ big' = 5
                 /\ small' = small - (5 - big)

BigToSmall == \/ /\ big + small <= 3
                 /\ big' = 0
                 /\ small' = big + small
              \/ /\ big + small > 3
                 /\ big' = big - (3 - small)
                 /\ small' = 3

Next == \/ FillSmall
        \/ FillBig
        \/ EmptySmall
        \/ EmptyBig
        \/ SmallToBig
        \/ BigToSmall

\* Not checked by default; pass it with --invariant to find a solution.
big_ne_4 == big # 4
====
)tla", {}},
        {"euclid", "Euclid", R"tla(---- MODULE Euclid ----
\* Greatest common divisor by repeated subtraction.
CONSTANTS M, N
VARIABLES x, y

TypeOK == /\ x \in 1..M
          /\ y \in 1..N

Init == /\ x = M
        /\ y = N

SubX == /\ x > y
        /\ x' = x - y
        /\ y' = y

SubY == /\ y > x
        /\ y' = y - x
        /\ x' = x

Next == SubX \/ SubY
====
)tla", {{"M", 12}, {"N", 8}}},
        {"therac25", "Therac25", R"tla(---- MODULE Therac25 ----
(* Operator data-entry race of the Therac-25.
   mode:    0 none, 1 photon (25 MeV X-ray), 2 electron
   table:   turntable position, same encoding as mode
   current: beam current, 0 low (electron), 1 high (photon)
   timer:   seconds left while the bending magnets are set *)
VARIABLES mode, table, current, timer, cursorUp, fired

TypeOK == /\ mode \in 0..2
          /\ table \in 0..2
          /\ current \in 0..1
          /\ timer \in 0..8
          /\ cursorUp \in 0..1
          /\ fired \in 0..1

Init == /\ mode = 0
        /\ table = 0
        /\ current = 0
        /\ timer = 0
        /\ cursorUp = 0
        /\ fired = 0

SelectPhoton == /\ mode = 0
                /\ mode' = 1
                /\ current' = 1
                /\ timer' = 8
                /\ table' = table
                /\ cursorUp' = cursorUp
                /\ fired' = fired

CursorUp == /\ mode = 1
            /\ timer > 0
            /\ cursorUp = 0
            /\ cursorUp' = 1
            /\ mode' = mode
            /\ table' = table
            /\ current' = current
            /\ timer' = timer
            /\ fired' = fired

\* The correction is accepted but the current setting is not re-read.
SelectElectron == /\ cursorUp = 1
                  /\ mode' = 2
                  /\ cursorUp' = 0
                  /\ table' = table
                  /\ current' = current
                  /\ timer' = timer
                  /\ fired' = fired

Tick == /\ timer > 0
        /\ timer' = timer - 1
        /\ \/ /\ timer > 1
              /\ table' = table
           \/ /\ timer = 1
              /\ table' = mode
        /\ mode' = mode
        /\ current' = current
        /\ cursorUp' = cursorUp
        /\ fired' = fired

Fire == /\ timer = 0
        /\ mode # 0
        /\ fired = 0
        /\ fired' = 1
        /\ mode' = mode
        /\ table' = table
        /\ current' = current
        /\ timer' = timer
        /\ cursorUp' = cursorUp

Next == \/ SelectPhoton
        \/ CursorUp
        \/ SelectElectron
        \/ Tick
        \/ Fire

\* High current with the turntable in electron position: no target in the beam.
NoOverdose == ~(/\ fired = 1
                /\ table = 2
                /\ current = 1)

INVARIANTS NoOverdose
====
)tla", {}},
        {"steamboiler", "SteamBoiler", R"tla(---- MODULE SteamBoiler ----
\* Closed loop of boiler and pump controller. The controller reads the
\* level at the start of a step; its signal switches the pump for the next.
CONSTANTS Low, High
VARIABLES level, pumpOn

TypeOK == /\ level \in 0..1000
          /\ pumpOn \in BOOLEAN

Safe == /\ 200 <= level
        /\ level <= 800

Init == /\ level = 500
        /\ pumpOn = FALSE

Fill == /\ pumpOn = TRUE
        /\ level' = level + 10
        /\ \/ /\ level >= High
              /\ pumpOn' = FALSE
           \/ /\ level < High
              /\ pumpOn' = TRUE

Drain == /\ pumpOn = FALSE
         /\ \E c \in 0..10 : level' = level - c
         /\ \/ /\ level <= Low
               /\ pumpOn' = TRUE
            \/ /\ level > Low
               /\ pumpOn' = FALSE

Next == Fill \/ Drain

INVARIANTS Safe
====
)tla", {{"Low", 300}, {"High", 700}}},
    };
    return table;
}

inline const Example* find(std::string_view name)
{
    for (const auto& e : all()) {
        if (e.name == name) {
            return &e;
        }
    }
    return nullptr;
}

inline std::vector<std::string> names()
{
    std::vector<std::string> out;
    for (const auto& e : all()) {
        out.emplace_back(e.name);
    }
    return out;
}

/// Parses and translates a built-in example. `params` override the
/// defaults; `invariants` are checked in addition to the module's own.
inline TemporalSpec load(std::string_view name, const std::map<std::string, std::int64_t>& params = {},
                         const std::vector<std::string>& invariants = {})
{
    const Example* ex = find(name);
    if (!ex) {
        throw Error(ErrorCode::InvalidArgument, "unknown example '" + std::string(name) + "'");
    }
    tla::Conventions conv;
    conv.params = ex->default_params;
    for (const auto& [k, v] : params) {
        conv.params[k] = v;
    }
    conv.invariants = invariants;
    TemporalSpec spec = tla::to_spec(tla::parse_module(ex->source), conv);
    spec.name = std::string(ex->module_name);
    return spec;
}

} // namespace tlapbt::examples

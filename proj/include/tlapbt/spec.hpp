#pragma once

#include "tlapbt/eval.hpp"
#include "tlapbt/expr.hpp"
#include "tlapbt/state.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace tlapbt {

struct NamedAction {
    std::string name;
    Expr formula;

    friend bool operator==(const NamedAction&, const NamedAction&) = default;
};

/// Variables, Init, Next (the disjunction of `actions`) and safety invariants.
struct TemporalSpec {
    std::string name;
    std::vector<std::string> variables;
    Expr init;
    std::vector<NamedAction> actions;
    std::map<std::string, Expr> invariants;
    std::map<std::string, std::int64_t> params;

    [[nodiscard]] VariableList variable_list() const { return make_variable_list(variables); }
    [[nodiscard]] Env environment() const { return make_env(params); }

    [[nodiscard]] Expr next() const
    {
        std::vector<Expr> parts;
        for (const auto& a : actions) {
            parts.push_back(a.formula);
        }
        return build::disjunction(parts);
    }

    friend bool operator==(const TemporalSpec&, const TemporalSpec&) = default;
};

enum class DiagnosticKind : std::uint8_t {
    PrimedInStateFormula,
    UnknownVariable,
    DuplicateName,
    EmptyName,
};

inline std::string_view to_string(DiagnosticKind k)
{
    switch (k) {
    case DiagnosticKind::PrimedInStateFormula: return "PrimedInStateFormula";
    case DiagnosticKind::UnknownVariable: return "UnknownVariable";
    case DiagnosticKind::DuplicateName: return "DuplicateName";
    case DiagnosticKind::EmptyName: return "EmptyName";
    }
    return "?";
}

struct Diagnostic {
    DiagnosticKind kind;
    std::string construct; // the offending name, e.g. "z" or "b'"
    std::string location;  // e.g. "init", "action Tick", "invariant TypeOK"

    [[nodiscard]] std::string to_string() const
    {
        return std::string(tlapbt::to_string(kind)) + " '" + construct + "' in " + location;
    }
};

namespace detail {

inline void check_formula(const TemporalSpec& spec, const Expr& f, const std::string& location, bool action,
                          std::vector<Diagnostic>& out)
{
    auto declared = [&](const std::string& n) {
        return std::find(spec.variables.begin(), spec.variables.end(), n) != spec.variables.end();
    };
    std::vector<std::string> bound;
    for_each_reference(
        f,
        [&](const Expr& ref, const std::vector<std::string>& scope) {
            if (ref.op() == Op::Primed) {
                if (!action) {
                    out.push_back({DiagnosticKind::PrimedInStateFormula, ref.name() + "'", location});
                } else if (!declared(ref.name())) {
                    out.push_back({DiagnosticKind::UnknownVariable, ref.name(), location});
                }
                return;
            }
            bool is_bound = std::find(scope.begin(), scope.end(), ref.name()) != scope.end();
            if (!is_bound && !declared(ref.name()) && !spec.params.contains(ref.name())) {
                out.push_back({DiagnosticKind::UnknownVariable, ref.name(), location});
            }
        },
        bound);
}

} // namespace detail

/// Empty iff this spec satisfies the structural invariants of its types.
inline std::vector<Diagnostic> well_formed(const TemporalSpec& spec)
{
    std::vector<Diagnostic> out;
    std::set<std::string> seen;
    for (const auto& v : spec.variables) {
        if (v.empty()) {
            out.push_back({DiagnosticKind::EmptyName, v, "variables"});
        }
        if (!seen.insert(v).second) {
            out.push_back({DiagnosticKind::DuplicateName, v, "variables"});
        }
    }
    for (const auto& [p, _] : spec.params) {
        if (!seen.insert(p).second) {
            out.push_back({DiagnosticKind::DuplicateName, p, "params"});
        }
    }
    if (spec.init.empty()) {
        out.push_back({DiagnosticKind::EmptyName, "Init", "init"});
    } else {
        detail::check_formula(spec, spec.init, "init", false, out);
    }
    std::set<std::string> action_names;
    for (const auto& a : spec.actions) {
        if (!action_names.insert(a.name).second) {
            out.push_back({DiagnosticKind::DuplicateName, a.name, "actions"});
        }
        detail::check_formula(spec, a.formula, "action " + a.name, true, out);
    }
    for (const auto& [name, f] : spec.invariants) {
        detail::check_formula(spec, f, "invariant " + name, false, out);
    }
    return out;
}

} // namespace tlapbt

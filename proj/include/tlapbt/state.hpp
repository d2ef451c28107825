#pragma once

#include "tlapbt/error.hpp"
#include "tlapbt/value.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tlapbt {

using VariableList = std::shared_ptr<const std::vector<std::string>>;

inline VariableList make_variable_list(std::vector<std::string> names)
{
    return std::make_shared<const std::vector<std::string>>(std::move(names));
}

// A total assignment of values to a spec's declared variables. Values are
// stored positionally in declaration order; the variable list is shared
// between all states of one spec.
class State {
public:
    State() = default;

    State(VariableList variables, std::vector<Value> values) : variables_(std::move(variables)), values_(std::move(values))
    {
        if (!variables_ || variables_->size() != values_.size()) {
            throw Error(ErrorCode::InvalidArgument, "state must bind every declared variable exactly once");
        }
    }

    /// Builds a state from a name -> value map; the map must cover exactly `variables`.
    static State from_map(VariableList variables, const std::map<std::string, Value>& bindings)
    {
        if (bindings.size() != variables->size()) {
            throw Error(ErrorCode::InvalidArgument, "state bindings do not match declared variables");
        }
        std::vector<Value> values;
        values.reserve(variables->size());
        for (const auto& name : *variables) {
            auto it = bindings.find(name);
            if (it == bindings.end()) {
                throw Error(ErrorCode::UnboundVariable, "variable '" + name + "' is not bound");
            }
            values.push_back(it->second);
        }
        return State(std::move(variables), std::move(values));
    }

    [[nodiscard]] const std::vector<std::string>& variables() const { return *variables_; }
    [[nodiscard]] const VariableList& variable_list() const { return variables_; }
    [[nodiscard]] const std::vector<Value>& values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

    [[nodiscard]] const Value* find(std::string_view name) const
    {
        if (!variables_) {
            return nullptr;
        }
        for (std::size_t i = 0; i < variables_->size(); ++i) {
            if ((*variables_)[i] == name) {
                return &values_[i];
            }
        }
        return nullptr;
    }

    [[nodiscard]] const Value& at(std::string_view name) const
    {
        if (const Value* v = find(name)) {
            return *v;
        }
        throw Error(ErrorCode::UnboundVariable, "variable '" + std::string(name) + "' is not bound");
    }

    [[nodiscard]] State with(std::string_view name, Value v) const
    {
        State out = *this;
        for (std::size_t i = 0; i < variables_->size(); ++i) {
            if ((*variables_)[i] == name) {
                out.values_[i] = std::move(v);
                return out;
            }
        }
        throw Error(ErrorCode::UnboundVariable, "variable '" + std::string(name) + "' is not declared");
    }

    [[nodiscard]] std::size_t hash() const noexcept
    {
        std::size_t h = values_.size();
        for (const auto& v : values_) {
            h = hash_combine(h, v.hash());
        }
        return h;
    }

    [[nodiscard]] std::string to_string() const
    {
        std::string out = "{";
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (i > 0) {
                out += ", ";
            }
            out += (*variables_)[i] + ": " + values_[i].to_string();
        }
        return out + "}";
    }

    // Canonical order: lexicographic over values in declaration order.
    friend std::strong_ordering operator<=>(const State& a, const State& b) noexcept
    {
        return std::lexicographical_compare_three_way(a.values_.begin(), a.values_.end(), b.values_.begin(),
                                                      b.values_.end());
    }

    friend bool operator==(const State& a, const State& b) noexcept
    {
        if (a.values_ != b.values_) {
            return false;
        }
        return a.variables_ == b.variables_ || (a.variables_ && b.variables_ && *a.variables_ == *b.variables_);
    }

private:
    VariableList variables_;
    std::vector<Value> values_;
};

inline std::ostream& operator<<(std::ostream& out, const State& s) { return out << s.to_string(); }

struct StateHash {
    std::size_t operator()(const State& s) const noexcept { return s.hash(); }
};

/// A finite execution: a non-empty sequence of states over the same variables.
class Behavior {
public:
    explicit Behavior(std::vector<State> states) : states_(std::move(states))
    {
        if (states_.empty()) {
            throw Error(ErrorCode::InvalidArgument, "a behavior has at least one state");
        }
        for (const auto& s : states_) {
            if (s.variables() != states_.front().variables()) {
                throw Error(ErrorCode::InvalidArgument, "behavior states bind different variable sets");
            }
        }
    }

    [[nodiscard]] const std::vector<State>& states() const { return states_; }
    [[nodiscard]] std::size_t size() const { return states_.size(); }
    [[nodiscard]] const State& operator[](std::size_t i) const { return states_[i]; }
    [[nodiscard]] const State& back() const { return states_.back(); }

    friend bool operator==(const Behavior&, const Behavior&) = default;

private:
    std::vector<State> states_;
};

} // namespace tlapbt

template <>
struct std::hash<tlapbt::State> {
    std::size_t operator()(const tlapbt::State& s) const noexcept { return s.hash(); }
};

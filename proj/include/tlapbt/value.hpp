#pragma once

#include "tlapbt/error.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace tlapbt {

// Model values: integers, booleans, finite sets and finite sequences.
//
// The canonical total order ranks kinds Int < Bool < Set < Seq and compares
// within a kind naturally (false < true; sets and sequences
// lexicographically over their elements). Sets keep their elements sorted
// under that order with duplicates removed, so structural equality of two
// sets is element-wise equality.
class Value {
public:
    enum class Kind : std::uint8_t { Int = 0, Bool = 1, Set = 2, Seq = 3 };

    Value() = default;

    static Value integer(std::int64_t v)
    {
        Value out;
        out.kind_ = Kind::Int;
        out.scalar_ = v;
        return out;
    }

    static Value boolean(bool v)
    {
        Value out;
        out.kind_ = Kind::Bool;
        out.scalar_ = v ? 1 : 0;
        return out;
    }

    static Value set(std::vector<Value> elements);
    static Value set(std::initializer_list<Value> elements) { return set(std::vector<Value>(elements)); }
    static Value seq(std::vector<Value> items);
    static Value seq(std::initializer_list<Value> items) { return seq(std::vector<Value>(items)); }

    /// BOOLEAN, i.e. {FALSE, TRUE}.
    static Value booleans() { return set({boolean(false), boolean(true)}); }

    /// lo..hi as a set; empty when lo > hi.
    static Value range(std::int64_t lo, std::int64_t hi);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_int() const noexcept { return kind_ == Kind::Int; }
    [[nodiscard]] bool is_bool() const noexcept { return kind_ == Kind::Bool; }
    [[nodiscard]] bool is_set() const noexcept { return kind_ == Kind::Set; }
    [[nodiscard]] bool is_seq() const noexcept { return kind_ == Kind::Seq; }

    [[nodiscard]] std::int64_t as_int() const
    {
        if (!is_int()) {
            throw Error(ErrorCode::TypeMismatch, "expected an integer, got " + to_string());
        }
        return scalar_;
    }

    [[nodiscard]] bool as_bool() const
    {
        if (!is_bool()) {
            throw Error(ErrorCode::TypeMismatch, "expected a boolean, got " + to_string());
        }
        return scalar_ != 0;
    }

    /// Elements of a set (sorted) or items of a sequence (in order).
    [[nodiscard]] const std::vector<Value>& items() const
    {
        if (!is_set() && !is_seq()) {
            throw Error(ErrorCode::TypeMismatch, "expected a set or sequence, got " + to_string());
        }
        return *items_;
    }

    [[nodiscard]] bool contains(const Value& v) const
    {
        if (!is_set()) {
            throw Error(ErrorCode::TypeMismatch, "membership test on non-set " + to_string());
        }
        return std::binary_search(items_->begin(), items_->end(), v);
    }

    [[nodiscard]] std::size_t hash() const noexcept;
    [[nodiscard]] std::string to_string() const;

    friend std::strong_ordering operator<=>(const Value& a, const Value& b) noexcept;
    friend bool operator==(const Value& a, const Value& b) noexcept { return (a <=> b) == 0; }

private:
    Kind kind_ = Kind::Int;
    std::int64_t scalar_ = 0;
    std::shared_ptr<const std::vector<Value>> items_;
};

inline std::strong_ordering operator<=>(const Value& a, const Value& b) noexcept
{
    if (a.kind_ != b.kind_) {
        return a.kind_ <=> b.kind_;
    }
    switch (a.kind_) {
    case Value::Kind::Int:
    case Value::Kind::Bool: return a.scalar_ <=> b.scalar_;
    case Value::Kind::Set:
    case Value::Kind::Seq: {
        if (a.items_ == b.items_) {
            return std::strong_ordering::equal;
        }
        const auto& lhs = *a.items_;
        const auto& rhs = *b.items_;
        return std::lexicographical_compare_three_way(lhs.begin(), lhs.end(), rhs.begin(), rhs.end());
    }
    }
    return std::strong_ordering::equal;
}

inline Value Value::set(std::vector<Value> elements)
{
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    Value out;
    out.kind_ = Kind::Set;
    out.items_ = std::make_shared<const std::vector<Value>>(std::move(elements));
    return out;
}

inline Value Value::seq(std::vector<Value> items)
{
    Value out;
    out.kind_ = Kind::Seq;
    out.items_ = std::make_shared<const std::vector<Value>>(std::move(items));
    return out;
}

inline Value Value::range(std::int64_t lo, std::int64_t hi)
{
    constexpr std::int64_t max_range = 1 << 22;
    std::vector<Value> elements;
    if (lo <= hi) {
        if (hi - lo >= max_range) {
            throw Error(ErrorCode::UnboundedDomain, "integer range " + std::to_string(lo) + ".." +
                                                       std::to_string(hi) + " is too large to enumerate");
        }
        elements.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (std::int64_t i = lo; i <= hi; ++i) {
            elements.push_back(integer(i));
        }
    }
    Value out;
    out.kind_ = Kind::Set;
    out.items_ = std::make_shared<const std::vector<Value>>(std::move(elements));
    return out;
}

inline std::size_t hash_combine(std::size_t seed, std::size_t h) noexcept
{
    return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::size_t Value::hash() const noexcept
{
    std::size_t h = std::hash<int>{}(static_cast<int>(kind_));
    if (kind_ == Kind::Int || kind_ == Kind::Bool) {
        return hash_combine(h, std::hash<std::int64_t>{}(scalar_));
    }
    for (const auto& item : *items_) {
        h = hash_combine(h, item.hash());
    }
    return hash_combine(h, items_->size());
}

inline std::string Value::to_string() const
{
    switch (kind_) {
    case Kind::Int: return std::to_string(scalar_);
    case Kind::Bool: return scalar_ != 0 ? "TRUE" : "FALSE";
    case Kind::Set:
    case Kind::Seq: {
        std::string out = kind_ == Kind::Set ? "{" : "<<";
        for (std::size_t i = 0; i < items_->size(); ++i) {
            if (i > 0) {
                out += ", ";
            }
            out += (*items_)[i].to_string();
        }
        out += kind_ == Kind::Set ? "}" : ">>";
        return out;
    }
    }
    return {};
}

inline std::ostream& operator<<(std::ostream& out, const Value& v) { return out << v.to_string(); }

} // namespace tlapbt

template <>
struct std::hash<tlapbt::Value> {
    std::size_t operator()(const tlapbt::Value& v) const noexcept { return v.hash(); }
};

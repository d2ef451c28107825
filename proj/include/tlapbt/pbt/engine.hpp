#pragma once

#include "tlapbt/error.hpp"
#include "tlapbt/explorer/explorer.hpp"
#include "tlapbt/ir_json.hpp"
#include "tlapbt/pbt/adapter.hpp"
#include "tlapbt/pbt/binding.hpp"
#include "tlapbt/pbt/command.hpp"
#include "tlapbt/spec.hpp"

#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tlapbt::pbt {

/// Random walk through the model: an op is drawn by weight among those with
/// at least one enabled argument tuple, then a tuple uniformly. Stops at
/// `max_len` commands or when nothing is enabled.
inline CommandSequence generate_commands(Model& model, std::size_t max_len, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    State s = model.initial();
    CommandSequence out;
    struct Choice {
        const OpBinding* op;
        std::vector<Command> commands;
    };
    while (out.size() < max_len) {
        std::vector<Choice> choices;
        std::size_t total = 0;
        for (const auto& op : model.binding().ops) {
            if (op.weight == 0) {
                continue;
            }
            Choice ch{&op, {}};
            for (auto& args : Model::arg_tuples(op)) {
                Command c{op.name, std::move(args)};
                if (model.enabled(c, s)) {
                    ch.commands.push_back(std::move(c));
                }
            }
            if (!ch.commands.empty()) {
                total += op.weight;
                choices.push_back(std::move(ch));
            }
        }
        if (choices.empty()) {
            break;
        }
        std::size_t r = explorer::uniform_index(rng, total);
        const Choice* pick = &choices.front();
        for (const auto& ch : choices) {
            if (r < ch.op->weight) {
                pick = &ch;
                break;
            }
            r -= ch.op->weight;
        }
        Command c = pick->commands[explorer::uniform_index(rng, pick->commands.size())];
        s = model.step(c, s);
        out.push_back(std::move(c));
    }
    return out;
}

inline CommandSequence generate_commands(const ModelBinding& binding, const TemporalSpec& spec, std::size_t max_len,
                                         std::uint64_t seed)
{
    Model model(binding, spec);
    return generate_commands(model, max_len, seed);
}

/// Every command is enabled in the model state its prefix reaches.
inline bool preconditions_hold(Model& model, const CommandSequence& commands)
{
    State s = model.initial();
    for (const auto& c : commands) {
        if (!model.enabled(c, s)) {
            return false;
        }
        s = model.step(c, s);
    }
    return true;
}

struct CaseResult {
    bool passed = true;
    /// Commands sent to the SUT.
    std::size_t executed = 0;
    std::optional<std::size_t> divergence;
    std::string op;
    Json expected;
    Json observed;
    std::string error;
};

inline CaseResult run_case(Model& model, SutAdapter& sut, const CommandSequence& commands)
{
    CaseResult result;
    sut.reset();
    State s = model.initial();
    for (std::size_t i = 0; i < commands.size(); ++i) {
        const Command& c = commands[i];
        if (!model.enabled(c, s)) {
            throw Error(ErrorCode::PreconditionViolated,
                        "command " + std::to_string(i) + " (" + c.to_string() + ") is not enabled in " + s.to_string());
        }
        State post = model.step(c, s);
        Observation expected = model.expect(c, post);
        auto diverge = [&](Json observed, std::string error) {
            result.passed = false;
            result.divergence = i;
            result.op = c.op;
            result.expected = observation_to_json(expected);
            result.observed = std::move(observed);
            result.error = std::move(error);
        };
        Reply reply;
        try {
            reply = sut.execute(c);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SutCrashed) {
                throw;
            }
            result.executed = i + 1;
            diverge(nullptr, e.what());
            return result;
        }
        result.executed = i + 1;
        if (!reply.ok) {
            diverge(nullptr, "SUT rejected the command: " + reply.error);
            return result;
        }
        Json observed = Json::object();
        bool same = true;
        for (const auto& [key, v] : expected) {
            auto it = reply.observed.find(key);
            if (it == reply.observed.end()) {
                observed[key] = nullptr;
                same = false;
            } else {
                observed[key] = value_to_json(it->second);
                same = same && it->second == v;
            }
        }
        if (!same) {
            diverge(observed, {});
            return result;
        }
        s = std::move(post);
    }
    return result;
}

inline CaseResult run_case(const ModelBinding& binding, const TemporalSpec& spec, SutAdapter& sut,
                           const CommandSequence& commands)
{
    Model model(binding, spec);
    return run_case(model, sut, commands);
}

/// Deletes chunks of halving size, then single commands, then shrinks
/// integer arguments toward 0, until nothing changes. Every accepted
/// candidate satisfies all preconditions and still fails; the result is
/// 1-minimal.
inline CommandSequence shrink(Model& model, SutAdapter& sut, const CommandSequence& failing)
{
    CaseResult first = run_case(model, sut, failing);
    if (first.passed) {
        throw Error(ErrorCode::PreconditionViolated, "shrink needs a failing command sequence");
    }
    CommandSequence cur(failing.begin(), failing.begin() + static_cast<std::ptrdiff_t>(*first.divergence + 1));

    auto accept = [&](const CommandSequence& candidate) {
        if (!preconditions_hold(model, candidate)) {
            return false;
        }
        CaseResult r = run_case(model, sut, candidate);
        if (r.passed) {
            return false;
        }
        cur.assign(candidate.begin(), candidate.begin() + static_cast<std::ptrdiff_t>(*r.divergence + 1));
        return true;
    };

    for (;;) {
        bool changed = false;
        for (std::size_t chunk = std::max<std::size_t>(cur.size() / 2, 1);; chunk /= 2) {
            std::size_t start = 0;
            while (start + chunk <= cur.size()) {
                CommandSequence candidate;
                candidate.reserve(cur.size() - chunk);
                candidate.insert(candidate.end(), cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(start));
                candidate.insert(candidate.end(), cur.begin() + static_cast<std::ptrdiff_t>(start + chunk), cur.end());
                if (accept(candidate)) {
                    changed = true;
                } else {
                    start += chunk;
                }
            }
            if (chunk <= 1) {
                break;
            }
        }
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const OpBinding* op = model.binding().find(cur[i].op);
            for (const auto& spec : op->args) {
                for (bool again = true; again && i < cur.size();) {
                    again = false;
                    const Value& v = cur[i].args.at(spec.name);
                    if (!v.is_int() || v.as_int() == 0) {
                        break;
                    }
                    std::int64_t x = v.as_int();
                    for (std::int64_t c : {std::int64_t{0}, x / 2, x > 0 ? x - 1 : x + 1}) {
                        if (std::llabs(c) >= std::llabs(x) ||
                            std::find(spec.domain.begin(), spec.domain.end(), Value::integer(c)) == spec.domain.end()) {
                            continue;
                        }
                        CommandSequence candidate = cur;
                        candidate[i].args[spec.name] = Value::integer(c);
                        if (accept(candidate)) {
                            changed = again = true;
                            break;
                        }
                    }
                }
            }
        }
        if (!changed) {
            return cur;
        }
    }
}

inline CommandSequence shrink(const ModelBinding& binding, const TemporalSpec& spec, SutAdapter& sut,
                              const CommandSequence& failing)
{
    Model model(binding, spec);
    return shrink(model, sut, failing);
}

struct TestConfig {
    std::size_t cases = 100;
    std::size_t max_len = 100;
    std::uint64_t seed = 0;
    bool continue_on_fail = false;
};

struct Failure {
    std::size_t case_index = 0;
    std::uint64_t case_seed = 0;
    CommandSequence commands;
    CommandSequence shrunk;
    /// Divergence of the shrunk sequence.
    CaseResult divergence;
};

struct TestReport {
    std::uint64_t seed = 0;
    std::size_t cases_run = 0;
    bool passed = true;
    std::size_t failures = 0;
    std::optional<Failure> failing;
    std::map<std::string, std::size_t> invocation_counts;
};

/// Case seeds are drawn from a generator seeded with `config.seed`, so a
/// report is reproduced exactly by the same binding, spec and config.
inline TestReport test(const ModelBinding& binding, const TemporalSpec& spec, SutAdapter& sut, const TestConfig& config)
{
    Model model(binding, spec);
    TestReport report;
    report.seed = config.seed;
    for (const auto& op : binding.ops) {
        report.invocation_counts[op.name] = 0;
    }
    std::mt19937_64 seeds(config.seed);
    for (std::size_t n = 0; n < config.cases; ++n) {
        std::uint64_t case_seed = seeds();
        CommandSequence commands = generate_commands(model, config.max_len, case_seed);
        CaseResult r = run_case(model, sut, commands);
        ++report.cases_run;
        for (std::size_t i = 0; i < r.executed; ++i) {
            ++report.invocation_counts[commands[i].op];
        }
        if (r.passed) {
            continue;
        }
        report.passed = false;
        ++report.failures;
        if (!report.failing) {
            Failure f;
            f.case_index = n;
            f.case_seed = case_seed;
            f.commands = commands;
            f.shrunk = shrink(model, sut, commands);
            f.divergence = run_case(model, sut, f.shrunk);
            report.failing = std::move(f);
        }
        if (!config.continue_on_fail) {
            break;
        }
    }
    return report;
}

inline Json case_result_to_json(const CaseResult& r)
{
    Json out{{"passed", r.passed}, {"executed", r.executed}};
    if (!r.passed) {
        out["index"] = *r.divergence;
        out["op"] = r.op;
        out["expected"] = r.expected;
        out["observed"] = r.observed;
        if (!r.error.empty()) {
            out["error"] = r.error;
        }
    }
    return out;
}

inline Json report_to_json(const TestReport& r)
{
    Json out{{"seed", r.seed},
             {"cases_run", r.cases_run},
             {"verdict", r.passed ? "pass" : "fail"},
             {"failures", r.failures},
             {"invocation_counts", r.invocation_counts},
             {"failing", nullptr}};
    if (r.failing) {
        const Failure& f = *r.failing;
        out["failing"] = Json{{"case", f.case_index},
                              {"case_seed", f.case_seed},
                              {"commands", sequence_to_json(f.commands)},
                              {"shrunk", sequence_to_json(f.shrunk)},
                              {"divergence", case_result_to_json(f.divergence)}};
    }
    return out;
}

} // namespace tlapbt::pbt

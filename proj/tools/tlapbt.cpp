// tlapbt: translate, check, sample behaviors of, and property-test against
// specs in the TLA+ subset.
//
// Exit status: 0 success, 1 invariant violation or failed test run,
// 2 usage or input error (including an exploration cut short by a limit).

#include "tlapbt/examples.hpp"
#include "tlapbt/explorer/explorer.hpp"
#include "tlapbt/ir_json.hpp"
#include "tlapbt/pbt/engine.hpp"
#include "tlapbt/pbt/steam_boiler.hpp"
#include "tlapbt/tla/parser.hpp"
#include "tlapbt/tla/printer.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace tlapbt;

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

struct Options {
    std::string target;
    std::string spec_path;
    std::string example;
    std::vector<std::string> params;
    std::vector<std::string> invariants;
    std::size_t max_distinct = 1'000'000;
    std::size_t max_depth = 1'000'000;
    std::size_t count = 1;
    std::size_t max_len = 100;
    std::size_t cases = 100;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string sut;
    std::string binding = "steamboiler";
    bool continue_on_fail = false;
    bool restart = false;
    std::string output;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ends_with(const std::string& s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::map<std::string, std::int64_t> parse_params(const std::vector<std::string>& raw)
{
    std::map<std::string, std::int64_t> out;
    for (const auto& kv : raw) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error(ErrorCode::InvalidArgument, "--param expects K=V, got '" + kv + "'");
        }
        std::string value = kv.substr(eq + 1);
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != value.size() || value.empty()) {
            throw Error(ErrorCode::InvalidArgument, "--param " + kv.substr(0, eq) + " needs an integer value");
        }
        out[kv.substr(0, eq)] = v;
    }
    return out;
}

/// Resolves the positional target, --spec or --example to a spec.
TemporalSpec load_spec(const Options& o)
{
    std::string target = !o.spec_path.empty() ? o.spec_path : !o.example.empty() ? o.example : o.target;
    if (target.empty()) {
        throw Error(ErrorCode::InvalidArgument, "no spec given (name a built-in example or a .tla/.json file)");
    }
    auto params = parse_params(o.params);
    if (o.spec_path.empty() && (!o.example.empty() || examples::find(target))) {
        const auto* ex = examples::find(target);
        if (!ex) {
            throw Error(ErrorCode::InvalidArgument, "unknown example '" + target + "'");
        }
        for (const auto& [k, _] : params) {
            if (!ex->default_params.contains(k)) {
                throw Error(ErrorCode::InvalidArgument, "example '" + target + "' has no parameter " + k);
            }
        }
        return examples::load(target, params, o.invariants);
    }
    if (ends_with(target, ".json")) {
        TemporalSpec spec = spec_from_json(Json::parse(read_file(target)));
        for (const auto& [k, v] : params) {
            if (!spec.params.contains(k)) {
                throw Error(ErrorCode::InvalidArgument, "spec has no parameter " + k);
            }
            spec.params[k] = v;
        }
        for (const auto& inv : o.invariants) {
            if (!spec.invariants.contains(inv)) {
                throw Error(ErrorCode::UnknownInvariant, "spec has no invariant " + inv);
            }
        }
        return spec;
    }
    if (ends_with(target, ".tla")) {
        tla::Conventions conv;
        conv.params = params;
        conv.invariants = o.invariants;
        return tla::to_spec(tla::parse_module(read_file(target)), conv);
    }
    throw Error(ErrorCode::InvalidArgument, "'" + target + "' is neither a built-in example (" + [] {
        std::string names;
        for (const auto& n : examples::names()) {
            names += (names.empty() ? "" : ", ") + n;
        }
        return names;
    }() + ") nor a .tla/.json file");
}

std::string human_value(const Json& v) { return v.dump(); }

std::string human_state(const State& s)
{
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i ? " " : "") + s.variables()[i] + "=" + s.values()[i].to_string();
    }
    return out;
}

int cmd_translate(const Options& o)
{
    TemporalSpec spec = load_spec(o);
    std::string text = o.format == "human" ? tla::pretty_print(spec) : spec_to_json(spec).dump(2) + "\n";
    if (o.output.empty() || o.output == "-") {
        std::cout << text;
    } else {
        std::ofstream out(o.output, std::ios::binary);
        if (!out || !(out << text)) {
            throw Error(ErrorCode::InvalidArgument, "cannot write '" + o.output + "'");
        }
    }
    return exit_ok;
}

int cmd_check(const Options& o)
{
    TemporalSpec spec = load_spec(o);
    explorer::ExploreLimits limits{o.max_distinct, o.max_depth};
    auto start = std::chrono::steady_clock::now();
    auto result = explorer::explore(spec, limits);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.format == "json") {
        std::cout << explorer::stats_to_json(result.stats).dump() << '\n';
        for (const auto& c : result.counterexamples) {
            std::cout << explorer::counterexample_to_json(c).dump() << '\n';
        }
    } else {
        const auto& s = result.stats;
        std::cout << spec.name << ": diameter " << s.diameter << ", states found " << s.states_found
                  << ", distinct states " << s.distinct_states << (s.truncated ? " (truncated by limits)" : "") << " in "
                  << seconds << " s\n";
        if (result.counterexamples.empty()) {
            std::cout << "no invariant violated\n";
        }
        for (const auto& c : result.counterexamples) {
            std::cout << "invariant " << c.invariant << " violated after " << c.trace.size() << " states:\n";
            for (std::size_t i = 0; i < c.trace.size(); ++i) {
                std::cout << "  " << i + 1 << ": " << human_state(c.trace[i]) << '\n';
            }
        }
    }
    if (!result.counterexamples.empty()) {
        return exit_failed;
    }
    if (result.stats.truncated) {
        std::cerr << "error: LimitExceeded: exploration stopped at --max-distinct " << o.max_distinct
                  << " / --max-depth " << o.max_depth << "\n";
        return exit_usage;
    }
    return exit_ok;
}

int cmd_behaviors(const Options& o)
{
    TemporalSpec spec = load_spec(o);
    explorer::ExploreLimits limits{o.max_distinct, o.max_depth};
    auto behaviors = explorer::behaviors(spec, o.count, o.max_len, o.seed, limits);
    for (const auto& b : behaviors) {
        if (o.format == "json") {
            std::cout << behavior_to_json(b).dump() << '\n';
        } else {
            std::string line;
            for (const auto& s : b.states()) {
                line += (line.empty() ? "" : " -> ") + std::string("[") + human_state(s) + "]";
            }
            std::cout << line << '\n';
        }
    }
    return exit_ok;
}

int cmd_test(const Options& o)
{
    if (o.binding != "steamboiler") {
        throw Error(ErrorCode::InvalidArgument, "unknown binding '" + o.binding + "' (available: steamboiler)");
    }
    std::string target = !o.spec_path.empty() ? o.spec_path : !o.example.empty() ? o.example : o.target;
    if (!target.empty() && target != "steamboiler") {
        throw Error(ErrorCode::InvalidArgument, "the steamboiler binding tests the steamboiler example, not '" + target + "'");
    }
    auto params = parse_params(o.params);
    focusst::Thresholds thresholds;
    for (const auto& [k, v] : params) {
        if (k == "Low") {
            thresholds.low = v;
        } else if (k == "High") {
            thresholds.high = v;
        } else {
            throw Error(ErrorCode::InvalidArgument, "steamboiler has no parameter " + k);
        }
    }
    auto binding = pbt::steam_boiler_binding();
    auto spec = pbt::steam_boiler_model(binding, thresholds);

    std::unique_ptr<pbt::SutAdapter> sut;
    if (o.sut.empty()) {
        sut = std::make_unique<pbt::InProcessAdapter>(pbt::steam_boiler_adapter());
    } else {
        sut = std::make_unique<pbt::SubprocessAdapter>(o.sut, pbt::SubprocessAdapter::Options{o.restart, std::chrono::milliseconds(10'000)});
    }
    pbt::TestConfig config{o.cases, o.max_len, o.seed, o.continue_on_fail};
    auto start = std::chrono::steady_clock::now();
    pbt::TestReport report = pbt::test(binding, spec, *sut, config);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Json j = pbt::report_to_json(report);
    if (o.format == "json") {
        std::cout << j.dump() << '\n';
    } else {
        std::cout << (report.passed ? "PASS" : "FAIL") << ": " << report.cases_run << " cases, seed " << report.seed
                  << ", " << seconds << " s\n";
        if (report.failing) {
            const auto& f = *report.failing;
            std::cout << "first failing case #" << f.case_index << " (" << f.commands.size() << " commands), shrunk to "
                      << f.shrunk.size() << ":\n";
            for (std::size_t i = 0; i < f.shrunk.size(); ++i) {
                std::cout << "  " << i << ": " << f.shrunk[i].to_string() << '\n';
            }
            const auto& d = f.divergence;
            std::cout << "diverged at " << *d.divergence << " (" << d.op << "): expected " << human_value(d.expected)
                      << ", observed " << human_value(d.observed);
            if (!d.error.empty()) {
                std::cout << " [" << d.error << "]";
            }
            std::cout << '\n';
        }
        std::cout << "invocations:";
        for (const auto& [op, n] : report.invocation_counts) {
            std::cout << ' ' << op << '=' << n;
        }
        std::cout << '\n';
    }
    return report.passed ? exit_ok : exit_failed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Explicit-state exploration and model-based property testing for a TLA+ subset"};
    app.require_subcommand(1);
    Options o;

    auto add_target = [&](CLI::App* sub) {
        sub->add_option("target", o.target, "built-in example (" +
                                                [] {
                                                    std::string names;
                                                    for (const auto& n : examples::names()) {
                                                        names += (names.empty() ? "" : " | ") + n;
                                                    }
                                                    return names;
                                                }() +
                                                ") or a .tla / .json file");
        sub->add_option("--spec", o.spec_path, "spec file (.tla or spec IR .json)");
        sub->add_option("--example", o.example, "built-in example name");
        sub->add_option("--param", o.params, "constant value K=V (repeatable)");
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"human", "json"}));
    };
    auto add_limits = [&](CLI::App* sub) {
        sub->add_option("--max-distinct", o.max_distinct, "stop after this many distinct states")->check(CLI::PositiveNumber);
        sub->add_option("--max-depth", o.max_depth, "do not expand beyond this many BFS levels")->check(CLI::PositiveNumber);
    };

    auto* translate = app.add_subcommand("translate", "write a module as spec IR JSON");
    add_target(translate);
    translate->add_option("--invariant", o.invariants, "also register this definition as an invariant");
    translate->add_option("-o,--output", o.output, "output file (default stdout)");

    auto* check = app.add_subcommand("check", "explore all reachable states and check invariants");
    add_target(check);
    add_limits(check);
    check->add_option("--invariant", o.invariants, "also check this definition (repeatable)");

    auto* behaviors = app.add_subcommand("behaviors", "sample behaviors as random walks, one JSON object per line");
    add_target(behaviors);
    add_limits(behaviors);
    behaviors->add_option("--count", o.count, "number of behaviors");
    behaviors->add_option("--max-len", o.max_len, "maximum states per behavior")->check(CLI::PositiveNumber);
    behaviors->add_option("--seed", o.seed, "random seed");

    auto* test = app.add_subcommand("test", "property-test a system under test against the model");
    add_target(test);
    test->add_option("--binding", o.binding, "model binding (steamboiler)");
    test->add_option("--sut", o.sut, "SUT command line (default: in-process reference implementation)");
    test->add_option("--cases", o.cases, "number of generated cases");
    test->add_option("--max-len", o.max_len, "maximum commands per case");
    test->add_option("--seed", o.seed, "random seed");
    test->add_flag("--continue-on-fail", o.continue_on_fail, "keep running cases after the first failure");
    test->add_flag("--restart", o.restart, "restart the SUT process before every case");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*translate) {
            return cmd_translate(o);
        }
        if (*check) {
            return cmd_check(o);
        }
        if (*behaviors) {
            return cmd_behaviors(o);
        }
        return cmd_test(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Json::exception& e) {
        std::cerr << "error: InvalidSpec: " << e.what() << '\n';
        return exit_usage;
    }
}

// Steam boiler system under test: one JSON request per line on stdin, one
// JSON reply per line on stdout.

#include "tlapbt/pbt/steam_boiler.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv)
{
    CLI::App app{"Steam boiler reference SUT"};
    std::string mutant = "none";
    app.add_option("--mutant", mutant, "none | level-band | pump-ignore")
        ->check(CLI::IsMember({"none", "level-band", "pump-ignore"}));
    CLI11_PARSE(app, argc, argv);

    tlapbt::pbt::SteamBoilerSut sut(tlapbt::pbt::SteamBoilerSut::parse_mutant(mutant));
    std::ios::sync_with_stdio(false);
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) {
            continue;
        }
        tlapbt::Json reply;
        try {
            reply = sut.handle(tlapbt::Json::parse(line));
        } catch (const tlapbt::Json::parse_error& e) {
            reply = tlapbt::Json{{"ok", false}, {"error", std::string("malformed request: ") + e.what()}};
        }
        std::cout << reply.dump() << '\n' << std::flush;
    }
    return 0;
}

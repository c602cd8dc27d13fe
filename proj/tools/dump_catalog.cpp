// Writes every built-in scenario to <dir>/<name>.json (default dir: scenarios).
// The shipped files under scenarios/ are generated by this tool; a unit test
// checks they stay in sync with the built-in catalog.
#include "syncarena/experiments.hpp"
#include "syncarena/io.hpp"

#include <cstdio>
#include <filesystem>

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "scenarios";
    std::filesystem::create_directories(dir);
    for (const syncarena::Scenario& s : syncarena::catalog()) {
        const std::filesystem::path path = dir / (s.name + ".json");
        syncarena::write_json_file(path, syncarena::scenario_to_json(s));
        std::printf("wrote %s\n", path.string().c_str());
    }
    return 0;
}

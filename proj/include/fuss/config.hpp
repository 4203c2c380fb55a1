#pragma once

#include "fuss/engine.hpp"
#include "fuss/experiments.hpp"

#include <string>
#include <variant>
#include <vector>

namespace fuss {

/// One `key=value` line of a config file.
struct KvEntry {
    std::string key;
    std::string value;
    int line = 0;
};

/// Parse the flat key=value format: one key per line, '#' comments, blank
/// lines ignored. Throws ConfigError listing every malformed line.
std::vector<KvEntry> parse_kv(const std::string& text);

using ParsedConfig = std::variant<RunConfig, SweepSpec>;

/// Dispatches on the `trials` key: present means a sweep spec, absent a
/// single-run config. Errors carry (key, line, reason) for every problem
/// found, not just the first.
ParsedConfig parse_config(const std::string& text);

RunConfig parse_run_config(const std::string& text);
SweepSpec parse_sweep_config(const std::string& text);

} // namespace fuss

#pragma once

#include <string>

#include "cell.h"

namespace memcell {

// Applies one key = value assignment. Unknown keys and malformed values
// throw ConfigError. Cross-field checks are deferred to validate().
void set_key(CellConfig &cfg, const std::string &key,
             const std::string &value);

// Flat key = value text; '#' starts a comment, blank lines are ignored,
// later assignments win. Errors carry the 1-based line number. The parsed
// config is cross-validated before it is returned.
CellConfig parse_config(const std::string &text);

// Canonical snapshot: every key in a fixed order at full double precision,
// with the drift gain resolved to a number. parse_config(render_config(c))
// reproduces c exactly, and rendering is byte-stable.
std::string render_config(const CellConfig &cfg);

} // namespace memcell

#pragma once

#include <iosfwd>
#include <string>

#include "tapscope/link_model.hpp"

namespace tapscope {

/// Reads a flat `key = value` config file into a LinkConfig. Lines starting
/// with '#' (after leading whitespace) and blank lines are ignored. Keys match
/// the LinkConfig field names. span_loss_db takes either a comma-separated
/// list (which also fixes n_spans unless n_spans is given and disagrees) or a
/// single value broadcast to all spans. Unknown keys, malformed numbers,
/// duplicate keys and out-of-range values raise ConfigError; the resulting
/// config is validate()d before being returned. Missing keys keep defaults.
LinkConfig load_link_config(std::istream& in);
LinkConfig load_link_config(const std::string& path);

/// Writes the full config in the same format, one key per line.
void write_link_config(const LinkConfig& cfg, std::ostream& out);

}

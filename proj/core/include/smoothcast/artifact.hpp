#pragma once

#include <string>

#include "smoothcast/engine.hpp"

namespace smoothcast {

/**
 * Model artifact persistence.
 *
 * Layout: a one-line text header carrying the format version tag, then
 * length-prefixed binary sections (metadata, training series, initial state,
 * MAP result, posterior draws), then a trailing FNV-1a checksum over every
 * preceding byte. Encoding is canonical - field order is fixed and doubles
 * are stored bit-exact - so save -> load -> save reproduces the file
 * byte for byte.
 *
 * load_artifact throws VersionMismatch on an unknown header tag and
 * ChecksumMismatch on truncation or corruption.
 */
void save_artifact(const FittedModel& model, const std::string& path);

FittedModel load_artifact(const std::string& path);

} // namespace smoothcast

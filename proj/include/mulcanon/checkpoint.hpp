#pragma once

#include <string>

#include "mulcanon/trainer.hpp"

namespace mulcanon {

/// Text tensor dump with a manifest header: every tensor is listed by name
/// and shape before its values, and the file ends with an integrity marker
/// so truncation is detectable.
void save_checkpoint(const ModelState& state, const std::string& path);

ModelState load_checkpoint(const std::string& path);

}  // namespace mulcanon

#pragma once

#include <string>

#include "core/boosting.hpp"

namespace bnpmle {

//! Persist a fitted ensemble as a versioned JSON document. Doubles are
//! written in shortest round-trip form, so a reloaded model reproduces the
//! original bit for bit and repeated saves of the same model are
//! byte-identical.
void save_model(const Ensemble& ens, const std::string& path);

//! Load a model written by save_model. The normalizing constant and the
//! per-knot caches are recomputed from the learners; a stored constant that
//! disagrees with the recomputed one marks a corrupt or hand-edited file and
//! raises Error{invalid_input}.
Ensemble load_model(const std::string& path);

} // namespace bnpmle

#pragma once

#include "change_model.hpp"
#include "program.hpp"
#include "test_config.hpp"

namespace chtest {

// First snapshot: pure additions, containers before contained
// (classes in topo order, then methods, then invocations).
ChangeModel distillInitial(const Program &p, const ResolutionMode &mode,
                           const TestConfig &cfg = {});

// Appends the old->new delta to model, which must be the distillation of
// old's history (checked; throws InconsistentBase). Removes run
// dependents-first, then method Modifies, then Adds containers-first.
// A surviving method with a changed body yields Remove/Add pairs for the
// changed invocation subjects plus one Modify of the method. A class whose
// superclass changed is removed and re-added with its subtree.
// Returns the appended changes.
std::vector<Change> distillDelta(ChangeModel &model, const Program &oldP,
                                 const Program &newP,
                                 const TestConfig &cfg = {});

// Same change list replayed under the flipped resolution mode: invocation
// Adds get their callee dependencies recomputed, everything else is
// untouched. Involution: relinking twice restores the original.
ChangeModel polymorphicRelink(const ChangeModel &model);

} // namespace chtest

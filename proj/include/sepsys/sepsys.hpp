#pragma once

// Umbrella header: finite abstract separation systems, inverse systems and
// their limits, the transfer lemmas between a profinite system and its
// projections, the tree set compactness machinery, normality certificates
// for schematic chains, the graph separation model, registered example
// constructions, the random-instance test kit, interchange documents and
// the named check registry.

#include "sepsys/checks.hpp"
#include "sepsys/compactness.hpp"
#include "sepsys/errors.hpp"
#include "sepsys/examples.hpp"
#include "sepsys/graphsep.hpp"
#include "sepsys/hom.hpp"
#include "sepsys/interchange.hpp"
#include "sepsys/inverse_system.hpp"
#include "sepsys/normality.hpp"
#include "sepsys/orientations.hpp"
#include "sepsys/poset.hpp"
#include "sepsys/profinite.hpp"
#include "sepsys/separation_system.hpp"
#include "sepsys/testkit.hpp"

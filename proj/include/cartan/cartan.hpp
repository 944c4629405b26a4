#pragma once

#include "cartan/algebra.hpp"
#include "cartan/check.hpp"
#include "cartan/fixtures.hpp"
#include "cartan/groupoid.hpp"
#include "cartan/io.hpp"
#include "cartan/isomorphism.hpp"
#include "cartan/masa.hpp"
#include "cartan/phase.hpp"
#include "cartan/random.hpp"
#include "cartan/reconstruction.hpp"
#include "cartan/relations.hpp"
#include "cartan/representation.hpp"
#include "cartan/report.hpp"
#include "cartan/semigroups.hpp"
#include "cartan/suites.hpp"

#pragma once

#include "corridorlab/error.hpp"
#include "corridorlab/word.hpp"
#include "corridorlab/matrix.hpp"
#include "corridorlab/automorphism.hpp"
#include "corridorlab/strata.hpp"
#include "corridorlab/conditioning.hpp"
#include "corridorlab/huge_int.hpp"
#include "corridorlab/constants.hpp"
#include "corridorlab/corridor.hpp"
#include "corridorlab/dehn.hpp"
#include "corridorlab/random.hpp"
#include "corridorlab/io.hpp"
#include "corridorlab/svg.hpp"
#include "corridorlab/cli.hpp"

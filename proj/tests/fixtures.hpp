#pragma once

#include "gerbelab/examples.hpp"

namespace fixtures {

using namespace gerbelab;
using namespace gerbelab::examples;

}  // namespace fixtures

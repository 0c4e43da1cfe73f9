#pragma once

#include "model.hpp"
#include "decode.hpp"
#include "syntax.hpp"
#include "elaborate.hpp"
#include "split.hpp"
#include "flatten.hpp"
#include "equivalence.hpp"
#include "fixtures.hpp"
#include "jsonio.hpp"

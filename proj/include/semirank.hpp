#pragma once

#include "semirank/field.hpp"
#include "semirank/packed.hpp"
#include "semirank/linalg.hpp"
#include "semirank/extfield.hpp"
#include "semirank/codec.hpp"
#include "semirank/matspace.hpp"
#include "semirank/tensor.hpp"
#include "semirank/parallel.hpp"
#include "semirank/equivalence.hpp"
#include "semirank/algebra.hpp"
#include "semirank/codes.hpp"
#include "semirank/search.hpp"
#include "semirank/atlas.hpp"

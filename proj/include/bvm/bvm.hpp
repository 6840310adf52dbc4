#pragma once

// Umbrella header for the whole library.

#include "bvm/action.hpp"
#include "bvm/ast.hpp"
#include "bvm/atoms.hpp"
#include "bvm/clopen.hpp"
#include "bvm/description.hpp"
#include "bvm/enumerations.hpp"
#include "bvm/error.hpp"
#include "bvm/isomorphism.hpp"
#include "bvm/json_io.hpp"
#include "bvm/model_enum.hpp"
#include "bvm/parser.hpp"
#include "bvm/permutation.hpp"
#include "bvm/predicate.hpp"
#include "bvm/signature.hpp"
#include "bvm/space.hpp"
#include "bvm/structure.hpp"
#include "bvm/synthesis.hpp"
#include "bvm/theory.hpp"
#include "bvm/translate.hpp"

// SPDX-License-Identifier: MIT
#pragma once

// Umbrella header for the whole library.

#include "lext/array_normal.hpp"
#include "lext/error.hpp"
#include "lext/identities.hpp"
#include "lext/io.hpp"
#include "lext/kron.hpp"
#include "lext/layout.hpp"
#include "lext/linalg.hpp"
#include "lext/matrix.hpp"
#include "lext/models.hpp"
#include "lext/random.hpp"
#include "lext/shape.hpp"
#include "lext/tensor.hpp"

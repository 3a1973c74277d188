#pragma once

#include "cmt/cm_space.hpp"
#include "cmt/core.hpp"
#include "cmt/engine.hpp"
#include "cmt/fiber.hpp"
#include "cmt/io.hpp"
#include "cmt/linalg.hpp"
#include "cmt/matrix.hpp"
#include "cmt/moves.hpp"
#include "cmt/polynomial.hpp"

#pragma once

#include "gordankit/alternative.hpp"
#include "gordankit/conjugate.hpp"
#include "gordankit/error.hpp"
#include "gordankit/infimum.hpp"
#include "gordankit/linalg.hpp"
#include "gordankit/oracle.hpp"
#include "gordankit/qp.hpp"
#include "gordankit/quadratic.hpp"
#include "gordankit/zfamily.hpp"

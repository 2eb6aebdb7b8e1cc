#pragma once

#include "matperturb/decomposition.hpp"
#include "matperturb/errors.hpp"
#include "matperturb/first_order.hpp"
#include "matperturb/loewner.hpp"
#include "matperturb/matrix_core.hpp"
#include "matperturb/projectors.hpp"
#include "matperturb/verification.hpp"

#pragma once

#include "gaussbound/bounds.hpp"
#include "gaussbound/error.hpp"
#include "gaussbound/fock_oracle.hpp"
#include "gaussbound/gaussian_state.hpp"
#include "gaussbound/report.hpp"
#include "gaussbound/spectral_functions.hpp"
#include "gaussbound/symplectic.hpp"

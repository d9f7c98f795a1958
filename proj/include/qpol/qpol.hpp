#pragma once

#include "qpol/entanglement.hpp"
#include "qpol/errors.hpp"
#include "qpol/fock.hpp"
#include "qpol/fock_oracle.hpp"
#include "qpol/polarization.hpp"
#include "qpol/quadrature.hpp"
#include "qpol/states.hpp"
#include "qpol/stokes.hpp"

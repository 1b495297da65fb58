#ifndef JETMORSE_HPP
#define JETMORSE_HPP

#include <jetmorse/error.hpp>
#include <jetmorse/scalar_jet.hpp>
#include <jetmorse/jet.hpp>
#include <jetmorse/wronskian.hpp>
#include <jetmorse/hermitian.hpp>
#include <jetmorse/sym_power.hpp>
#include <jetmorse/metrics.hpp>
#include <jetmorse/sampling.hpp>
#include <jetmorse/morse.hpp>
#include <jetmorse/scenario_io.hpp>

#endif

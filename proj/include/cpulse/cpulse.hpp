#pragma once

#include "cpulse/analysis.hpp"
#include "cpulse/io.hpp"
#include "cpulse/ising_gate.hpp"
#include "cpulse/rotor.hpp"
#include "cpulse/sequences.hpp"

#pragma once

#include "sevencubes/chains.hpp"
#include "sevencubes/cubes.hpp"
#include "sevencubes/errors.hpp"
#include "sevencubes/factor.hpp"
#include "sevencubes/integer.hpp"
#include "sevencubes/io.hpp"
#include "sevencubes/oracle.hpp"
#include "sevencubes/primes.hpp"
#include "sevencubes/selftest.hpp"
#include "sevencubes/ternary_form.hpp"

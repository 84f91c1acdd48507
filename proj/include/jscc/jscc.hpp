#ifndef JSCC_JSCC_HPP
#define JSCC_JSCC_HPP

#include "jscc/asymptotics.hpp"
#include "jscc/csv.hpp"
#include "jscc/error.hpp"
#include "jscc/finite_bounds.hpp"
#include "jscc/info_measures.hpp"
#include "jscc/markov.hpp"
#include "jscc/matrix.hpp"
#include "jscc/oracle.hpp"
#include "jscc/scalar_search.hpp"
#include "jscc/tilted_family.hpp"

#endif  // JSCC_JSCC_HPP

#ifndef WSHIFT_WSHIFT_HPP
#define WSHIFT_WSHIFT_HPP

#include "wshift/errors.hpp"
#include "wshift/json_io.hpp"
#include "wshift/lattice2d.hpp"
#include "wshift/linalg.hpp"
#include "wshift/measures.hpp"
#include "wshift/oracle.hpp"
#include "wshift/oracle_report.hpp"
#include "wshift/positivity.hpp"
#include "wshift/spectra.hpp"
#include "wshift/weights1d.hpp"

#endif  // WSHIFT_WSHIFT_HPP

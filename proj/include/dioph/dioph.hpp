#ifndef DIOPH_DIOPH_HPP
#define DIOPH_DIOPH_HPP

#include "dioph/errors.hpp"
#include "dioph/mpreal.hpp"
#include "dioph/contfrac.hpp"
#include "dioph/table.hpp"
#include "dioph/diophantine.hpp"
#include "dioph/kernels.hpp"
#include "dioph/series.hpp"
#include "dioph/stats.hpp"
#include "dioph/cache.hpp"

#endif  // DIOPH_DIOPH_HPP

#ifndef RESUMFEM_RESUMFEM_HPP
#define RESUMFEM_RESUMFEM_HPP

#include "resumfem/continuation.hpp"
#include "resumfem/csv.hpp"
#include "resumfem/errors.hpp"
#include "resumfem/fem.hpp"
#include "resumfem/linalg.hpp"
#include "resumfem/models.hpp"
#include "resumfem/operators.hpp"
#include "resumfem/quadrature.hpp"
#include "resumfem/recipes.hpp"
#include "resumfem/resummation.hpp"
#include "resumfem/series.hpp"
#include "resumfem/stabilization.hpp"
#include "resumfem/svg.hpp"

#endif

#pragma once

#include "vsl/bessel_oracle.hpp"
#include "vsl/errors.hpp"
#include "vsl/identity_suite.hpp"
#include "vsl/io_reporting.hpp"
#include "vsl/limit_diagnostics.hpp"
#include "vsl/ns_disk_solver.hpp"
#include "vsl/p1_operators.hpp"
#include "vsl/quadrature.hpp"
#include "vsl/radial_core.hpp"
#include "vsl/stencils.hpp"
#include "vsl/sweep_harness.hpp"
#include "vsl/tensor_checks.hpp"
#include "vsl/tridiagonal.hpp"

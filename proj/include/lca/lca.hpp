/**
 * @brief Umbrella header.
 */
#pragma once

#include "lca/cli.hpp"
#include "lca/error.hpp"
#include "lca/flow.hpp"
#include "lca/matcore.hpp"
#include "lca/oracle.hpp"
#include "lca/report_io.hpp"
#include "lca/spectra.hpp"
#include "lca/tables.hpp"
#include "lca/topology.hpp"
#include "lca/verify.hpp"

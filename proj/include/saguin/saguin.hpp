#ifndef SAGUIN_SAGUIN_HPP
#define SAGUIN_SAGUIN_HPP

#include "saguin/constants.hpp"
#include "saguin/csv.hpp"
#include "saguin/energy_lifetime.hpp"
#include "saguin/energy_profile_io.hpp"
#include "saguin/error.hpp"
#include "saguin/experiment_config.hpp"
#include "saguin/experiments.hpp"
#include "saguin/key_value.hpp"
#include "saguin/link_budget.hpp"
#include "saguin/lora_phy.hpp"
#include "saguin/network_sim.hpp"
#include "saguin/optimizer.hpp"
#include "saguin/parallel.hpp"
#include "saguin/random.hpp"
#include "saguin/soil_dielectric.hpp"
#include "saguin/system_model.hpp"
#include "saguin/version.hpp"

#endif  // SAGUIN_SAGUIN_HPP

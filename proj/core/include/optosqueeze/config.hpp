#pragma once

#include <string>

#include "optosqueeze/sweep.hpp"
#include "optosqueeze/toml.hpp"

namespace osq {

// Config layout (frequencies in Hz, converted by 2 pi internally; SI
// otherwise):
//
//   [system]
//   omega_m0 = 1e6            # Hz
//   mass = 1e-12              # kg
//   quality_factor = 1e7      # XOR gamma_m (Hz)
//   kappa = 380e3             # Hz
//   temperature = 0.1         # K
//   coupling = 110e3          # Hz; XOR {power (W), cavity_length (m),
//                             #         reflectivity, omega_c (Hz)}
//   detuning = "sideband-cooling"   # or a number (Hz)
//   squeeze_detuning = 0.0    # Hz
//
//   [squeezing]               # one of three forms
//   gamma_o = 4e7             # Hz   (+ epsilon, optional epsilon_phase rad)
//   db = 6.0                  # with bandwidth_bx (Hz)
//   N = ...                   # with M_abs, M_phase (rad), b_x, b_y (Hz)
//
//   [scenario]
//   kind = "fig3a_input_sweep"   # fig3b_detuning_sweep, fig3c_bandwidth_sweep,
//                                # fig3d_temperature_sweep, squashing, custom
//   axis = "input_db"         # input_db, delta, bandwidth_bx, temperature,
//                             # kappa, eta
//   from = 0.0
//   to = 10.0
//   points = 21
//   spacing = "linear"        # or "log"
//   methods = ["analytic_rsl", "analytic_white", "analytic_finite_bw", "exact"]
//
// Preset kinds fill any omitted [system]/[squeezing]/[scenario] values with
// their published operating points; `custom` requires everything explicit.
// The fully-resolved values are echoed into output metadata.

Scenario load_config(const std::string& path);
Scenario scenario_from_document(const toml::Document& doc);

}  // namespace osq

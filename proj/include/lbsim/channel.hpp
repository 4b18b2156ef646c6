#pragma once

#include <vector>

// Radio propagation and signal-quality math: urban-macro NLOS path loss,
// received power, and SINR. Pure functions, all stateless; dBm/mW conversion
// is centralized here so every module agrees on the linear domain.

namespace lbsim::channel {

struct LinkGeometry {
  double d2d_m;   // horizontal UE-BS distance, >= 0
  double h_bs_m;  // BS antenna height, > h_ut_m
  double h_ut_m;  // UE antenna height, > 0
  double fc_ghz;  // carrier frequency, > 0

  double d3d_m() const;
  void validate() const;  // throws on non-finite or out-of-range fields
};

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// Urban-macro NLOS path loss in dB: max of the LOS sub-breakpoint curve and
// the NLOS curve, with the 3D distance floored at 10 m. Monotonically
// non-decreasing in d2d at fixed heights and frequency.
double path_loss_uma_nlos(const LinkGeometry& geom);

// True when the NLOS curve dominates the LOS sub-breakpoint curve for every
// distance >= the 10 m floor at this UE height (the frequency term cancels).
// Configs assert this so the max() never silently switches branch.
bool nlos_dominates(double h_ut_m);

double rx_power_dbm(double tx_power_dbm, double pl_db);

// Linear SINR of the serving cell. With interference enabled this is
// serving power over (sum of the other cells' power plus noise); with it
// disabled (the simulation default) the other cells drop out entirely and
// the result is serving power over noise.
double sinr_linear(const std::vector<double>& rxp_dbm, int serving,
                   double noise_dbm, bool interference_enabled);

}  // namespace lbsim::channel

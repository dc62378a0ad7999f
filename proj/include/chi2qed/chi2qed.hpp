#pragma once

// Strong coupling between single photons in chi^(2)-coupled semiconductor
// microcavities: coupling constants from mode-overlap integrals, damped Rabi
// dynamics of the closed subsystem and of the full truncated-Fock master
// equation, dressed-state spectra, strong-coupling criteria, and platform
// feasibility estimates.

#include "chi2qed/cavity.hpp"
#include "chi2qed/constants.hpp"
#include "chi2qed/errors.hpp"
#include "chi2qed/feasibility.hpp"
#include "chi2qed/field_grid.hpp"
#include "chi2qed/integrate.hpp"
#include "chi2qed/io.hpp"
#include "chi2qed/lindblad.hpp"
#include "chi2qed/overlap.hpp"
#include "chi2qed/presets.hpp"
#include "chi2qed/reduced.hpp"
#include "chi2qed/spectrum.hpp"
#include "chi2qed/subsystem.hpp"
#include "chi2qed/tensor.hpp"
#include "chi2qed/units.hpp"

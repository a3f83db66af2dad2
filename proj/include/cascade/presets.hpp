#pragma once

#include <string>
#include <vector>

#include "cascade/io.hpp"

namespace cascade {

/// Named parameter sets reproducing the reference scenarios:
///   fig2-upper  N=2 strong coupling, g = (50, 50),   kappa_ex=5,   kappa_in=0.1
///   fig2-lower  N=2 strong coupling, g = (50, -50i)  (g_1 = i g_2)
///   fig3-upper  N=2 bad cavity,      g = (50, 50),   kappa_ex=500, kappa_in=0.5
///   fig3-lower  N=2 bad cavity,      g = (50, 50i)   (g_1 = -i g_2)
///   fig4-atom1, fig4-atom2  N=3 all-equal g=50, bad cavity, atom 1/2 excited
///   fig5-atom1, fig5-atom2  N=3 alternating (50, 50i, 50), atom 1/2 excited
/// All have gamma_A=5, delta=0, h=0, zero link phases, and a display grid.
RunSpec preset(const std::string& name);

const std::vector<std::string>& preset_names();

}  // namespace cascade

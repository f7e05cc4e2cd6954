#pragma once

#include "flagvar/flag.hpp"

namespace flagvar {

/// CP^{2n+1} = Sp(n+1)/(U(1) x Sp(n)): type C_{n+1} with Theta = Sigma \ {a12}.
/// Components come out as (a12, a12+, ..., a1,n+1+) of dimension 4n and {a11}.
FlagPtr cp_space(int n);

/// SU(3)/T^2: type A_2 with Theta empty.
FlagPtr su3_maximal_flag();

/// Rotation rate 1/sqrt(2n+4) of the CP^{2n+1} construction.
double cp_rate(int n);

}  // namespace flagvar

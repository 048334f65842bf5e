#pragma once

#include "streamrelay/network.hpp"
#include "streamrelay/rational.hpp"

namespace streamrelay {

struct FbConstruction {
  MultiAccessCode code;
  Rational target_r2;  ///< closed-form fixed-bottleneck rate at R1
  bool reached_target = false;
};

/// Fixed-bottleneck code at user-1 rate r1: the relay runs the concatenated
/// diagonal code of rate C(T-N2, N3), user 1 takes its delays from the relay
/// budget first and user 2 gets the largest realizable remainder. Tries slot
/// widths 1..max_n and returns the first one reaching the closed-form rate
/// (else the best found). Throws Infeasible when R1 is out of range or no
/// width up to max_n works.
FbConstruction construct_fb(const NetworkParams& params, const Rational& r1, int max_n = 240);

/// A copies of the single-user-1 code followed by B copies of the
/// single-user-2 code.
MultiAccessCode construct_cswdf(const NetworkParams& params, int a, int b);

}  // namespace streamrelay

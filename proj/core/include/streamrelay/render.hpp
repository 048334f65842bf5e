#pragma once

#include <string>

#include "streamrelay/network.hpp"

namespace streamrelay {

/// Widest code that gets a packet-by-packet table.
inline constexpr int kRenderWidthLimit = 40;

/// Packet contents at a generic time t for every position of the code, with
/// parities written as sums over their diagonal. Message symbols are named
/// `<prefix><index>`; coefficients are hex field elements.
std::string render_p2p(const P2PStreamingCode& code, const std::string& prefix);

/// Summary of a composed code: rates, spectra, delay-pair counts and, for
/// links no wider than kRenderWidthLimit, the packet tables.
std::string render_code(const MultiAccessCode& code);

}  // namespace streamrelay

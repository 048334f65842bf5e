#pragma once

#include <string>
#include <string_view>

#include "streamrelay/network.hpp"
#include "streamrelay/p2p.hpp"

namespace streamrelay {

// JSON descriptors. All indices are 0-based. Parity matrices are written
// row-major as one hex string, two digits per entry over GF(2^8) and four
// over GF(2^16). Parsing throws Error{Parse} on malformed input and
// re-validates the code.

std::string p2p_to_json(const P2PStreamingCode& code, int indent = 2);
P2PStreamingCode p2p_from_json(std::string_view text);

std::string code_to_json(const MultiAccessCode& code, int indent = 2);
MultiAccessCode code_from_json(std::string_view text);

std::string report_to_json(const NetworkReport& report, int indent = 2);

}  // namespace streamrelay

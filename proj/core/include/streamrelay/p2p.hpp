#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "streamrelay/erasure.hpp"
#include "streamrelay/field.hpp"
#include "streamrelay/spectrum.hpp"

namespace streamrelay {

/// One diagonally-interleaved (N+m, m) MDS component. Each packet carries the
/// m fresh symbols of the current message followed by N parities. The
/// diagonal starting at time d holds s_d[0], s_{d+1}[1], ..., s_{d+m-1}[m-1]
/// and its parities are sent at times d+m, ..., d+m+N-1, so symbol j (0-based)
/// is guaranteed by delay N+m-1-j.
struct DimdsComponent {
  int erasures = 0;
  int width = 0;  ///< message symbols per slot (m)
  SystematicMdsMatrix generator;

  int blocklength() const { return erasures + width; }
  /// Guaranteed delay of symbol j; with N = 0 every symbol arrives at once.
  int structural_delay(int j) const { return erasures == 0 ? 0 : erasures + width - 1 - j; }
};

DimdsComponent build_dimds(int erasures, int width, const FieldConfig& cfg = FieldConfig::gf256());

/// Position of a message symbol inside the concatenation.
struct SymbolSlot {
  std::size_t component = 0;
  int index = 0;
  friend bool operator==(const SymbolSlot&, const SymbolSlot&) = default;
};

/// A message slot: k field symbols.
using Message = std::vector<Symbol>;

/// Concatenation of DIMDS components (plus optional all-zero padding) with a
/// map from message symbols to component positions. Every message symbol has
/// a declared delay no smaller than its structural delay; the gap is receiver
/// side buffering.
class P2PStreamingCode {
 public:
  P2PStreamingCode() = default;
  /// Validates the map (bijection onto component positions) and the declared
  /// delays. Throws InvalidArgument / InvalidPermutation.
  P2PStreamingCode(FieldConfig field, int erasures, std::vector<DimdsComponent> components, int padding,
                   std::vector<SymbolSlot> symbol_map, std::vector<int> declared_delays);

  int n() const { return n_; }
  int k() const { return static_cast<int>(symbol_map_.size()); }
  int erasures() const { return erasures_; }
  int padding() const { return padding_; }
  const FieldConfig& field_config() const { return field_.config(); }
  const GaloisField& field() const { return field_; }
  const std::vector<DimdsComponent>& components() const { return components_; }
  const std::vector<SymbolSlot>& symbol_map() const { return symbol_map_; }
  const std::vector<int>& declared_delays() const { return declared_; }

  int structural_delay(int j) const;
  int declared_delay(int j) const { return declared_[static_cast<std::size_t>(j)]; }
  /// Declared per-symbol spectrum and its grouping (descending).
  DelaySpectrum delays() const { return {declared_}; }
  DelaySpectrum structural_delays() const;
  GroupedSpectrum spectrum() const { return group(delays()); }
  int max_delay() const;
  /// Longest component blocklength, i.e. the number of slots one diagonal spans.
  int max_span() const;

  /// First packet position of component c.
  int packet_offset(std::size_t c) const { return offsets_[c]; }
  /// Message index stored at (component, index).
  int message_index(std::size_t c, int index) const { return inverse_[c][static_cast<std::size_t>(index)]; }

 private:
  GaloisField field_;
  int n_ = 0;
  int erasures_ = 0;
  int padding_ = 0;
  std::vector<DimdsComponent> components_;
  std::vector<SymbolSlot> symbol_map_;
  std::vector<int> declared_;
  std::vector<int> offsets_;
  std::vector<std::vector<int>> inverse_;
};

/// Lemma-style concatenation realizing achievable_spectrum(n, k, N) with
/// total width exactly n. When no field is given the smallest adequate one
/// is picked.
P2PStreamingCode build_spectrum_code(std::int64_t n, std::int64_t k, int erasures,
                                     std::optional<FieldConfig> cfg = std::nullopt);

/// Code whose declared spectrum equals `target` (one delay per message
/// symbol, in message order) using the fewest components. Throws Infeasible
/// if a target is below N, if the max-symbol inequalities fail at width n, or
/// if the integer construction needs more than n symbols per slot. The
/// resulting code has its native width, which may be below n.
P2PStreamingCode build_constrained_code(std::int64_t n, int erasures, const DelaySpectrum& target,
                                        std::optional<FieldConfig> cfg = std::nullopt);
P2PStreamingCode build_constrained_code(std::int64_t n, int erasures, const GroupedSpectrum& target,
                                        std::optional<FieldConfig> cfg = std::nullopt);

/// Packet sent at time t. `history[τ]` is the message of slot τ; slots before
/// 0 or beyond the history are zero.
std::vector<Symbol> encode_slot(const P2PStreamingCode& code, std::span<const Message> history, std::int64_t t);

/// Encodes a whole message stream into packets 0..history.size()-1.
PacketStream encode_stream(const P2PStreamingCode& code, std::span<const Message> history);

/// Streaming encoder keeping only the last max_span messages.
class Encoder {
 public:
  explicit Encoder(const P2PStreamingCode& code);
  std::vector<Symbol> push(const Message& message);
  std::int64_t time() const { return time_; }

 private:
  const P2PStreamingCode* code_;
  std::vector<Message> ring_;
  std::int64_t time_ = 0;
};

/// Recovers s_t[j] from packets up to slot t + declared_delay(j). Returns
/// nullopt when the received packets do not pin the symbol down.
std::optional<Symbol> decode_symbol(const P2PStreamingCode& code, const PacketStream& received, std::int64_t t,
                                    int j);

struct P2PFailure {
  ErasureSet pattern;
  std::int64_t t = 0;
  int j = 0;
};

struct P2PReport {
  std::uint64_t patterns_checked = 0;
  std::uint64_t failure_count = 0;
  std::vector<P2PFailure> failures;  ///< first few failures, sorted
  bool exhaustive = true;

  bool ok() const { return failure_count == 0; }
};

/// Default verification window: three times the longest deadline plus the
/// diagonal span.
int default_horizon(const P2PStreamingCode& code);

/// Checks every symbol whose deadline falls inside the horizon under every
/// pattern of at most `erasures` erasures (exhaustive), or under all bursts
/// plus seeded random patterns (sampled).
P2PReport verify_p2p(const P2PStreamingCode& code, int erasures, int horizon, const VerifyOptions& opts = {});

}  // namespace streamrelay

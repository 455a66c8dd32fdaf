#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cqmkit/mermin.hpp"

namespace cqmkit {

// Secret sharing over a Mermin argument: a dealer and N' players hold the N
// parties of the argument's GHZ experiment; the players' outcomes are their
// round secret keys. N - N' parties stay with the dealer.
struct ProtocolConfig {
  MerminArgument argument;
  std::size_t players = 2;  // N', with 2 <= N' < N
  double tau = 0.5;         // test-round probability, strictly inside (0, 1)
  double eps_max = 0.05;    // accepted noise parameter
  std::size_t rounds = 0;   // W
  std::uint64_t seed = 0;
};

struct RoundRecord {
  std::size_t context = 0;          // index into contexts(argument)
  std::vector<long long> outcomes;  // g_1 .. g_N as element indices
  bool test = false;
  std::optional<long long> ciphertext;  // secret rounds: p + sum of dealer keys
  std::optional<std::size_t> s_value;   // secret rounds: 0 control, else equation
};

// The plaintext is generated from the seed; the ephemeral pad that would turn
// a secret into it is also generated and only "broadcast" on success.
struct Transcript {
  std::vector<RoundRecord> rounds;
  // normalized test-round frequencies per context (raw, not symmetrized)
  std::vector<std::map<std::vector<long long>, Rat>> observed;
  double epsilon = 0.0;
  bool success = true;
  std::vector<long long> plaintext;  // true round plaintexts, one per secret round
  std::vector<long long> decoded;    // step-5 decode using all player keys
  std::vector<long long> pad;        // ephemeral key stream, one per secret round
  bool pad_broadcast = true;
};

// Everything Eve learns during the separable-state attack.
struct EveKnowledge {
  std::vector<std::vector<long long>> keys;  // per round: g_1 .. g_N'
  std::vector<long long> decoded;            // per secret round
};

// 1 - |K|^(N-1) min over promised-support entries of every context's table.
// This is the smallest eps such that observed = (1-eps) promised + eps noise.
// MissingContext when a context's table is absent or empty.
double noise_parameter(const std::vector<std::map<std::vector<long long>, Rat>>& observed,
                       const MerminArgument& argument);

// p = (c + g_1 + ... + g_N') - a^s, all arithmetic in K
long long decode_round(const MerminArgument& argument, std::size_t s_value, long long ciphertext,
                       const std::vector<long long>& player_keys);

// Noiseless trusted run: contexts uniform, outcomes sampled from the complex
// quantum model, test/secret split by tau. The reported epsilon pools each
// context's empirical mass over its promised coset (the promised distribution
// is uniform there) before taking the min; contexts without test data are
// skipped. Rounds draw from independent per-round streams of the seed.
Transcript run_honest(const ProtocolConfig& cfg);

// Separable-state attack available exactly when the argument is local: devices
// share h uniform on {sum h = 0} and output g_j = h_j + b_{m_j} for a solution
// b of the system. Test rounds match the promised statistics, and Eve, who
// knows h, recovers every key and plaintext. PreconditionFailed when the
// argument is contextual.
std::pair<Transcript, EveKnowledge> run_attack_noncontextual(const ProtocolConfig& cfg);

// Honest run except that on a given fraction of rounds the first player's
// subsystem is measured in the character basis before the context phases are
// applied, and the collapsed state forwarded. Intercepted rounds are simulated
// on the full state vector.
Transcript eavesdrop_intercept(const ProtocolConfig& cfg, double eavesdrop_rate);

}  // namespace cqmkit

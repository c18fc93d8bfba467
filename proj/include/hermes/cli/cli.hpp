#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hermes/protocol/deployment.hpp"

namespace hermes::cli {

/// Exit codes shared with the simulation harness.
inline constexpr int kExitOk = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kStateEnv = "HERMES_STATE_DIR";
inline constexpr const char* kDefaultStateDir = "hermes-state";

enum class CircuitKind { kRss, kAudit };

const char* circuit_name(CircuitKind kind);
CircuitKind parse_circuit(const std::string& name);
std::uint8_t app_of(CircuitKind kind);

/// Layout of a state directory:
///
///   ea.key  ea.pub                 enforcement authority key pair
///   vehicles/<vid>.key, .cert      provisioned provers
///   circuits/<name>/               params.json, r1cs.bin, pk.bin, vk.bin, layout.bin, public.txt
///                                  (audit also keeps challenge.txt)
///   nonces.json                    verifier nonce store
struct StatePaths {
  std::filesystem::path root;

  std::filesystem::path ea_key() const { return root / "ea.key"; }
  std::filesystem::path ea_pub() const { return root / "ea.pub"; }
  std::filesystem::path vehicle_key(const std::string& vid) const { return root / "vehicles" / (vid + ".key"); }
  std::filesystem::path vehicle_cert(const std::string& vid) const { return root / "vehicles" / (vid + ".cert"); }
  std::filesystem::path circuit_dir(CircuitKind kind) const { return root / "circuits" / circuit_name(kind); }
  std::filesystem::path nonces() const { return root / "nonces.json"; }

  /// --state wins, then HERMES_STATE_DIR, then ./hermes-state.
  static StatePaths resolve(const std::optional<std::string>& flag);
};

struct BenchStage {
  std::string name;
  double mean_ms = 0;
  double share_percent = 0;
};

/// Per-stage wall-clock means over `runs` runs and their shares of the total.
struct BenchReport {
  std::size_t runs = 0;
  std::vector<BenchStage> stages;

  /// "stage,mean_ms,share_percent" then one row per stage.
  std::string csv() const;
  std::string table() const;
};

/// Shares from per-stage totals; every stage gets 0 when the total is 0.
BenchReport make_report(std::size_t runs, const std::vector<std::pair<std::string, double>>& total_ms);

/// Witness generation, proof generation and proof verification timed separately per run.
BenchReport run_bench(const protocol::Deployment& dep, const r1cs::Assignment& inputs, std::size_t runs, Rng& rng);

/// Loads a set-up circuit from the state directory. The circuit is rebuilt from its
/// parameters and must hash to the stored r1cs; the proving key must carry the same hash.
/// ParseError or UsageError otherwise.
protocol::Deployment load_deployment(const StatePaths& paths, CircuitKind kind);

/// Runs one command line (args exclude the program name). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hermes::cli

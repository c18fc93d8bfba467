#pragma once

// Discrete-event broadcast harness: provers, verifiers and adversaries on a lossy bus.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hermes/circuits/audit.hpp"
#include "hermes/circuits/rss.hpp"
#include "hermes/protocol/deployment.hpp"

namespace hermes::sim {

enum class App { kRss, kAudit };
const char* app_name(App a);
App parse_app(std::string_view name);
std::uint8_t app_id(App a);

enum class Attack { kReplay, kStaleTimestamp, kCrossContext, kTamper };
const char* attack_name(Attack a);
Attack parse_attack(std::string_view name);

struct ProverSpec {
  std::string name;
  App app = App::kRss;
};

struct VerifierSpec {
  std::string name;
  std::vector<App> apps{App::kRss, App::kAudit};  // circuits this node has registered
  std::optional<std::int64_t> window;              // seconds; scenario default when unset
};

struct AdversarySpec {
  std::string name;
  Attack attack = Attack::kReplay;
  std::size_t copies = 1;       // re-broadcasts per captured package
  std::int64_t delay_ms = 0;    // 0 selects the attack's default
};

/// Each transmission is dropped with `drop` and otherwise arrives after a latency drawn
/// uniformly from [latency_min_ms, latency_max_ms].
struct BusParams {
  double drop = 0;
  std::int64_t latency_min_ms = 5;
  std::int64_t latency_max_ms = 100;
};

struct BroadcastEvent {
  std::int64_t at_ms = 0;
  std::string prover;
};

struct SimScenario {
  std::string name = "custom";
  std::uint64_t seed = 1;
  std::int64_t start = 1700000000;  // logical clock origin, seconds
  std::int64_t window = 5;
  BusParams bus;
  std::vector<ProverSpec> provers;
  std::vector<VerifierSpec> verifiers;
  std::vector<AdversarySpec> adversaries;
  std::vector<BroadcastEvent> schedule;

  /// UsageError on duplicate or unknown names, bad bus parameters, or a replay delay that
  /// could overtake the original.
  void validate() const;
};

/// Line format, '#' comments:
///
///   scenario <name>
///   seed <n>
///   start <unix seconds>
///   window <seconds>
///   bus drop=<p> latency=<min>..<max>
///   prover <name> app=<rss|audit>
///   verifier <name> [apps=rss,audit] [window=<s>]
///   adversary <name> attack=<replay|stale-timestamp|cross-context|tamper> [copies=<n>] [delay=<ms>]
///   broadcast <at ms> <prover>
///   every <period ms> <prover> count=<n> [from=<ms>]
SimScenario parse_scenario(std::string_view text);
std::string format_scenario(const SimScenario& s);

inline constexpr std::array<std::string_view, 3> kTemplates = {"occluded-stop-sign", "replay-storm", "mixed-fleet"};

/// Overrides: seed, start, window, drop, latency_min, latency_max, broadcasts, verifiers.
SimScenario make_scenario(std::string_view name, const std::map<std::string, std::string>& overrides = {});

/// Keys, certificates and circuits shared by every run. Built once from a seed.
class SimEnvironment {
 public:
  explicit SimEnvironment(std::uint64_t seed = 1, bool with_audit = true);

  const protocol::SigningKey& ea() const { return ea_; }
  const protocol::Deployment& deployment(App a) const;
  bool has(App a) const { return a == App::kRss ? rss_dep_ != nullptr : audit_dep_ != nullptr; }
  const circuits::RssConfig& rss_config() const { return rss_cfg_; }
  const circuits::AuditScenario& audit_scenario() const { return audit_scenario_; }

  /// Deterministic key and EA-issued certificate for a node name.
  struct Identity {
    protocol::SigningKey key;
    protocol::Certificate cert;
  };
  const Identity& identity(const std::string& name) const;

 private:
  std::uint64_t seed_;
  protocol::SigningKey ea_;
  circuits::RssConfig rss_cfg_;
  circuits::AuditScenario audit_scenario_;
  std::unique_ptr<protocol::Deployment> rss_dep_, audit_dep_;
  mutable std::map<std::string, Identity> ids_;
};

struct NodeStats {
  std::string name;
  std::string role;  // prover, verifier, adversary
  std::size_t sent = 0;
  std::size_t received = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::map<std::string, std::size_t> reasons;
  std::int64_t latency_sum_ms = 0;
  std::int64_t latency_max_ms = 0;
  bool stop_sign_flag = false;  // toy local map: a verified stop-sign detection
};

struct Delivery {
  std::size_t message = 0;
  std::string origin;  // "honest" or the attack name
  std::string sender, receiver;
  std::int64_t sent_ms = 0, arrive_ms = 0;  // arrive_ms = -1 when lost
  std::string outcome;   // accept, a reject reason, or lost
  std::string expected;  // same vocabulary
};

struct SimReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<NodeStats> nodes;
  std::vector<Delivery> deliveries;  // verifier-bound transmissions only

  std::size_t messages = 0;  // transmissions addressed to verifiers
  std::size_t delivered = 0;
  std::size_t lost = 0;
  std::size_t accepts = 0;
  std::size_t rejects = 0;

  std::size_t honest_broadcasts = 0;
  std::size_t honest_failures = 0;  // honest, provisioned, in window, and not accepted
  std::size_t adversarial_broadcasts = 0;
  std::size_t attack_successes = 0;
  std::size_t benign_replays = 0;    // replays accepted by a verifier that lost the original
  std::size_t wrong_reasons = 0;     // rejected, but not at the expected stage

  /// accepts + rejects + lost = messages = delivered + lost.
  bool balanced() const;
  const NodeStats& node(const std::string& name) const;
  std::size_t count(const std::string& receiver, const std::string& outcome) const;

  std::string summary() const;
  std::string nodes_csv() const;
  std::string deliveries_csv() const;
  /// Summary and both tables; identical seeds give identical strings.
  std::string serialize() const;
};

/// Runs the schedule on logical time. Package timestamps and verifier clocks are
/// start + floor(ms / 1000).
SimReport run_scenario(const SimScenario& scenario, const SimEnvironment& env);

}  // namespace hermes::sim

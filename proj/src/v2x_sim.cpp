#include "hermes/sim/sim.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <queue>
#include <set>
#include <sstream>

namespace hermes::sim {

using namespace protocol;

const char* app_name(App a) { return a == App::kRss ? "rss" : "audit"; }

App parse_app(std::string_view name) {
  if (name == "rss") return App::kRss;
  if (name == "audit") return App::kAudit;
  throw UsageError("unknown app '" + std::string(name) + "'");
}

std::uint8_t app_id(App a) { return a == App::kRss ? kAppPerception : kAppAudit; }

const char* attack_name(Attack a) {
  switch (a) {
    case Attack::kReplay: return "replay";
    case Attack::kStaleTimestamp: return "stale-timestamp";
    case Attack::kCrossContext: return "cross-context";
    case Attack::kTamper: return "tamper";
  }
  return "?";
}

Attack parse_attack(std::string_view name) {
  for (Attack a : {Attack::kReplay, Attack::kStaleTimestamp, Attack::kCrossContext, Attack::kTamper}) {
    if (name == attack_name(a)) return a;
  }
  throw UsageError("unknown attack '" + std::string(name) + "'");
}

namespace {

VerifierSpec verifier(std::string name, std::vector<App> apps = {App::kRss, App::kAudit}) {
  VerifierSpec v;
  v.name = std::move(name);
  v.apps = std::move(apps);
  return v;
}

AdversarySpec adversary(std::string name, Attack attack, std::size_t copies) {
  AdversarySpec a;
  a.name = std::move(name);
  a.attack = attack;
  a.copies = copies;
  return a;
}

std::int64_t default_delay(const AdversarySpec& a, const SimScenario& s) {
  if (a.delay_ms > 0) return a.delay_ms;
  switch (a.attack) {
    case Attack::kReplay: return s.bus.latency_max_ms + 150;
    case Attack::kStaleTimestamp: return (s.window + 2) * 1000;
    default: return 1;
  }
}

}  // namespace

void SimScenario::validate() const {
  std::set<std::string> names;
  auto add = [&](const std::string& n) {
    if (n.empty()) throw UsageError("node names must be non-empty");
    if (!names.insert(n).second) throw UsageError("duplicate node name '" + n + "'");
  };
  for (const auto& p : provers) add(p.name);
  for (const auto& v : verifiers) {
    add(v.name);
    if (v.window && *v.window <= 0) throw UsageError("verifier window must be positive");
  }
  for (const auto& a : adversaries) {
    add(a.name);
    if (a.copies == 0) throw UsageError("adversary copies must be at least 1");
    if (a.delay_ms < 0) throw UsageError("adversary delay must be non-negative");
    if (a.attack == Attack::kReplay && default_delay(a, *this) <= bus.latency_max_ms) {
      throw UsageError("replay delay must exceed the maximum bus latency");
    }
  }
  if (!(bus.drop >= 0 && bus.drop <= 1)) throw UsageError("drop probability must lie in [0, 1]");
  if (bus.latency_min_ms < 0 || bus.latency_max_ms < bus.latency_min_ms) throw UsageError("bad latency bounds");
  if (window <= 0) throw UsageError("window must be positive");
  if (start < 0) throw UsageError("start must be non-negative");
  for (const auto& b : schedule) {
    if (b.at_ms < 0) throw UsageError("broadcast times must be non-negative");
    if (std::none_of(provers.begin(), provers.end(), [&](const ProverSpec& p) { return p.name == b.prover; })) {
      throw UsageError("broadcast names unknown prover '" + b.prover + "'");
    }
  }
}

// ---------------------------------------------------------------------------------------
// Scenario text

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) next = s.size();
    if (next > pos) out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

template <typename T>
T number(std::string_view s, const char* what) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError(std::string("bad ") + what + ": " + std::string(s));
  return v;
}

double real(std::string_view s, const char* what) {
  std::string str(s);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(str, &used);
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + ": " + str);
  }
  if (used != str.size()) throw ParseError(std::string("bad ") + what + ": " + str);
  return v;
}

std::map<std::string, std::string> options(const std::vector<std::string_view>& toks, std::size_t from) {
  std::map<std::string, std::string> out;
  for (std::size_t i = from; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value: " + std::string(toks[i]));
    out.emplace(std::string(toks[i].substr(0, eq)), std::string(toks[i].substr(eq + 1)));
  }
  return out;
}

void reject_unknown(const std::map<std::string, std::string>& opts, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : opts) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      throw ParseError("unknown option '" + k + "'");
    }
  }
}

}  // namespace

SimScenario parse_scenario(std::string_view text) {
  SimScenario s;
  for (std::string_view line : split(text, '\n')) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = split(line, ' ');
    std::erase_if(toks, [](std::string_view t) { return t.empty() || t == "\r"; });
    if (toks.empty()) continue;
    const std::string_view kw = toks[0];
    auto need = [&](std::size_t n) {
      if (toks.size() < n) throw ParseError("too few fields: " + std::string(line));
    };
    if (kw == "scenario") {
      need(2);
      s.name = std::string(toks[1]);
    } else if (kw == "seed") {
      need(2);
      s.seed = number<std::uint64_t>(toks[1], "seed");
    } else if (kw == "start") {
      need(2);
      s.start = number<std::int64_t>(toks[1], "start");
    } else if (kw == "window") {
      need(2);
      s.window = number<std::int64_t>(toks[1], "window");
    } else if (kw == "bus") {
      auto o = options(toks, 1);
      reject_unknown(o, {"drop", "latency"});
      if (o.contains("drop")) s.bus.drop = real(o["drop"], "drop");
      if (o.contains("latency")) {
        const std::string& l = o["latency"];
        auto dots = l.find("..");
        if (dots == std::string::npos) throw ParseError("latency needs <min>..<max>");
        s.bus.latency_min_ms = number<std::int64_t>(std::string_view(l).substr(0, dots), "latency");
        s.bus.latency_max_ms = number<std::int64_t>(std::string_view(l).substr(dots + 2), "latency");
      }
    } else if (kw == "prover") {
      need(2);
      auto o = options(toks, 2);
      reject_unknown(o, {"app"});
      s.provers.push_back({std::string(toks[1]), o.contains("app") ? parse_app(o["app"]) : App::kRss});
    } else if (kw == "verifier") {
      need(2);
      auto o = options(toks, 2);
      reject_unknown(o, {"apps", "window"});
      VerifierSpec v = verifier(std::string(toks[1]));
      if (o.contains("apps")) {
        v.apps.clear();
        if (o["apps"] != "none") {
          for (auto a : split(o["apps"], ',')) v.apps.push_back(parse_app(a));
        }
      }
      if (o.contains("window")) v.window = number<std::int64_t>(o["window"], "window");
      s.verifiers.push_back(std::move(v));
    } else if (kw == "adversary") {
      need(2);
      auto o = options(toks, 2);
      reject_unknown(o, {"attack", "copies", "delay"});
      if (!o.contains("attack")) throw ParseError("adversary needs attack=");
      AdversarySpec a = adversary(std::string(toks[1]), parse_attack(o["attack"]), 1);
      if (o.contains("copies")) a.copies = number<std::size_t>(o["copies"], "copies");
      if (o.contains("delay")) a.delay_ms = number<std::int64_t>(o["delay"], "delay");
      s.adversaries.push_back(std::move(a));
    } else if (kw == "broadcast") {
      need(3);
      s.schedule.push_back({number<std::int64_t>(toks[1], "time"), std::string(toks[2])});
    } else if (kw == "every") {
      need(3);
      auto o = options(toks, 3);
      reject_unknown(o, {"count", "from"});
      const auto period = number<std::int64_t>(toks[1], "period");
      const auto count = o.contains("count") ? number<std::size_t>(o["count"], "count") : 1;
      const auto from = o.contains("from") ? number<std::int64_t>(o["from"], "from") : 0;
      for (std::size_t i = 0; i < count; ++i) {
        s.schedule.push_back({from + period * static_cast<std::int64_t>(i), std::string(toks[2])});
      }
    } else {
      throw ParseError("unknown scenario line: " + std::string(line));
    }
  }
  std::stable_sort(s.schedule.begin(), s.schedule.end(),
                   [](const BroadcastEvent& a, const BroadcastEvent& b) { return a.at_ms < b.at_ms; });
  s.validate();
  return s;
}

std::string format_scenario(const SimScenario& s) {
  std::ostringstream os;
  os << "scenario " << s.name << "\nseed " << s.seed << "\nstart " << s.start << "\nwindow " << s.window << '\n';
  os << "bus drop=" << s.bus.drop << " latency=" << s.bus.latency_min_ms << ".." << s.bus.latency_max_ms << '\n';
  for (const auto& p : s.provers) os << "prover " << p.name << " app=" << app_name(p.app) << '\n';
  for (const auto& v : s.verifiers) {
    os << "verifier " << v.name << " apps=";
    if (v.apps.empty()) os << "none";
    for (std::size_t i = 0; i < v.apps.size(); ++i) os << (i ? "," : "") << app_name(v.apps[i]);
    if (v.window) os << " window=" << *v.window;
    os << '\n';
  }
  for (const auto& a : s.adversaries) {
    os << "adversary " << a.name << " attack=" << attack_name(a.attack) << " copies=" << a.copies;
    if (a.delay_ms > 0) os << " delay=" << a.delay_ms;
    os << '\n';
  }
  for (const auto& b : s.schedule) os << "broadcast " << b.at_ms << ' ' << b.prover << '\n';
  return os.str();
}

SimScenario make_scenario(std::string_view name, const std::map<std::string, std::string>& overrides) {
  SimScenario s;
  s.name = std::string(name);
  if (name == "occluded-stop-sign") {
    // The leader sees the sign; the trailer's view is blocked and relies on the proof.
    s.provers = {{"leader", App::kRss}};
    s.verifiers = {verifier("trailer", {App::kRss})};
    s.schedule = {{0, "leader"}};
  } else if (name == "replay-storm") {
    s.bus.drop = 0.05;
    s.provers = {{"ego", App::kRss}};
    s.verifiers = {verifier("v1"), verifier("v2"), verifier("v3")};
    s.adversaries = {adversary("replayer", Attack::kReplay, 2), adversary("delayer", Attack::kStaleTimestamp, 1)};
    for (int i = 0; i < 10; ++i) s.schedule.push_back({500 * i, "ego"});
  } else if (name == "mixed-fleet") {
    s.bus.drop = 0.1;
    s.provers = {{"car1", App::kRss}, {"car2", App::kRss}, {"auditee", App::kAudit}};
    s.verifiers = {verifier("v1"), verifier("v2"), verifier("rsu", {App::kRss})};
    s.adversaries = {adversary("replayer", Attack::kReplay, 1), adversary("delayer", Attack::kStaleTimestamp, 1),
                     adversary("wrapper", Attack::kCrossContext, 1), adversary("mangler", Attack::kTamper, 2)};
    for (int i = 0; i < 4; ++i) {
      s.schedule.push_back({700 * i, "car1"});
      s.schedule.push_back({700 * i + 350, "car2"});
    }
    s.schedule.push_back({1000, "auditee"});
  } else {
    throw UsageError("unknown scenario template '" + std::string(name) + "'");
  }

  for (const auto& [key, value] : overrides) {
    if (key == "seed") {
      s.seed = number<std::uint64_t>(value, "seed");
    } else if (key == "start") {
      s.start = number<std::int64_t>(value, "start");
    } else if (key == "window") {
      s.window = number<std::int64_t>(value, "window");
    } else if (key == "drop") {
      s.bus.drop = real(value, "drop");
    } else if (key == "latency_min") {
      s.bus.latency_min_ms = number<std::int64_t>(value, "latency_min");
    } else if (key == "latency_max") {
      s.bus.latency_max_ms = number<std::int64_t>(value, "latency_max");
    } else if (key == "broadcasts") {
      // n broadcasts per prover, 500 ms apart, provers staggered.
      const auto n = number<std::size_t>(value, "broadcasts");
      s.schedule.clear();
      for (std::size_t p = 0; p < s.provers.size(); ++p) {
        for (std::size_t i = 0; i < n; ++i) {
          s.schedule.push_back({static_cast<std::int64_t>(500 * i + 137 * p), s.provers[p].name});
        }
      }
    } else if (key == "verifiers") {
      const auto n = number<std::size_t>(value, "verifiers");
      s.verifiers.clear();
      for (std::size_t i = 0; i < n; ++i) s.verifiers.push_back(verifier("v" + std::to_string(i + 1)));
    } else {
      throw UsageError("unknown override '" + key + "'");
    }
  }
  std::stable_sort(s.schedule.begin(), s.schedule.end(),
                   [](const BroadcastEvent& a, const BroadcastEvent& b) { return a.at_ms < b.at_ms; });
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------------------
// Environment


SimEnvironment::SimEnvironment(std::uint64_t seed, bool with_audit)
    : seed_(seed), audit_scenario_(circuits::five_image_audit_scenario()) {
  Rng rng(seed, "sim/environment");
  ea_ = keygen(rng);
  Rng setup_rng = rng.fork("setup/rss");
  rss_dep_ = std::make_unique<Deployment>(circuits::build_rss_circuit(rss_cfg_), kAppPerception, setup_rng);
  if (with_audit) {
    Rng audit_rng = rng.fork("setup/audit");
    audit_dep_ =
        std::make_unique<Deployment>(circuits::build_audit_circuit(audit_scenario_.challenge), kAppAudit, audit_rng);
  }
}

const Deployment& SimEnvironment::deployment(App a) const {
  if (!has(a)) throw UsageError(std::string("environment has no ") + app_name(a) + " circuit");
  return a == App::kRss ? *rss_dep_ : *audit_dep_;
}

const SimEnvironment::Identity& SimEnvironment::identity(const std::string& name) const {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  Rng rng(seed_, "sim/identity/" + name);
  SigningKey key = keygen(rng);
  Certificate cert = issue_certificate(ea_, name, key.vk, 0, std::uint64_t{1} << 40);
  return ids_.emplace(name, Identity{key, std::move(cert)}).first->second;
}

// ---------------------------------------------------------------------------------------
// Report

bool SimReport::balanced() const {
  return accepts + rejects + lost == messages && delivered + lost == messages && deliveries.size() == messages;
}

const NodeStats& SimReport::node(const std::string& name) const {
  for (const auto& n : nodes) {
    if (n.name == name) return n;
  }
  throw UsageError("no node named '" + name + "'");
}

std::size_t SimReport::count(const std::string& receiver, const std::string& outcome) const {
  return static_cast<std::size_t>(std::count_if(deliveries.begin(), deliveries.end(), [&](const Delivery& d) {
    return d.receiver == receiver && d.outcome == outcome;
  }));
}

std::string SimReport::summary() const {
  std::ostringstream os;
  os << "scenario " << scenario << " seed " << seed << '\n'
     << "messages " << messages << " delivered " << delivered << " lost " << lost << '\n'
     << "accepts " << accepts << " rejects " << rejects << '\n'
     << "honest_broadcasts " << honest_broadcasts << " honest_failures " << honest_failures << '\n'
     << "adversarial_broadcasts " << adversarial_broadcasts << " attack_successes " << attack_successes
     << " benign_replays " << benign_replays << " wrong_reasons " << wrong_reasons << '\n'
     << "balanced " << (balanced() ? "yes" : "no") << '\n';
  return os.str();
}

std::string SimReport::nodes_csv() const {
  std::ostringstream os;
  os << "node,role,sent,received,accepted,rejected,mean_latency_ms,max_latency_ms,stop_sign,reasons\n";
  for (const auto& n : nodes) {
    os << n.name << ',' << n.role << ',' << n.sent << ',' << n.received << ',' << n.accepted << ',' << n.rejected << ','
       << std::fixed << std::setprecision(2)
       << (n.received ? static_cast<double>(n.latency_sum_ms) / static_cast<double>(n.received) : 0.0) << ','
       << n.latency_max_ms << ',' << (n.stop_sign_flag ? 1 : 0) << ',';
    bool first = true;
    for (const auto& [reason, c] : n.reasons) {
      os << (first ? "" : ";") << reason << ':' << c;
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

std::string SimReport::deliveries_csv() const {
  std::ostringstream os;
  os << "message,origin,sender,receiver,sent_ms,arrive_ms,latency_ms,outcome,expected\n";
  for (const auto& d : deliveries) {
    os << d.message << ',' << d.origin << ',' << d.sender << ',' << d.receiver << ',' << d.sent_ms << ',' << d.arrive_ms
       << ',' << (d.arrive_ms < 0 ? -1 : d.arrive_ms - d.sent_ms) << ',' << d.outcome << ',' << d.expected << '\n';
  }
  return os.str();
}

std::string SimReport::serialize() const { return summary() + '\n' + nodes_csv() + '\n' + deliveries_csv(); }

// ---------------------------------------------------------------------------------------
// Event loop

namespace {

constexpr const char* kAccept = "accept";
constexpr const char* kLost = "lost";

/// What a well-behaved verifier must do with a message; flags mark the first check a
/// forgery breaks.
struct Message {
  std::size_t id = 0;
  std::string origin;
  std::string sender;
  Bytes bytes;
  App claimed = App::kRss;  // circuit the package names
  Nonce nonce{};
  std::int64_t timestamp = 0;
  bool breaks_cert = false;
  bool breaks_context = false;
  bool breaks_signature = false;
  bool breaks_proof = false;
};

struct Event {
  enum Kind { kBroadcast, kArrive, kAdversarySend };
  std::int64_t at = 0;
  std::uint64_t seq = 0;
  Kind kind = kBroadcast;
  std::size_t a = 0;  // schedule index, message id
  std::size_t b = 0;  // receiver node for arrivals
  std::int64_t sent = 0;
  std::size_t delivery = 0;

  bool operator>(const Event& o) const { return at != o.at ? at > o.at : seq > o.seq; }
};

struct VerifierNode {
  VerifierSpec spec;
  std::unique_ptr<VerifierState> state;
  std::set<Nonce> accepted;  // independent record for the expectation
  std::int64_t window = 5;
  bool has(App a) const { return std::find(spec.apps.begin(), spec.apps.end(), a) != spec.apps.end(); }
};

struct AdversaryNode {
  AdversarySpec spec;
  std::size_t captured = 0;
};

enum class Tamper {
  kProof,
  kPublicInput,
  kCommitment,
  kTimestamp,
  kNonce,
  kCertVid,
  kCertValidity,
  kVkSig,
  kVkHash,
  kR1csHash,
  kSignature,
  kCommitmentBoth,
  kTimestampBoth,
  kNonceBoth,
};
constexpr std::size_t kTamperKinds = 14;

class Simulation {
 public:
  Simulation(const SimScenario& s, const SimEnvironment& env) : s_(s), env_(env), master_(s.seed, "sim/run") {
    s_.validate();
    bus_rng_ = std::make_unique<Rng>(master_.fork("bus"));
    prove_rng_ = std::make_unique<Rng>(master_.fork("prove"));
    adv_rng_ = std::make_unique<Rng>(master_.fork("adversary"));
    report_.scenario = s.name;
    report_.seed = s.seed;
    for (const auto& p : s.provers) {
      env.deployment(p.app);  // throws when the environment lacks the circuit
      add_node(p.name, "prover");
    }
    for (const auto& v : s.verifiers) {
      VerifierNode node;
      node.spec = v;
      node.window = v.window.value_or(s.window);
      node.state = std::make_unique<VerifierState>(env.ea().vk, node.window);
      for (App a : v.apps) {
        if (env.has(a)) env.deployment(a).register_with(*node.state);
      }
      verifiers_.push_back(std::move(node));
      add_node(v.name, "verifier");
    }
    for (const auto& a : s.adversaries) {
      adversaries_.push_back({a});
      add_node(a.name, "adversary");
    }
    for (std::size_t i = 0; i < s.schedule.size(); ++i) push({s.schedule[i].at_ms, 0, Event::kBroadcast, i});
  }

  SimReport run() {
    while (!queue_.empty()) {
      Event e = queue_.top();
      queue_.pop();
      switch (e.kind) {
        case Event::kBroadcast: on_broadcast(e); break;
        case Event::kArrive: on_arrive(e); break;
        case Event::kAdversarySend: send(e.a, e.at, /*to_adversaries=*/false); break;
      }
    }
    return std::move(report_);
  }

 private:
  void add_node(const std::string& name, const char* role) {
    index_[name] = report_.nodes.size();
    NodeStats n;
    n.name = name;
    n.role = role;
    report_.nodes.push_back(std::move(n));
  }

  NodeStats& stats(const std::string& name) { return report_.nodes[index_.at(name)]; }

  void push(Event e) {
    e.seq = seq_++;
    queue_.push(e);
  }

  std::uint64_t clock(std::int64_t ms) const { return static_cast<std::uint64_t>(s_.start + ms / 1000); }

  const ProverSpec& prover(const std::string& name) const {
    return *std::find_if(s_.provers.begin(), s_.provers.end(), [&](const ProverSpec& p) { return p.name == name; });
  }

  r1cs::Assignment honest_inputs(App app, std::uint64_t now, Rng& rng) {
    const Nonce nonce = random_nonce(rng);
    const Fr s_sec = commitment::BlindingFactor::sample(rng).value;
    if (app == App::kRss) {
      circuits::RssScenario sc = circuits::worked_rss_scenario();
      sc.speed = 8 + 12 * rng.unit();
      sc.current_distance = 10 + 50 * rng.unit();
      sc.probability = 0.5 + 0.5 * rng.unit();
      return circuits::make_rss_inputs(sc, env_.rss_config(), now, nonce, s_sec).assignment();
    }
    const auto& sc = env_.audit_scenario();
    return circuits::make_audit_inputs(sc.challenge, sc.detections, now, nonce, s_sec).assignment(sc.challenge);
  }

  std::size_t add_message(Message m) {
    m.id = messages_.size();
    messages_.push_back(std::move(m));
    return messages_.size() - 1;
  }

  void on_broadcast(const Event& e) {
    const BroadcastEvent& b = s_.schedule[e.a];
    const ProverSpec& p = prover(b.prover);
    const auto& id = env_.identity(p.name);
    const Deployment& dep = env_.deployment(p.app);
    ProofPackage pkg = create_package(dep.prover(id.key, id.cert), honest_inputs(p.app, clock(e.at), *prove_rng_),
                                      *prove_rng_);
    Message m;
    m.origin = "honest";
    m.sender = p.name;
    m.bytes = pkg.serialize();
    m.claimed = p.app;
    m.nonce = pkg.nonce;
    m.timestamp = static_cast<std::int64_t>(pkg.timestamp);
    const std::size_t id_msg = add_message(std::move(m));
    ++report_.honest_broadcasts;
    send(id_msg, e.at, /*to_adversaries=*/true);
  }

  void send(std::size_t msg, std::int64_t now, bool to_adversaries) {
    const Message& m = messages_[msg];
    ++stats(m.sender).sent;
    if (m.origin != "honest") ++report_.adversarial_broadcasts;
    auto transmit = [&](std::size_t receiver, const std::string& name, bool verifier) {
      const bool dropped = bus_rng_->unit() < s_.bus.drop;
      const std::int64_t span = s_.bus.latency_max_ms - s_.bus.latency_min_ms + 1;
      const std::int64_t latency = s_.bus.latency_min_ms + static_cast<std::int64_t>(bus_rng_->uniform(span));
      std::size_t delivery = 0;
      if (verifier) {
        ++report_.messages;
        delivery = report_.deliveries.size();
        report_.deliveries.push_back({msg, m.origin, m.sender, name, now, -1, kLost, ""});
      }
      if (dropped) {
        if (verifier) ++report_.lost;
        return;
      }
      Event e{now + latency, 0, Event::kArrive, msg, receiver, now, delivery};
      push(e);
    };
    for (std::size_t v = 0; v < verifiers_.size(); ++v) transmit(v, verifiers_[v].spec.name, true);
    if (to_adversaries) {
      for (std::size_t a = 0; a < adversaries_.size(); ++a) {
        transmit(verifiers_.size() + a, adversaries_[a].spec.name, false);
      }
    }
  }

  std::string expected_outcome(const Message& m, const VerifierNode& v, std::int64_t now) const {
    if (m.breaks_cert) return reason_name(RejectReason::kCertificate);
    if (!v.has(m.claimed)) return reason_name(RejectReason::kContext);
    if (m.breaks_context) return reason_name(RejectReason::kContext);
    if (m.breaks_signature) return reason_name(RejectReason::kSignature);
    const std::int64_t skew = now >= m.timestamp ? now - m.timestamp : m.timestamp - now;
    if (skew > v.window) return reason_name(RejectReason::kStale);
    if (v.accepted.contains(m.nonce)) return reason_name(RejectReason::kReplay);
    if (m.breaks_proof) return reason_name(RejectReason::kProof);
    return kAccept;
  }

  void on_arrive(const Event& e) {
    const Message& m = messages_[e.a];
    if (e.b >= verifiers_.size()) {
      ++stats(adversaries_[e.b - verifiers_.size()].spec.name).received;
      on_capture(adversaries_[e.b - verifiers_.size()], m, e.at);
      return;
    }
    VerifierNode& v = verifiers_[e.b];
    NodeStats& st = stats(v.spec.name);
    Delivery& d = report_.deliveries[e.delivery];
    const std::int64_t now = static_cast<std::int64_t>(clock(e.at));
    d.arrive_ms = e.at;
    d.expected = expected_outcome(m, v, now);
    ++report_.delivered;
    ++st.received;
    st.latency_sum_ms += e.at - e.sent;
    st.latency_max_ms = std::max(st.latency_max_ms, e.at - e.sent);

    ProofPackage pkg;
    VerifyResult res;
    try {
      pkg = ProofPackage::deserialize(m.bytes);
      res = verify_package(*v.state, pkg, now);
    } catch (const ParseError& err) {
      res = {false, RejectReason::kNone, err.what()};
    }
    if (res.accepted) {
      d.outcome = kAccept;
      ++report_.accepts;
      ++st.accepted;
      v.accepted.insert(pkg.nonce);
      const Deployment& rss = env_.deployment(App::kRss);
      if (pkg.r1cs_hash == rss.r1cs_hash()) {
        const std::size_t id = rss.system().find_wire("ID") - 1;
        if (pkg.public_inputs[id] == Fr::from_u64(env_.rss_config().stop_sign_id)) st.stop_sign_flag = true;
      }
    } else {
      d.outcome = res.reason == RejectReason::kNone ? "malformed" : reason_name(res.reason);
      ++report_.rejects;
      ++st.rejected;
      ++st.reasons[d.outcome];
    }

    if (d.outcome == d.expected) {
      if (m.origin != "honest" && d.outcome == kAccept) ++report_.benign_replays;
    } else if (m.origin == "honest") {
      ++report_.honest_failures;
    } else if (d.outcome == kAccept) {
      ++report_.attack_successes;
    } else {
      ++report_.wrong_reasons;
    }
  }

  // --- adversaries -----------------------------------------------------------------------

  void schedule_forgery(const AdversaryNode& a, Message m, std::int64_t at) {
    m.sender = a.spec.name;
    m.origin = attack_name(a.spec.attack);
    const std::size_t id = add_message(std::move(m));
    push({at, 0, Event::kAdversarySend, id});
  }

  void resign(ProofPackage& pkg, App app, const std::string& who) {
    const auto& id = env_.identity(who);
    pkg.cert = id.cert;
    pkg.vk_sig = id.key.vk;
    Bytes payload = assemble_payload(sign_tag(app_id(app)), pkg.r1cs_hash, pkg.vk_hash, pkg.cert, pkg.proof,
                                     pkg.commitment, pkg.timestamp, pkg.nonce);
    pkg.sigma = sign(id.key, payload);
  }

  void on_capture(AdversaryNode& a, Message m, std::int64_t now) {  // by value: forging appends to messages_
    if (m.origin != "honest") return;
    const std::size_t k = a.captured++;
    const std::int64_t delay = default_delay(a.spec, s_);
    for (std::size_t c = 0; c < a.spec.copies; ++c) {
      const std::int64_t at = now + delay * static_cast<std::int64_t>(c + 1);
      switch (a.spec.attack) {
        case Attack::kReplay:
        case Attack::kStaleTimestamp: {
          Message copy = m;
          schedule_forgery(a, std::move(copy), at);
          break;
        }
        case Attack::kCrossContext:
          schedule_forgery(a, cross_context(a, m, k * a.spec.copies + c), at);
          break;
        case Attack::kTamper:
          schedule_forgery(a, tamper(a, m, k * a.spec.copies + c), at);
          break;
      }
    }
  }

  Message cross_context(const AdversaryNode& a, const Message& m, std::size_t variant) {
    ProofPackage pkg = ProofPackage::deserialize(m.bytes);
    const App other = m.claimed == App::kRss ? App::kAudit : App::kRss;
    Message out = m;
    if (variant % 2 == 0 && env_.has(other)) {
      // Point the package at the other application's circuit and sign for that context.
      const Deployment& dep = env_.deployment(other);
      pkg.r1cs_hash = dep.r1cs_hash();
      pkg.vk_hash = dep.record().vk_hash();
      resign(pkg, other, a.spec.name);
      out.claimed = other;
      out.breaks_context = true;
    } else {
      // Same circuit, signature made under the other application's tag.
      resign(pkg, other, a.spec.name);
      out.breaks_signature = true;
    }
    out.bytes = pkg.serialize();
    return out;
  }

  Message tamper(const AdversaryNode& a, const Message& m, std::size_t counter) {
    ProofPackage pkg = ProofPackage::deserialize(m.bytes);
    const PublicLayout& layout = env_.deployment(m.claimed).record().layout;
    Message out = m;
    const auto kind = static_cast<Tamper>(counter % kTamperKinds);
    switch (kind) {
      case Tamper::kProof:
        pkg.proof.a = (Fr::random_nonzero(*adv_rng_) * pairing::G1(pairing::g1_generator())).to_affine();
        out.breaks_signature = true;
        break;
      case Tamper::kPublicInput: {
        const std::size_t i = (counter / kTamperKinds * 7 + 1) % pkg.public_inputs.size();
        pkg.public_inputs[i] += Fr::one();
        bool bound = i == layout.delta_commit || i == layout.commitment || i == layout.timestamp;
        for (std::size_t n : layout.nonce) bound = bound || i == n;
        (bound ? out.breaks_context : out.breaks_proof) = true;
        break;
      }
      case Tamper::kCommitment:
        pkg.commitment += Fr::one();
        out.breaks_context = true;
        break;
      case Tamper::kTimestamp:
        pkg.timestamp += 1;
        out.breaks_context = true;
        break;
      case Tamper::kNonce:
        pkg.nonce[0] ^= 1;
        out.breaks_context = true;
        break;
      case Tamper::kCertVid:
        pkg.cert.vid += "x";
        out.breaks_cert = true;
        break;
      case Tamper::kCertValidity:
        pkg.cert.not_after += 1;
        out.breaks_cert = true;
        break;
      case Tamper::kVkSig:
        pkg.vk_sig = env_.identity(a.spec.name).key.vk;
        out.breaks_cert = true;
        break;
      case Tamper::kVkHash:
        pkg.vk_hash[0] ^= 1;
        out.breaks_context = true;
        break;
      case Tamper::kR1csHash:
        pkg.r1cs_hash[0] ^= 1;
        out.breaks_context = true;
        break;
      case Tamper::kSignature:
        pkg.sigma.s += Fr::one();
        out.breaks_signature = true;
        break;
      case Tamper::kCommitmentBoth:
        pkg.commitment += Fr::one();
        pkg.public_inputs[layout.commitment] = pkg.commitment;
        out.breaks_signature = true;
        break;
      case Tamper::kTimestampBoth:
        pkg.timestamp += 1;
        pkg.public_inputs[layout.timestamp] = Fr::from_u64(pkg.timestamp);
        out.timestamp = static_cast<std::int64_t>(pkg.timestamp);
        out.breaks_signature = true;
        break;
      case Tamper::kNonceBoth: {
        pkg.nonce[3] ^= 0x80;
        auto limbs = nonce_limbs(pkg.nonce);
        for (std::size_t i = 0; i < 4; ++i) pkg.public_inputs[layout.nonce[i]] = limbs[i];
        out.nonce = pkg.nonce;
        out.breaks_signature = true;
        break;
      }
    }
    out.bytes = pkg.serialize();
    return out;
  }

  SimScenario s_;
  const SimEnvironment& env_;
  Rng master_;
  std::unique_ptr<Rng> bus_rng_, prove_rng_, adv_rng_;
  SimReport report_;
  std::map<std::string, std::size_t> index_;
  std::vector<VerifierNode> verifiers_;
  std::vector<AdversaryNode> adversaries_;
  std::vector<Message> messages_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
};

}  // namespace

SimReport run_scenario(const SimScenario& scenario, const SimEnvironment& env) {
  return Simulation(scenario, env).run();
}

}  // namespace hermes::sim

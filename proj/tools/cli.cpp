#include "hermes/cli/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hermes/circuits/audit.hpp"
#include "hermes/circuits/rss.hpp"
#include "hermes/field/encoding.hpp"
#include "hermes/field/scaling.hpp"

namespace hermes::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace protocol;

const char* circuit_name(CircuitKind kind) { return kind == CircuitKind::kRss ? "rss" : "audit"; }

CircuitKind parse_circuit(const std::string& name) {
  if (name == "rss") return CircuitKind::kRss;
  if (name == "audit") return CircuitKind::kAudit;
  throw UsageError("unknown circuit '" + name + "' (expected rss or audit)");
}

std::uint8_t app_of(CircuitKind kind) { return kind == CircuitKind::kRss ? kAppPerception : kAppAudit; }

StatePaths StatePaths::resolve(const std::optional<std::string>& flag) {
  if (flag) return {fs::path(*flag)};
  if (const char* env = std::getenv(kStateEnv); env != nullptr && *env != '\0') return {fs::path(env)};
  return {fs::path(kDefaultStateDir)};
}

// ---------------------------------------------------------------------------------------
// Bench

BenchReport make_report(std::size_t runs, const std::vector<std::pair<std::string, double>>& total_ms) {
  if (runs == 0) throw UsageError("bench needs at least one run");
  BenchReport r;
  r.runs = runs;
  double sum = 0;
  for (const auto& [name, t] : total_ms) sum += t;
  for (const auto& [name, t] : total_ms) {
    r.stages.push_back({name, t / static_cast<double>(runs), sum > 0 ? 100.0 * t / sum : 0.0});
  }
  return r;
}

std::string BenchReport::csv() const {
  std::ostringstream os;
  os << "stage,mean_ms,share_percent\n" << std::fixed;
  for (const auto& s : stages) os << s.name << ',' << std::setprecision(4) << s.mean_ms << ',' << std::setprecision(2) << s.share_percent << '\n';
  return os.str();
}

std::string BenchReport::table() const {
  std::ostringstream os;
  os << std::fixed;
  os << std::left << std::setw(22) << "stage" << std::right << std::setw(12) << "mean ms" << std::setw(10) << "share"
     << '\n';
  double total = 0;
  for (const auto& s : stages) {
    os << std::left << std::setw(22) << s.name << std::right << std::setw(12) << std::setprecision(3) << s.mean_ms
       << std::setw(9) << std::setprecision(1) << s.share_percent << "%\n";
    total += s.mean_ms;
  }
  os << std::left << std::setw(22) << "total" << std::right << std::setw(12) << std::setprecision(3) << total << '\n';
  os << "runs: " << runs << '\n';
  return os.str();
}

BenchReport run_bench(const Deployment& dep, const r1cs::Assignment& inputs, std::size_t runs, Rng& rng) {
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };
  double witness = 0, prove = 0, verify = 0;
  for (std::size_t i = 0; i < runs; ++i) {
    auto t0 = clock::now();
    r1cs::Witness w = dep.system().generate_witness(inputs);
    auto t1 = clock::now();
    groth16::Proof p = groth16::prove(dep.keys().pk, dep.qap(), w, rng);
    auto t2 = clock::now();
    bool ok = groth16::verify(dep.keys().vk, p, dep.system().public_inputs(w));
    auto t3 = clock::now();
    if (!ok) throw Error("benchmark proof failed to verify");
    witness += ms(t1 - t0);
    prove += ms(t2 - t1);
    verify += ms(t3 - t2);
  }
  return make_report(runs, {{"witness_generation", witness}, {"proof_generation", prove}, {"proof_verification", verify}});
}

// ---------------------------------------------------------------------------------------
// Files

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const fs::path& p, std::string_view text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + p.string());
  out << text;
  if (!out) throw UsageError("write failed: " + p.string());
}

Bytes read_bytes(const fs::path& p) {
  if (!fs::exists(p)) throw UsageError("missing file " + p.string());
  return read_file(p.string());
}

void write_bytes(const fs::path& p, ByteSpan data) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  write_file(p.string(), data);
}

json read_json(const fs::path& p) {
  try {
    return json::parse(read_text(p));
  } catch (const json::exception& e) {
    throw ParseError(p.string() + ": " + e.what());
  }
}

template <std::size_t N>
std::array<std::uint8_t, N> fixed_hex(std::string_view hex, const char* what) {
  Bytes b = from_hex(hex);
  if (b.size() != N) throw ParseError(std::string(what) + " needs " + std::to_string(N) + " bytes");
  std::array<std::uint8_t, N> out{};
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

Fr parse_fr(const json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a decimal string");
  return Fr::from_decimal(j.get<std::string>());
}

json key_json(const SigningKey& k) { return {{"sk", k.sk.to_string()}, {"vk", to_hex(encode_vk_sig(k.vk))}}; }

SigningKey load_key(const fs::path& p) {
  json j = read_json(p);
  if (!j.contains("sk") || !j.contains("vk")) throw ParseError(p.string() + ": key file needs sk and vk");
  SigningKey k{parse_fr(j["sk"], "sk"), decode_vk_sig(from_hex(j["vk"].get<std::string>()))};
  const pairing::G1 g(pairing::g1_generator());
  if (!((k.sk * g).to_affine() == k.vk)) throw ParseError(p.string() + ": sk does not match vk");
  return k;
}

G1Affine load_ea_root(const StatePaths& paths) {
  return decode_vk_sig(from_hex(read_text(paths.ea_pub()).substr(0, 2 * pairing::kG1Bytes)));
}

Rng make_rng(const std::optional<std::uint64_t>& seed, std::string_view domain) {
  return seed ? Rng(*seed, domain) : Rng::from_entropy();
}

std::int64_t now_or(const std::optional<std::int64_t>& now) {
  return now ? *now : static_cast<std::int64_t>(std::time(nullptr));
}

circuits::RssConfig rss_config(const json& params) {
  circuits::RssConfig c;
  c.theta = params.at("theta").get<std::uint64_t>();
  c.stop_sign_id = params.at("stop_sign_id").get<std::uint64_t>();
  c.prob_bits = params.at("prob_bits").get<unsigned>();
  c.dist_bits = params.at("dist_bits").get<unsigned>();
  c.rho_prob = params.at("rho_prob").get<std::uint64_t>();
  c.rho_dist = params.at("rho_dist").get<std::uint64_t>();
  c.rho_geo = params.at("rho_geo").get<std::uint64_t>();
  c.rho_psi = params.at("rho_psi").get<std::uint64_t>();
  return c;
}

json rss_params(const circuits::RssConfig& c) {
  return {{"circuit", "rss"},          {"app_id", kAppPerception}, {"theta", c.theta},
          {"stop_sign_id", c.stop_sign_id}, {"prob_bits", c.prob_bits},  {"dist_bits", c.dist_bits},
          {"rho_prob", c.rho_prob},    {"rho_dist", c.rho_dist},   {"rho_geo", c.rho_geo},
          {"rho_psi", c.rho_psi}};
}

circuits::ChallengeSet load_challenge(const StatePaths& paths) {
  return circuits::parse_challenge_set(read_text(paths.circuit_dir(CircuitKind::kAudit) / "challenge.txt"));
}

r1cs::ConstraintSystem rebuild(const StatePaths& paths, CircuitKind kind) {
  const fs::path dir = paths.circuit_dir(kind);
  json params = read_json(dir / "params.json");
  if (params.value("circuit", "") != circuit_name(kind)) throw ParseError("params.json names another circuit");
  if (kind == CircuitKind::kRss) return circuits::build_rss_circuit(rss_config(params));
  return circuits::build_audit_circuit(load_challenge(paths));
}

/// Prover inputs with the opening the EA may later demand.
struct ProverInputs {
  r1cs::Assignment assignment;
  std::vector<Fr> message;
  Fr s_sec;
  Fr c;
  std::string outcome;  // "SAFE 1", "PASS 0", ...
};

ProverInputs prover_inputs(const StatePaths& paths, CircuitKind kind, const std::optional<std::string>& input_file,
                           std::uint64_t now, Rng& rng) {
  ProverInputs out;
  const Nonce nonce = random_nonce(rng);
  out.s_sec = commitment::BlindingFactor::sample(rng).value;
  if (kind == CircuitKind::kRss) {
    json params = read_json(paths.circuit_dir(kind) / "params.json");
    circuits::RssScenario s =
        input_file ? circuits::parse_rss_scenario(read_text(*input_file)) : circuits::worked_rss_scenario();
    circuits::RssInstance inst = circuits::make_rss_inputs(s, rss_config(params), now, nonce, out.s_sec);
    out.assignment = inst.assignment();
    out.message = inst.commitment_message();
    out.c = inst.pub.c;
    out.outcome = std::string("SAFE ") + (inst.pub.safe ? "1" : "0");
  } else {
    circuits::ChallengeSet cs = load_challenge(paths);
    std::vector<std::vector<circuits::Detection>> dets;
    if (input_file) {
      dets = circuits::parse_detections(read_text(*input_file), cs.images.size(), cs.rho_prob);
    } else {
      circuits::AuditScenario sc = circuits::five_image_audit_scenario();
      if (!(sc.challenge == cs)) throw UsageError("no --detections given and the challenge set is not the built-in one");
      dets = sc.detections;
    }
    circuits::AuditInstance inst = circuits::make_audit_inputs(cs, std::move(dets), now, nonce, out.s_sec);
    out.assignment = inst.assignment(cs);
    out.message = inst.commitment_message(cs);
    out.c = inst.c;
    out.outcome = std::string("PASS ") + (inst.pass ? "1" : "0");
  }
  return out;
}

json load_nonces(const StatePaths& paths) {
  if (!fs::exists(paths.nonces())) return {{"entries", json::array()}};
  return read_json(paths.nonces());
}

void save_nonces(const StatePaths& paths, const VerifierState& state) {
  json entries = json::array();
  for (const auto& [nonce, expiry] : state.nonce_entries()) {
    entries.push_back({{"nonce", to_hex(nonce)}, {"expiry", expiry}});
  }
  write_text(paths.nonces(), json{{"entries", entries}}.dump(2) + "\n");
}

std::string hex_digest(const Digest& d) { return to_hex(d); }

// ---------------------------------------------------------------------------------------
// Commands

struct Options {
  std::optional<std::string> state;
  std::string profile = "test";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> now;

  std::string circuit;
  std::string vid = "ego";
  double theta = 0.75;
  std::optional<std::string> challenge;
  std::optional<std::string> input;
  std::string out_path;
  std::optional<std::string> opening_path;
  std::optional<std::string> package;
  std::optional<std::string> vk_path;
  std::optional<std::string> app;
  std::int64_t window = 5;
  std::optional<std::string> commitment;
  std::size_t runs = 100;
  std::optional<std::string> csv_path;
  std::uint64_t not_before = 0;
  std::uint64_t not_after = std::uint64_t{1} << 40;
  std::string example;
};

int cmd_provision(const Options& o, std::ostream& out) {
  const StatePaths paths = StatePaths::resolve(o.state);
  SigningKey ea;
  if (fs::exists(paths.ea_key())) {
    ea = load_key(paths.ea_key());
  } else {
    Rng rng = make_rng(o.seed, "provision/ea");
    ea = keygen(rng);
    write_text(paths.ea_key(), key_json(ea).dump(2) + "\n");
    write_text(paths.ea_pub(), to_hex(encode_vk_sig(ea.vk)) + "\n");
  }
  out << "ea " << to_hex(encode_vk_sig(ea.vk)) << '\n';
  if (o.vid.empty()) return kExitOk;
  if (o.not_before > o.not_after) throw UsageError("--not-before is after --not-after");
  Rng rng = make_rng(o.seed, "provision/vehicle/" + o.vid);
  SigningKey vk = keygen(rng);
  Certificate cert = issue_certificate(ea, o.vid, vk.vk, o.not_before, o.not_after);
  write_text(paths.vehicle_key(o.vid), key_json(vk).dump(2) + "\n");
  write_bytes(paths.vehicle_cert(o.vid), cert.serialize());
  out << "vehicle " << o.vid << ' ' << to_hex(encode_vk_sig(vk.vk)) << '\n';
  return kExitOk;
}

int cmd_setup(const Options& o, std::ostream& out) {
  const StatePaths paths = StatePaths::resolve(o.state);
  const CircuitKind kind = parse_circuit(o.circuit);
  const fs::path dir = paths.circuit_dir(kind);
  r1cs::ConstraintSystem cs;
  json params;
  if (kind == CircuitKind::kRss) {
    if (!(o.theta >= 0 && o.theta <= 1)) throw UsageError("--theta must lie in [0, 1]");
    circuits::RssConfig cfg;
    cfg.theta = static_cast<std::uint64_t>(field::scaled_integer(o.theta, field::ScalingFactor(cfg.rho_prob)));
    cs = circuits::build_rss_circuit(cfg);
    params = rss_params(cfg);
  } else {
    circuits::ChallengeSet ch =
        o.challenge ? circuits::parse_challenge_set(read_text(*o.challenge)) : circuits::five_image_audit_scenario().challenge;
    cs = circuits::build_audit_circuit(ch);
    params = {{"circuit", "audit"}, {"app_id", kAppAudit}, {"challenge_digest", to_hex(ch.digest())}};
    write_text(dir / "challenge.txt", ch.canonical());
  }
  Rng rng = make_rng(o.seed, "setup");
  Deployment dep(std::move(cs), app_of(kind), rng);
  const auto& sys = dep.system();
  write_text(dir / "params.json", params.dump(2) + "\n");
  write_bytes(dir / "r1cs.bin", sys.serialize());
  write_bytes(dir / "pk.bin", dep.keys().pk.serialize());
  write_bytes(dir / "vk.bin", dep.keys().vk.serialize());
  write_bytes(dir / "layout.bin", dep.record().layout.serialize());
  std::string labels;
  for (std::size_t i = 1; i <= sys.num_public(); ++i) labels += sys.wire_label(i) + "\n";
  write_text(dir / "public.txt", labels);

  out << "circuit " << circuit_name(kind) << '\n'
      << "constraints " << sys.num_constraints() << '\n'
      << "wires " << sys.num_wires() << '\n'
      << "public " << sys.num_public() << '\n'
      << "private " << sys.num_private() << '\n'
      << "nonzero " << sys.num_nonzero() << '\n'
      << "r1cs_hash " << hex_digest(dep.r1cs_hash()) << '\n'
      << "vk_hash " << hex_digest(dep.record().vk_hash()) << '\n';
  return kExitOk;
}

int cmd_prove(const Options& o, std::ostream& out) {
  const StatePaths paths = StatePaths::resolve(o.state);
  const CircuitKind kind = parse_circuit(o.circuit);
  if (o.out_path.empty()) throw UsageError("--out is required");
  Deployment dep = load_deployment(paths, kind);
  SigningKey key = load_key(paths.vehicle_key(o.vid));
  Certificate cert = Certificate::deserialize(read_bytes(paths.vehicle_cert(o.vid)));
  if (!(cert.vk_sig == key.vk)) throw UsageError("certificate for " + o.vid + " does not match its key");

  Rng rng = make_rng(o.seed, "prove");
  const std::uint64_t now = static_cast<std::uint64_t>(now_or(o.now));
  ProverInputs in = prover_inputs(paths, kind, o.input, now, rng);
  ProofPackage pkg = create_package(dep.prover(key, cert), in.assignment, rng);
  const Bytes bytes = pkg.serialize();
  write_bytes(o.out_path, bytes);
  if (o.opening_path) {
    json msg = json::array();
    for (const Fr& m : in.message) msg.push_back(m.to_string());
    json j = {{"circuit", circuit_name(kind)},
              {"commitment", in.c.to_string()},
              {"message", msg},
              {"s_sec", in.s_sec.to_string()}};
    write_text(*o.opening_path, j.dump(2) + "\n");
  }
  out << "circuit " << circuit_name(kind) << '\n'
      << in.outcome << '\n'
      << "commitment " << pkg.commitment.to_string() << '\n'
      << "timestamp " << pkg.timestamp << '\n'
      << "nonce " << to_hex(pkg.nonce) << '\n'
      << "package " << o.out_path << ' ' << bytes.size() << " bytes\n";
  return kExitOk;
}

constexpr std::array<const char*, 6> kStages = {"certificate", "context", "signature", "freshness", "nonce", "proof"};

std::size_t stage_of(RejectReason r) {
  switch (r) {
    case RejectReason::kCertificate: return 0;
    case RejectReason::kContext: return 1;
    case RejectReason::kSignature: return 2;
    case RejectReason::kStale: return 3;
    case RejectReason::kReplay:
    case RejectReason::kNonceStoreFull: return 4;
    case RejectReason::kProof: return 5;
    case RejectReason::kNone: break;
  }
  return kStages.size();
}

int cmd_verify(const Options& o, std::ostream& out) {
  const StatePaths paths = StatePaths::resolve(o.state);
  if (!o.package) throw UsageError("--package is required");
  if (o.window <= 0) throw UsageError("--window must be positive");
  ProofPackage pkg = ProofPackage::deserialize(read_bytes(*o.package));

  VerifierState state(load_ea_root(paths), o.window);
  if (o.app) state.expect_app(app_of(parse_circuit(*o.app)));

  std::map<Digest, std::pair<CircuitKind, CircuitRecord>> known;
  for (CircuitKind kind : {CircuitKind::kRss, CircuitKind::kAudit}) {
    const fs::path dir = paths.circuit_dir(kind);
    if (!fs::exists(dir / "vk.bin")) continue;
    const Digest h = sha256(read_bytes(dir / "r1cs.bin"));
    CircuitRecord rec{groth16::VerificationKey::deserialize(read_bytes(dir / "vk.bin"), h), app_of(kind),
                      PublicLayout::deserialize(read_bytes(dir / "layout.bin"))};
    known.emplace(h, std::make_pair(kind, std::move(rec)));
  }
  if (o.vk_path) {
    // Only the supplied key is trusted; it is registered under the circuit it names.
    groth16::VerificationKey vk = groth16::VerificationKey::deserialize(read_bytes(*o.vk_path));
    auto it = known.find(vk.circuit_hash);
    if (it == known.end()) throw UsageError("--vk names a circuit that was never set up here");
    CircuitRecord rec = it->second.second;
    rec.vk = std::move(vk);
    state.register_circuit(it->first, std::move(rec));
  } else {
    for (const auto& [h, entry] : known) state.register_circuit(h, entry.second);
  }

  const json stored = load_nonces(paths);
  for (const auto& e : stored.at("entries")) {
    state.restore_nonce(fixed_hex<16>(e.at("nonce").get<std::string>(), "nonce"), e.at("expiry").get<std::int64_t>());
  }

  const std::int64_t now = now_or(o.now);
  const VerifyResult res = verify_package(state, pkg, now);
  const std::size_t failed = stage_of(res.reason);
  for (std::size_t i = 0; i < kStages.size(); ++i) {
    out << "check " << kStages[i] << ' ';
    if (i < failed) {
      out << "PASS\n";
    } else if (i == failed) {
      out << "FAIL " << reason_name(res.reason);
      if (!res.detail.empty()) out << " (" << res.detail << ')';
      out << '\n';
    } else {
      out << "SKIP\n";
    }
  }
  if (!res.accepted) {
    out << "result REJECT " << reason_name(res.reason) << '\n';
    return kExitReject;
  }
  save_nonces(paths, state);
  out << "result ACCEPT\n";
  const auto& entry = known.at(pkg.r1cs_hash);
  std::vector<std::string> labels;
  std::istringstream ls(read_text(paths.circuit_dir(entry.first) / "public.txt"));
  for (std::string l; std::getline(ls, l);) labels.push_back(l);
  for (std::size_t i = 0; i < pkg.public_inputs.size(); ++i) {
    out << "public " << i << ' ' << (i < labels.size() ? labels[i] : "?") << ' ' << pkg.public_inputs[i].to_string()
        << '\n';
  }
  return kExitOk;
}

int cmd_audit_open(const Options& o, std::ostream& out) {
  if (!o.opening_path) throw UsageError("--opening is required");
  json j = read_json(*o.opening_path);
  if (!j.is_object() || !j.contains("message") || !j["message"].is_array() || !j.contains("s_sec")) {
    throw ParseError("opening file needs a message array and s_sec");
  }
  std::vector<Fr> msg;
  for (const auto& m : j["message"]) msg.push_back(parse_fr(m, "message element"));
  const Fr s = parse_fr(j["s_sec"], "s_sec");
  Fr c;
  if (o.commitment) {
    c = Fr::from_decimal(*o.commitment);
  } else if (o.package) {
    c = ProofPackage::deserialize(read_bytes(*o.package)).commitment;
  } else {
    throw UsageError("--commitment or --package is required");
  }
  const bool ok = audit_open(c, msg, s);
  out << "opening " << (ok ? "MATCH" : "MISMATCH") << '\n';
  return ok ? kExitOk : kExitReject;
}

int cmd_bench(const Options& o, std::ostream& out) {
  const StatePaths paths = StatePaths::resolve(o.state);
  const CircuitKind kind = parse_circuit(o.circuit);
  if (o.runs == 0) throw UsageError("--runs must be at least 1");
  Deployment dep = load_deployment(paths, kind);
  Rng rng = make_rng(o.seed, "bench");
  ProverInputs in = prover_inputs(paths, kind, o.input, static_cast<std::uint64_t>(now_or(o.now)), rng);
  BenchReport rep = run_bench(dep, in.assignment, o.runs, rng);
  if (o.csv_path) {
    write_text(*o.csv_path, rep.csv());
  } else {
    out << rep.csv() << '\n';
  }
  out << "circuit " << circuit_name(kind) << " (" << dep.system().num_constraints() << " constraints)\n"
      << rep.table();
  return kExitOk;
}

template <typename F>
json sponge_section(std::string_view name, const std::vector<std::vector<std::string>>& inputs) {
  const auto& p = commitment::SpongeParams<F>::standard();
  json vectors = json::array();
  for (const auto& in : inputs) {
    std::vector<F> v;
    for (const auto& s : in) v.push_back(F::from_decimal(s));
    vectors.push_back({{"inputs", in}, {"hash", commitment::sponge_hash<F>(std::span<const F>(v)).to_string()}});
  }
  return {{"profile", name},
          {"alpha", p.alpha},
          {"full_rounds", p.full_rounds},
          {"partial_rounds", p.partial_rounds},
          {"vectors", vectors}};
}

json encoding_entry(field::DTypeTag tag, const field::Encodable<Fr>& v, const std::string& shown) {
  const Bytes enc = field::encode<Fr>(v, tag);
  if (!(field::decode<Fr>(enc, tag) == v)) throw Error("encoding does not roundtrip");
  return {{"tag", field::tag_name(tag)}, {"value", shown}, {"hex", to_hex(enc)}};
}

int cmd_vectors(const Options& o, std::ostream& out) {
  const fs::path dir = o.out_path.empty() ? fs::path("vectors") : fs::path(o.out_path);
  json seps = json::array();
  for (std::uint8_t app : {kAppPerception, kAppAudit}) {
    for (OpId op : {OpId::kCommit, OpId::kSign}) {
      DomainSeparator d{app, op, 0};
      Bytes enc;
      put_le(enc, d.value(), 4);
      seps.push_back({{"app", app},
                      {"op", static_cast<int>(op)},
                      {"counter", 0},
                      {"value", d.value()},
                      {"enc_ctx", to_hex(enc)}});
    }
  }
  Nonce nonce{};
  for (std::size_t i = 0; i < nonce.size(); ++i) nonce[i] = static_cast<std::uint8_t>(i);
  const Fr c = commitment::sponge_hash({Fr::from_u64(1), Fr::from_u64(2), Fr::from_u64(3)});
  json enc = json::array({
      encoding_entry(field::DTypeTag::kTs, std::uint64_t{1700000000}, "1700000000"),
      encoding_entry(field::DTypeTag::kTs, std::uint64_t{0}, "0"),
      encoding_entry(field::DTypeTag::kCtx, std::uint64_t{commit_tag(kAppAudit).value()}, "16842752"),
      encoding_entry(field::DTypeTag::kNonce, Bytes(nonce.begin(), nonce.end()), to_hex(nonce)),
      encoding_entry(field::DTypeTag::kCommit, Fr::from_u64(75), "75"),
      encoding_entry(field::DTypeTag::kCommit, -Fr::one(), (-Fr::one()).to_string()),
      encoding_entry(field::DTypeTag::kCommit, c, c.to_string()),
  });
  const std::vector<std::vector<std::string>> base = {
      {}, {"0"}, {"1"}, {"0", "0"}, {"1", "2"}, {"1", "2", "3"}, {"1", "2", "3", "4", "5", "6", "7"},
      {"1152921504606846976", "205891132094649", "95367431640625", "4747561509943"}};
  auto with_top = [&](const std::string& top) {
    auto v = base;
    v.insert(v.begin() + 6, {top});
    return v;
  };
  json sponge = json::array({
      sponge_section<field::TestFr>("test-61", with_top((-field::TestFr::one()).to_string())),
      sponge_section<field::StandardFr>("standard-254", with_top((-field::StandardFr::one()).to_string())),
  });
  json doc = {{"domain_separators", seps}, {"encodings", enc}, {"sponge", sponge}};
  write_text(dir / "vectors.json", doc.dump(2) + "\n");
  out << "vectors " << (dir / "vectors.json").string() << '\n';
  for (const auto& s : seps) out << "delta " << s["value"].get<std::uint32_t>() << '\n';
  return kExitOk;
}

int cmd_example(const Options& o, std::ostream& out) {
  if (o.example == "rss") {
    out << circuits::format_rss_scenario(circuits::worked_rss_scenario());
  } else if (o.example == "audit-challenge") {
    out << circuits::five_image_audit_scenario().challenge.canonical();
  } else if (o.example == "audit-detections") {
    const auto sc = circuits::five_image_audit_scenario();
    out << circuits::format_detections(sc.detections, sc.challenge.rho_prob);
  } else {
    throw UsageError("unknown example '" + o.example + "' (rss, audit-challenge, audit-detections)");
  }
  return kExitOk;
}

}  // namespace

protocol::Deployment load_deployment(const StatePaths& paths, CircuitKind kind) {
  const fs::path dir = paths.circuit_dir(kind);
  if (!fs::exists(dir / "params.json")) {
    throw UsageError(std::string(circuit_name(kind)) + " circuit is not set up in " + paths.root.string());
  }
  r1cs::ConstraintSystem cs = rebuild(paths, kind);
  const Digest stored = sha256(read_bytes(dir / "r1cs.bin"));
  if (cs.hash() != stored) throw ParseError("r1cs.bin does not match the circuit rebuilt from params.json");
  groth16::KeyPair keys{groth16::ProvingKey::deserialize(read_bytes(dir / "pk.bin"), stored),
                        groth16::VerificationKey::deserialize(read_bytes(dir / "vk.bin"), stored)};
  return Deployment(std::move(cs), app_of(kind), std::move(keys));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verifiable perception proofs: setup, prove, verify, audit"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--state", o.state, "State directory (default: $HERMES_STATE_DIR or ./hermes-state)");
  app.add_option("--profile", o.profile, "Field and curve profile")->capture_default_str();

  auto* provision = app.add_subcommand("provision", "Create the EA key and a vehicle key with its certificate");
  provision->add_option("--vid", o.vid, "Vehicle identity (empty: EA only)")->capture_default_str();
  provision->add_option("--seed", o.seed, "Deterministic key generation");
  provision->add_option("--not-before", o.not_before, "Certificate validity start");
  provision->add_option("--not-after", o.not_after, "Certificate validity end");

  auto* setup = app.add_subcommand("setup", "Build a circuit and run the trusted setup");
  setup->add_option("circuit", o.circuit, "rss or audit")->required();
  setup->add_option("--theta", o.theta, "RSS detection threshold in [0, 1]")->capture_default_str();
  setup->add_option("--challenge", o.challenge, "Audit challenge-set file");
  setup->add_option("--seed", o.seed, "Deterministic setup");

  auto* prove = app.add_subcommand("prove", "Prove a scenario and write a signed package");
  prove->add_option("circuit", o.circuit, "rss or audit")->required();
  prove->add_option("--scenario,--detections", o.input, "RSS scenario or audit detections file");
  prove->add_option("--vid", o.vid, "Proving vehicle")->capture_default_str();
  prove->add_option("--now", o.now, "Timestamp T (default: current time)");
  prove->add_option("--seed", o.seed, "Deterministic nonce, blinding and proof");
  prove->add_option("--out", o.out_path, "Package file")->required();
  prove->add_option("--opening", o.opening_path, "Write the commitment opening here");

  auto* verify = app.add_subcommand("verify", "Verify a package against the state directory");
  verify->add_option("--package", o.package, "Package file")->required();
  verify->add_option("--vk", o.vk_path, "Trust only this verification key");
  verify->add_option("--app", o.app, "Expected application (rss or audit)");
  verify->add_option("--now", o.now, "Verifier clock (default: current time)");
  verify->add_option("--window", o.window, "Freshness window in seconds")->capture_default_str();

  auto* open = app.add_subcommand("audit-open", "Check a commitment opening");
  open->add_option("--commitment", o.commitment, "Logged commitment (decimal)");
  open->add_option("--package", o.package, "Take the commitment from this package");
  open->add_option("--opening", o.opening_path, "Opening file written by prove")->required();

  auto* bench = app.add_subcommand("bench", "Time witness generation, proving and verification");
  bench->add_option("circuit", o.circuit, "rss or audit")->required();
  bench->add_option("--runs", o.runs, "Number of runs")->capture_default_str();
  bench->add_option("--scenario,--detections", o.input, "Input file (default: built-in scenario)");
  bench->add_option("--csv", o.csv_path, "Write the CSV here instead of stdout");
  bench->add_option("--seed", o.seed, "Deterministic inputs and proofs");
  bench->add_option("--now", o.now, "Timestamp T");

  auto* vectors = app.add_subcommand("vectors", "Write golden vectors");
  vectors->add_option("--out", o.out_path, "Output directory (default: ./vectors)");

  auto* example = app.add_subcommand("example", "Print a built-in input file");
  example->add_option("name", o.example, "rss, audit-challenge or audit-detections")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (o.profile != "test") throw UsageError("profile '" + o.profile + "' is not available; this build proves over the test profile");
    if (*provision) return cmd_provision(o, out);
    if (*setup) return cmd_setup(o, out);
    if (*prove) return cmd_prove(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*open) return cmd_audit_open(o, out);
    if (*bench) return cmd_bench(o, out);
    if (*vectors) return cmd_vectors(o, out);
    if (*example) return cmd_example(o, out);
  } catch (const InvalidWitness& e) {
    err << "error: unsatisfiable input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hermes::cli

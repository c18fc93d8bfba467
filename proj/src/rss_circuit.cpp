#include "hermes/circuits/rss.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "hermes/commitment/sponge_gadget.hpp"
#include "hermes/r1cs/gadgets.hpp"

namespace hermes::circuits {

using r1cs::Builder;
using r1cs::LC;
using r1cs::Var;
namespace gadgets = r1cs::gadgets;

RssDistance rss_safe_distance(double v, double t_rec, double mu, double g) {
  if (!(mu * g > 0)) throw UsageError("braking capacity mu * g must be positive");
  if (v < 0 || t_rec < 0) throw UsageError("speed and reaction time must be non-negative");
  RssDistance d;
  d.reaction = v * t_rec;
  d.braking = v * v / (2 * mu * g);
  d.total = d.reaction + d.braking;
  return d;
}

double rss_min_distance(const RssParams& p) {
  const double beta_min = p.beta_min > 0 ? p.beta_min : p.mu * p.g;
  const double beta_max = p.beta_max > 0 ? p.beta_max : p.mu * p.g;
  if (!(beta_min > 0) || !(beta_max > 0)) throw UsageError("braking capacity must be positive");
  if (p.v < 0 || p.t_rec < 0 || p.alpha_max < 0 || p.v_f < 0) throw UsageError("RSS inputs must be non-negative");
  const double t = p.t_rec;
  const double reach = p.v + t * p.alpha_max;
  double d = p.v * t + p.alpha_max * t * t / 2 + reach * reach / (2 * beta_min) - p.v_f * p.v_f / (2 * beta_max);
  return d > 0 ? d : 0;
}

int evaluate_predicate(std::uint64_t pr, std::uint64_t theta, std::uint64_t d_current, std::uint64_t d_safe) {
  return pr >= theta && d_current >= d_safe ? 1 : 0;
}

int circuit_safe(std::uint64_t pr, std::uint64_t theta, std::uint64_t d_current, std::uint64_t d_safe) {
  return pr < theta || d_current >= d_safe ? 1 : 0;
}

std::vector<Fr> RssPublicInputs::to_vector() const {
  std::vector<Fr> x{Fr::from_u64(protocol::commit_tag(protocol::kAppPerception).value()),
                    Fr::from_u64(id),
                    d_safe,
                    d_current,
                    phi_s,
                    lambda_s,
                    Fr::from_u64(rho_prob),
                    Fr::from_u64(rho_geo),
                    Fr::from_u64(rho_psi),
                    w_cloud,
                    w_precip,
                    w_fog,
                    Fr::from_u64(timestamp)};
  for (const auto& limb : protocol::nonce_limbs(nonce)) x.push_back(limb);
  x.push_back(c);
  x.push_back(safe ? Fr::one() : Fr::zero());
  return x;
}

r1cs::Assignment RssInstance::assignment() const {
  r1cs::Assignment in;
  in[protocol::kLabelDeltaCommit] = Fr::from_u64(protocol::commit_tag(protocol::kAppPerception).value());
  in["ID"] = Fr::from_u64(pub.id);
  in["d_S"] = pub.d_safe;
  in["d_S_current"] = pub.d_current;
  in["phi_S"] = pub.phi_s;
  in["lambda_S"] = pub.lambda_s;
  in["rho_prob"] = Fr::from_u64(pub.rho_prob);
  in["rho_geo"] = Fr::from_u64(pub.rho_geo);
  in["rho_psi"] = Fr::from_u64(pub.rho_psi);
  in["w_cloud"] = pub.w_cloud;
  in["w_precip"] = pub.w_precip;
  in["w_fog"] = pub.w_fog;
  in[protocol::kLabelTimestamp] = Fr::from_u64(pub.timestamp);
  auto limbs = protocol::nonce_limbs(pub.nonce);
  for (std::size_t i = 0; i < 4; ++i) in[protocol::nonce_label(i)] = limbs[i];
  in["Pr"] = wit.pr;
  for (std::size_t i = 0; i < 4; ++i) in["b" + std::to_string(i)] = wit.box[i];
  in["phi_V"] = wit.phi_v;
  in["lambda_V"] = wit.lambda_v;
  in["v"] = wit.v;
  in["psi"] = wit.psi;
  in[protocol::kLabelBlinding] = wit.s_sec;
  return in;
}

std::vector<Fr> RssInstance::commitment_message() const {
  std::vector<Fr> m{Fr::from_u64(protocol::commit_tag(protocol::kAppPerception).value()), wit.pr};
  m.insert(m.end(), wit.box.begin(), wit.box.end());
  for (const Fr& f : {wit.phi_v, wit.lambda_v, wit.v, wit.psi, Fr::from_u64(pub.timestamp)}) m.push_back(f);
  for (const auto& limb : protocol::nonce_limbs(pub.nonce)) m.push_back(limb);
  return m;
}

namespace {

double parse_number(std::string_view key, std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("bad number for '" + std::string(key) + "': " + s);
  }
  if (used != s.size() || !std::isfinite(v)) throw ParseError("bad number for '" + std::string(key) + "': " + s);
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::uint64_t checked_scaled(double x, std::uint64_t rho, unsigned bits, const char* what) {
  std::int64_t v = field::scaled_integer(x, field::ScalingFactor(rho));
  if (v < 0) throw UsageError(std::string(what) + " must be non-negative");
  if (bits < 64 && static_cast<std::uint64_t>(v) >> bits) {
    throw UsageError(std::string(what) + " does not fit the " + std::to_string(bits) + "-bit comparator");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

RssScenario parse_rss_scenario(std::string_view text) {
  RssScenario s;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string_view l = line;
    if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    auto eq = l.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value: " + std::string(l));
    std::string_view key = trim(l.substr(0, eq));
    std::string_view val = trim(l.substr(eq + 1));
    auto num = [&] { return parse_number(key, val); };
    if (key == "object_id") {
      double v = num();
      if (v < 0 || v != std::floor(v)) throw ParseError("object_id must be a non-negative integer");
      s.object_id = static_cast<std::uint64_t>(v);
    } else if (key == "probability") {
      s.probability = num();
    } else if (key == "box") {
      std::size_t k = 0;
      std::string_view rest = val;
      while (k < 4) {
        auto comma = rest.find(',');
        s.box[k++] = parse_number(key, trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
      if (k != 4 || rest.find(',') != std::string_view::npos) throw ParseError("box needs four values");
    } else if (key == "lat_v") {
      s.lat_v = num();
    } else if (key == "lon_v") {
      s.lon_v = num();
    } else if (key == "speed") {
      s.speed = num();
    } else if (key == "yaw") {
      s.yaw = num();
    } else if (key == "lat_s") {
      s.lat_s = num();
    } else if (key == "lon_s") {
      s.lon_s = num();
    } else if (key == "current_distance") {
      s.current_distance = num();
    } else if (key == "t_rec") {
      s.t_rec = num();
    } else if (key == "mu") {
      s.mu = num();
    } else if (key == "g") {
      s.g = num();
    } else if (key == "cloud") {
      s.cloud = num();
    } else if (key == "precip") {
      s.precip = num();
    } else if (key == "fog") {
      s.fog = num();
    } else {
      throw ParseError("unknown scenario key '" + std::string(key) + "'");
    }
  }
  return s;
}

std::string format_rss_scenario(const RssScenario& s) {
  std::ostringstream o;
  o.precision(17);
  o << "object_id = " << s.object_id << "\n"
    << "probability = " << s.probability << "\n"
    << "box = " << s.box[0] << ", " << s.box[1] << ", " << s.box[2] << ", " << s.box[3] << "\n"
    << "lat_v = " << s.lat_v << "\nlon_v = " << s.lon_v << "\nspeed = " << s.speed << "\nyaw = " << s.yaw << "\n"
    << "lat_s = " << s.lat_s << "\nlon_s = " << s.lon_s << "\ncurrent_distance = " << s.current_distance << "\n"
    << "t_rec = " << s.t_rec << "\nmu = " << s.mu << "\ng = " << s.g << "\n"
    << "cloud = " << s.cloud << "\nprecip = " << s.precip << "\nfog = " << s.fog << "\n";
  return o.str();
}

RssScenario worked_rss_scenario() {
  RssScenario s;
  s.probability = 0.92;
  s.box = {412.0, 188.0, 468.0, 246.0};
  s.lat_v = 42.280510;
  s.lon_v = -83.743390;
  s.speed = 13.41;
  s.yaw = 87.5;
  s.lat_s = 42.280780;
  s.lon_s = -83.743380;
  s.current_distance = 30.0;
  return s;
}

RssInstance make_rss_inputs(const RssScenario& s, const RssConfig& cfg, std::uint64_t timestamp,
                            const protocol::Nonce& nonce, const Fr& s_sec) {
  if (!(s.probability >= 0 && s.probability <= 1)) throw UsageError("probability must lie in [0, 1]");
  if (s.box[0] > s.box[2] || s.box[1] > s.box[3]) throw UsageError("bounding box must satisfy x1 <= x2, y1 <= y2");
  if (s.current_distance < 0) throw UsageError("current distance must be non-negative");
  const RssDistance d = rss_safe_distance(s.speed, s.t_rec, s.mu, s.g);

  using field::ScalingFactor;
  const ScalingFactor rp(cfg.rho_prob), rd(cfg.rho_dist), rg(cfg.rho_geo), ry(cfg.rho_psi);
  RssInstance inst;
  auto& pub = inst.pub;
  const std::uint64_t pr = checked_scaled(s.probability, cfg.rho_prob, cfg.prob_bits, "probability");
  const std::uint64_t d_safe = checked_scaled(d.total, cfg.rho_dist, cfg.dist_bits, "safe distance");
  const std::uint64_t d_cur = checked_scaled(s.current_distance, cfg.rho_dist, cfg.dist_bits, "current distance");
  pub.id = s.object_id;
  pub.d_safe = Fr::from_u64(d_safe);
  pub.d_current = Fr::from_u64(d_cur);
  pub.phi_s = field::scale<Fr>(s.lat_s, rg);
  pub.lambda_s = field::scale<Fr>(s.lon_s, rg);
  pub.rho_prob = cfg.rho_prob;
  pub.rho_geo = cfg.rho_geo;
  pub.rho_psi = cfg.rho_psi;
  pub.w_cloud = field::scale<Fr>(s.cloud, rp);
  pub.w_precip = field::scale<Fr>(s.precip, rp);
  pub.w_fog = field::scale<Fr>(s.fog, rp);
  pub.timestamp = timestamp;
  pub.nonce = nonce;
  pub.safe = circuit_safe(pr, cfg.theta, d_cur, d_safe) == 1;

  auto& w = inst.wit;
  w.pr = Fr::from_u64(pr);
  for (std::size_t i = 0; i < 4; ++i) w.box[i] = field::scale<Fr>(s.box[i], rd);
  w.phi_v = field::scale<Fr>(s.lat_v, rg);
  w.lambda_v = field::scale<Fr>(s.lon_v, rg);
  w.v = field::scale<Fr>(s.speed, rd);
  w.psi = field::scale<Fr>(s.yaw, ry);
  w.s_sec = s_sec;
  pub.c = commitment::commit(inst.commitment_message(), {s_sec}).c;
  return inst;
}

r1cs::ConstraintSystem build_rss_circuit(const RssConfig& cfg) {
  if (cfg.theta >> cfg.prob_bits) throw UsageError("theta does not fit the probability comparator");
  Builder b;
  // Public instance, in X order.
  Var delta = b.alloc_public(protocol::kLabelDeltaCommit);
  Var id = b.alloc_public("ID");
  Var d_safe = b.alloc_public("d_S");
  Var d_cur = b.alloc_public("d_S_current");
  b.alloc_public("phi_S");
  b.alloc_public("lambda_S");
  Var rho_prob = b.alloc_public("rho_prob");
  Var rho_geo = b.alloc_public("rho_geo");
  Var rho_psi = b.alloc_public("rho_psi");
  // Weather carries no logic; it is bound through X only.
  b.alloc_public("w_cloud");
  b.alloc_public("w_precip");
  b.alloc_public("w_fog");
  Var t = b.alloc_public(protocol::kLabelTimestamp);
  std::array<Var, 4> nu;
  for (std::size_t i = 0; i < 4; ++i) nu[i] = b.alloc_public(protocol::nonce_label(i));

  // Private witness.
  Var pr = b.alloc_private("Pr");
  std::array<Var, 4> box;
  for (std::size_t i = 0; i < 4; ++i) box[i] = b.alloc_private("b" + std::to_string(i));
  Var phi_v = b.alloc_private("phi_V");
  Var lambda_v = b.alloc_private("lambda_V");
  Var v = b.alloc_private("v");
  Var psi = b.alloc_private("psi");
  Var s_sec = b.alloc_private(protocol::kLabelBlinding);

  // Object class: only stop signs.
  Var check_id = gadgets::is_equal(b, id, LC::constant(cfg.stop_sign_id), "check_id");
  b.enforce_equal(check_id, LC::constant(1), "assert_id");

  // Threshold logic.
  Var detected = gadgets::geq(b, pr, LC::constant(cfg.theta), cfg.prob_bits, gadgets::RangeCheck::kLeft, "is_detected");
  Var distant = gadgets::geq(b, d_cur, d_safe, cfg.dist_bits, gadgets::RangeCheck::kBoth, "is_distant");
  Var safe = gadgets::or_gate(b, gadgets::not_gate(detected), distant, "safe");

  // Context and baked scaling factors.
  b.enforce_equal(delta, LC::constant(protocol::commit_tag(protocol::kAppPerception).value()), "assert_delta_commit");
  b.enforce_equal(rho_prob, LC::constant(cfg.rho_prob), "assert_rho_prob");
  b.enforce_equal(rho_geo, LC::constant(cfg.rho_geo), "assert_rho_geo");
  b.enforce_equal(rho_psi, LC::constant(cfg.rho_psi), "assert_rho_psi");

  // Commitment over the context tag and the private perception state.
  std::vector<LC> msg{delta, pr, box[0], box[1], box[2], box[3], phi_v, lambda_v, v, psi, t, nu[0], nu[1], nu[2], nu[3],
                      s_sec};
  LC c = commitment::sponge_gadget(b, msg, "commit");
  b.output(protocol::kLabelCommitment, c);
  b.output("SAFE", safe);
  return b.finalize();
}

}  // namespace hermes::circuits

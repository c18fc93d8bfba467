#include "hermes/circuits/audit.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>

#include "hermes/commitment/commitment.hpp"
#include "hermes/commitment/sponge_gadget.hpp"
#include "hermes/r1cs/gadgets.hpp"

namespace hermes::circuits {

using r1cs::Builder;
using r1cs::LC;
using r1cs::Var;
namespace gadgets = r1cs::gadgets;

using u128 = unsigned __int128;

namespace {

constexpr unsigned kMaxDenBits = 16;
constexpr std::string_view kDetFields[] = {"id", "Pr", "x1", "y1", "x2", "y2"};

std::uint64_t audit_tag() { return protocol::commit_tag(protocol::kAppAudit).value(); }

void check_ratio(const Ratio& r, const char* what) {
  if (r.den == 0 || r.num > r.den) throw UsageError(std::string(what) + " must be a ratio in [0, 1]");
  if (r.den >> kMaxDenBits) throw UsageError(std::string(what) + " denominator exceeds 16 bits");
}

bool box_ordered(const Box& b) { return b[0] <= b[2] && b[1] <= b[3]; }

bool box_fits(const Box& b, unsigned bits) {
  return std::all_of(b.begin(), b.end(), [bits](std::uint64_t v) { return (v >> bits) == 0; });
}

// IoU(a) > IoU(b) as exact rationals; a zero union reads as IoU 0.
bool iou_greater(const IouParts& a, const IouParts& b) {
  if (a.uni == 0) return false;
  if (b.uni == 0) return a.inter > 0;
  return static_cast<u128>(a.inter) * b.uni > static_cast<u128>(b.inter) * a.uni;
}

// Greedy rule without the sort precondition; also drives the circuit's hint solver.
MatchResult greedy_core(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                        const AuditThresholds& thr, std::uint64_t rho_prob) {
  MatchResult out;
  out.match.assign(dets.size(), std::nullopt);
  std::vector<bool> taken(gts.size(), false);
  for (std::size_t j = 0; j < dets.size(); ++j) {
    const Detection& d = dets[j];
    if (!thr.conf.met_by(d.confidence, rho_prob)) continue;
    std::optional<std::size_t> best;
    IouParts best_parts;
    for (std::size_t k = 0; k < gts.size(); ++k) {
      if (taken[k] || gts[k].class_id != d.class_id) continue;
      IouParts p = iou_parts(d.box, gts[k].box);
      if (!best || iou_greater(p, best_parts)) {
        best = k;
        best_parts = p;
      }
    }
    if (!best || !iou_compare(d.box, gts[*best].box, thr.iou)) continue;
    taken[*best] = true;
    out.match[j] = best;
    ++out.tp;
    if (gts[*best].critical) ++out.tp_crit;
  }
  return out;
}

std::string_view strip(std::string_view s) {
  if (auto h = s.find('#'); h != std::string_view::npos) s = s.substr(0, h);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Non-empty, comment-free lines split on whitespace.
std::vector<std::vector<std::string>> records(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string_view l = strip(line);
    if (l.empty()) continue;
    std::istringstream fields{std::string(l)};
    std::vector<std::string> rec;
    for (std::string f; fields >> f;) rec.push_back(f);
    out.push_back(std::move(rec));
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw ParseError("bad integer for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

Ratio parse_ratio(std::string_view s, std::string_view what) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) throw ParseError(std::string(what) + " must be written n/d");
  return {parse_u64(s.substr(0, slash), what), parse_u64(s.substr(slash + 1), what)};
}

// Exact floor(x * rho) for a plain decimal x in [0, 1].
std::uint64_t parse_confidence(std::string_view s, std::uint64_t rho) {
  auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  auto digits = [](std::string_view d) {
    return std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (whole.empty() || !digits(whole) || !digits(frac) || frac.size() > 18 ||
      (dot != std::string_view::npos && frac.empty())) {
    throw ParseError("bad confidence '" + std::string(s) + "'");
  }
  u128 scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  u128 num = static_cast<u128>(parse_u64(whole, "confidence")) * scale;
  if (!frac.empty()) num += parse_u64(frac, "confidence");
  if (num > scale) throw ParseError("confidence must lie in [0, 1]");
  return static_cast<std::uint64_t>(num * rho / scale);
}

std::string format_confidence(std::uint64_t conf, std::uint64_t rho) {
  if (conf >= rho) return "1";
  // Smallest decimal grid with 10^k >= rho; rounding up keeps floor(x * rho) == conf.
  unsigned k = 0;
  u128 pow = 1;
  while (pow < rho) {
    pow *= 10;
    ++k;
  }
  u128 num = (static_cast<u128>(conf) * pow + rho - 1) / rho;
  std::string frac(k, '0');
  for (unsigned i = k; i-- > 0; num /= 10) frac[i] = static_cast<char>('0' + static_cast<unsigned>(num % 10));
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  return frac.empty() ? "0" : "0." + frac;
}

void expect(const std::vector<std::string>& rec, std::string_view key, std::size_t arity) {
  if (rec.empty() || rec[0] != key || rec.size() != arity + 1) {
    throw ParseError("expected '" + std::string(key) + "' with " + std::to_string(arity) + " value(s)");
  }
}

std::uint64_t low_u64(const Fr& v) { return v.to_int().limbs[0]; }

}  // namespace

bool Ratio::met_by(std::uint64_t a, std::uint64_t b) const {
  return static_cast<u128>(a) * den >= static_cast<u128>(num) * b;
}

void AuditThresholds::validate() const {
  check_ratio(conf, "theta_conf");
  check_ratio(iou, "theta_iou");
  check_ratio(prec, "tau_prec");
  check_ratio(rec, "tau_rec");
}

void ChallengeSet::validate() const {
  thresholds.validate();
  if (coord_bits == 0 || 4 * coord_bits + 3 > Fr::kCapacityBits) throw UsageError("coord_bits outside the field");
  if (prob_bits == 0 || prob_bits + kMaxDenBits + 2 > Fr::kCapacityBits) throw UsageError("prob_bits outside the field");
  if (rho_prob == 0 || (rho_prob >> prob_bits)) throw UsageError("rho_prob must be in [1, 2^prob_bits)");
  if (rho_bbox == 0) throw UsageError("rho_bbox must be >= 1");
  if (capacity == 0) throw UsageError("capacity must be >= 1");
  for (const auto& img : images) {
    for (const auto& g : img.ground_truths) {
      if (g.class_id == 0) throw UsageError("ground-truth class 0 is reserved for padding");
      if (!box_ordered(g.box)) throw UsageError("ground-truth box must satisfy x1 <= x2, y1 <= y2");
      if (!box_fits(g.box, coord_bits)) throw UsageError("ground-truth coordinate exceeds coord_bits");
    }
  }
}

std::string ChallengeSet::canonical() const {
  auto ratio = [](const Ratio& r) { return std::to_string(r.num) + "/" + std::to_string(r.den); };
  std::string o = "hermes-challenge 1\n";
  o += "coord_bits " + std::to_string(coord_bits) + "\n";
  o += "prob_bits " + std::to_string(prob_bits) + "\n";
  o += "rho_prob " + std::to_string(rho_prob) + "\n";
  o += "rho_bbox " + std::to_string(rho_bbox) + "\n";
  o += "capacity " + std::to_string(capacity) + "\n";
  o += "theta_conf " + ratio(thresholds.conf) + "\n";
  o += "theta_iou " + ratio(thresholds.iou) + "\n";
  o += "tau_prec " + ratio(thresholds.prec) + "\n";
  o += "tau_rec " + ratio(thresholds.rec) + "\n";
  o += "images " + std::to_string(images.size()) + "\n";
  for (const auto& img : images) {
    o += "image " + to_hex(img.digest) + " " + std::to_string(img.ground_truths.size()) + "\n";
    for (const auto& g : img.ground_truths) {
      o += "gt " + std::to_string(g.class_id) + " " + (g.critical ? "1" : "0");
      for (auto v : g.box) o += " " + std::to_string(v);
      o += "\n";
    }
  }
  return o;
}

Digest ChallengeSet::digest() const {
  std::string text = canonical();
  return sha256(ByteSpan(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Fr ChallengeSet::digest_element() const { return Fr::from_bytes_reduce(digest()); }

ChallengeSet parse_challenge_set(std::string_view text) {
  auto recs = records(text);
  std::size_t i = 0;
  auto next = [&](std::string_view key, std::size_t arity) -> const std::vector<std::string>& {
    if (i >= recs.size()) throw ParseError("challenge set truncated before '" + std::string(key) + "'");
    expect(recs[i], key, arity);
    return recs[i++];
  };
  ChallengeSet cs;
  if (next("hermes-challenge", 1)[1] != "1") throw ParseError("unsupported challenge-set version");
  auto bits = [&](std::string_view key) {
    std::uint64_t v = parse_u64(next(key, 1)[1], key);
    if (v > 64) throw ParseError(std::string(key) + " too large");
    return static_cast<unsigned>(v);
  };
  cs.coord_bits = bits("coord_bits");
  cs.prob_bits = bits("prob_bits");
  cs.rho_prob = parse_u64(next("rho_prob", 1)[1], "rho_prob");
  cs.rho_bbox = parse_u64(next("rho_bbox", 1)[1], "rho_bbox");
  cs.capacity = parse_u64(next("capacity", 1)[1], "capacity");
  cs.thresholds.conf = parse_ratio(next("theta_conf", 1)[1], "theta_conf");
  cs.thresholds.iou = parse_ratio(next("theta_iou", 1)[1], "theta_iou");
  cs.thresholds.prec = parse_ratio(next("tau_prec", 1)[1], "tau_prec");
  cs.thresholds.rec = parse_ratio(next("tau_rec", 1)[1], "tau_rec");
  std::uint64_t n = parse_u64(next("images", 1)[1], "images");
  for (std::uint64_t img = 0; img < n; ++img) {
    const auto& head = next("image", 2);
    ChallengeImage ci;
    Bytes d;
    try {
      d = from_hex(head[1]);
    } catch (const Error&) {
      throw ParseError("image digest is not hex");
    }
    if (d.size() != ci.digest.size()) throw ParseError("image digest must be 32 bytes");
    std::copy(d.begin(), d.end(), ci.digest.begin());
    std::uint64_t k = parse_u64(head[2], "ground-truth count");
    for (std::uint64_t g = 0; g < k; ++g) {
      const auto& r = next("gt", 6);
      GroundTruth gt;
      gt.class_id = parse_u64(r[1], "class");
      std::uint64_t crit = parse_u64(r[2], "critical");
      if (crit > 1) throw ParseError("critical flag must be 0 or 1");
      gt.critical = crit == 1;
      for (std::size_t c = 0; c < 4; ++c) gt.box[c] = parse_u64(r[3 + c], "coordinate");
      ci.ground_truths.push_back(gt);
    }
    cs.images.push_back(std::move(ci));
  }
  if (i != recs.size()) throw ParseError("trailing records after the last image");
  try {
    cs.validate();
  } catch (const UsageError& e) {
    throw ParseError(e.what());
  }
  return cs;
}

std::vector<std::vector<Detection>> parse_detections(std::string_view text, std::size_t num_images,
                                                     std::uint64_t rho_prob) {
  auto recs = records(text);
  if (recs.empty()) throw ParseError("empty detection file");
  expect(recs[0], "hermes-detections", 1);
  if (recs[0][1] != "1") throw ParseError("unsupported detection-file version");
  std::vector<std::vector<Detection>> out(num_images);
  std::vector<bool> seen(num_images, false);
  std::size_t i = 1;
  while (i < recs.size()) {
    expect(recs[i], "image", 2);
    std::uint64_t idx = parse_u64(recs[i][1], "image index");
    std::uint64_t count = parse_u64(recs[i][2], "detection count");
    if (idx >= num_images) throw ParseError("image index out of range");
    if (seen[idx]) throw ParseError("image listed twice");
    seen[idx] = true;
    ++i;
    for (std::uint64_t j = 0; j < count; ++j, ++i) {
      if (i >= recs.size()) throw ParseError("detection list truncated");
      expect(recs[i], "det", 6);
      Detection d;
      d.class_id = parse_u64(recs[i][1], "class");
      d.confidence = parse_confidence(recs[i][2], rho_prob);
      for (std::size_t c = 0; c < 4; ++c) d.box[c] = parse_u64(recs[i][3 + c], "coordinate");
      out[idx].push_back(d);
    }
  }
  return out;
}

std::string format_detections(const std::vector<std::vector<Detection>>& dets, std::uint64_t rho_prob) {
  std::string o = "hermes-detections 1\n";
  for (std::size_t i = 0; i < dets.size(); ++i) {
    o += "image " + std::to_string(i) + " " + std::to_string(dets[i].size()) + "\n";
    for (const auto& d : dets[i]) {
      o += "det " + std::to_string(d.class_id) + " " + format_confidence(d.confidence, rho_prob);
      for (auto v : d.box) o += " " + std::to_string(v);
      o += "\n";
    }
  }
  return o;
}

std::uint64_t box_area(const Box& b) {
  if (!box_ordered(b)) throw UsageError("box must satisfy x1 <= x2, y1 <= y2");
  return (b[2] - b[0]) * (b[3] - b[1]);
}

IouParts iou_parts(const Box& a, const Box& b) {
  const std::uint64_t ix1 = std::max(a[0], b[0]), iy1 = std::max(a[1], b[1]);
  const std::uint64_t ix2 = std::min(a[2], b[2]), iy2 = std::min(a[3], b[3]);
  IouParts p;
  p.inter = (ix2 > ix1 ? ix2 - ix1 : 0) * (iy2 > iy1 ? iy2 - iy1 : 0);
  p.uni = box_area(a) + box_area(b) - p.inter;
  return p;
}

bool iou_compare(const Box& a, const Box& b, const Ratio& theta) {
  IouParts p = iou_parts(a, b);
  if (p.uni == 0) return theta.num == 0;
  return theta.met_by(p.inter, p.uni);
}

MatchResult greedy_match(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                         const AuditThresholds& thr, std::uint64_t rho_prob) {
  for (std::size_t j = 1; j < dets.size(); ++j) {
    if (dets[j - 1].confidence < dets[j].confidence) throw UsageError("detections are not sorted by confidence");
  }
  for (const auto& d : dets)
    if (!box_ordered(d.box)) throw UsageError("detection box must satisfy x1 <= x2, y1 <= y2");
  return greedy_core(dets, gts, thr, rho_prob);
}

MetricResult check_metrics(std::size_t tp, std::size_t tp_crit, std::size_t m, std::size_t k,
                           std::size_t total_crit, const AuditThresholds& thr) {
  if (tp > m || tp > k || tp_crit > tp || tp_crit > total_crit || total_crit > k) {
    throw UsageError("inconsistent match counts");
  }
  MetricResult r;
  r.pass = thr.prec.met_by(tp, m) && thr.rec.met_by(tp, k);
  r.crit_pass = tp_crit == total_crit;
  return r;
}

SortResult off_circuit_sort(const std::vector<Detection>& dets) {
  SortResult r;
  r.perm.resize(dets.size());
  std::iota(r.perm.begin(), r.perm.end(), std::size_t{0});
  std::stable_sort(r.perm.begin(), r.perm.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].confidence > dets[b].confidence; });
  for (std::size_t i : r.perm) r.dets.push_back(dets[i]);
  return r;
}

std::size_t AuditOutcome::total_tp() const {
  std::size_t s = 0;
  for (const auto& m : matches) s += m.tp;
  return s;
}

std::size_t AuditOutcome::total_tp_crit() const {
  std::size_t s = 0;
  for (const auto& m : matches) s += m.tp_crit;
  return s;
}

AuditOutcome evaluate_audit(const ChallengeSet& cs, const std::vector<std::vector<Detection>>& dets) {
  if (dets.size() != cs.images.size()) throw UsageError("one detection list per challenge image is required");
  AuditOutcome out;
  out.pass = true;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const auto& gts = cs.images[i].ground_truths;
    MatchResult m = greedy_match(dets[i], gts, cs.thresholds, cs.rho_prob);
    auto crit = static_cast<std::size_t>(std::count_if(gts.begin(), gts.end(), [](const auto& g) { return g.critical; }));
    MetricResult r = check_metrics(m.tp, m.tp_crit, dets[i].size(), gts.size(), crit, cs.thresholds);
    out.pass = out.pass && r.pass && r.crit_pass;
    out.matches.push_back(std::move(m));
    out.metrics.push_back(r);
  }
  return out;
}

std::string det_label(std::size_t image, std::size_t slot, std::string_view field) {
  return "D/" + std::to_string(image) + "/" + std::to_string(slot) + "/" + std::string(field);
}

std::string gt_label(std::size_t image, std::size_t index, std::string_view field) {
  return "G/" + std::to_string(image) + "/" + std::to_string(index) + "/" + std::string(field);
}

std::string match_label(std::size_t image, std::size_t slot, std::size_t gt) {
  return "match/" + std::to_string(image) + "/" + std::to_string(slot) + "/" + std::to_string(gt);
}

namespace {

std::array<Fr, 6> det_fields(const Detection& d) {
  return {Fr::from_u64(d.class_id), Fr::from_u64(d.confidence), Fr::from_u64(d.box[0]),
          Fr::from_u64(d.box[1]),   Fr::from_u64(d.box[2]),     Fr::from_u64(d.box[3])};
}

const Detection& slot_or_pad(const std::vector<std::vector<Detection>>& dets, std::size_t i, std::size_t j) {
  static const Detection kPad{};
  return j < dets[i].size() ? dets[i][j] : kPad;
}

const std::array<std::pair<const char*, Ratio AuditThresholds::*>, 4> kThresholdFields{{
    {"theta_conf", &AuditThresholds::conf},
    {"theta_iou", &AuditThresholds::iou},
    {"tau_prec", &AuditThresholds::prec},
    {"tau_rec", &AuditThresholds::rec},
}};

}  // namespace

r1cs::Assignment AuditInstance::assignment(const ChallengeSet& cs) const {
  r1cs::Assignment in;
  in[protocol::kLabelDeltaCommit] = Fr::from_u64(audit_tag());
  in["H_I"] = cs.digest_element();
  in["rho_prob"] = Fr::from_u64(cs.rho_prob);
  in["rho_bbox"] = Fr::from_u64(cs.rho_bbox);
  for (const auto& [name, field] : kThresholdFields) {
    in[std::string(name) + "_num"] = Fr::from_u64((cs.thresholds.*field).num);
    in[std::string(name) + "_den"] = Fr::from_u64((cs.thresholds.*field).den);
  }
  for (std::size_t i = 0; i < cs.images.size(); ++i) {
    const auto& gts = cs.images[i].ground_truths;
    for (std::size_t k = 0; k < gts.size(); ++k) {
      in[gt_label(i, k, "id")] = Fr::from_u64(gts[k].class_id);
      in[gt_label(i, k, "crit")] = gts[k].critical ? Fr::one() : Fr::zero();
      for (std::size_t c = 0; c < 4; ++c) in[gt_label(i, k, kDetFields[2 + c])] = Fr::from_u64(gts[k].box[c]);
    }
  }
  in[protocol::kLabelTimestamp] = Fr::from_u64(timestamp);
  auto limbs = protocol::nonce_limbs(nonce);
  for (std::size_t i = 0; i < 4; ++i) in[protocol::nonce_label(i)] = limbs[i];
  for (std::size_t i = 0; i < cs.images.size(); ++i) {
    for (std::size_t j = 0; j < cs.capacity; ++j) {
      auto f = det_fields(slot_or_pad(detections, i, j));
      for (std::size_t c = 0; c < 6; ++c) in[det_label(i, j, kDetFields[c])] = f[c];
    }
  }
  in[protocol::kLabelBlinding] = s_sec;
  return in;
}

std::vector<Fr> AuditInstance::commitment_message(const ChallengeSet& cs) const {
  std::vector<Fr> m{Fr::from_u64(audit_tag()), Fr::from_u64(cs.images.size())};
  for (std::size_t i = 0; i < cs.images.size(); ++i)
    for (std::size_t j = 0; j < cs.capacity; ++j)
      for (const Fr& f : det_fields(slot_or_pad(detections, i, j))) m.push_back(f);
  m.push_back(Fr::from_u64(timestamp));
  for (const auto& limb : protocol::nonce_limbs(nonce)) m.push_back(limb);
  return m;
}

std::vector<Fr> AuditInstance::public_inputs(const ChallengeSet& cs) const {
  std::vector<Fr> x{Fr::from_u64(audit_tag()), cs.digest_element(), Fr::from_u64(cs.rho_prob),
                    Fr::from_u64(cs.rho_bbox)};
  for (const auto& [name, field] : kThresholdFields) {
    x.push_back(Fr::from_u64((cs.thresholds.*field).num));
    x.push_back(Fr::from_u64((cs.thresholds.*field).den));
  }
  for (const auto& img : cs.images) {
    for (const auto& g : img.ground_truths) {
      x.push_back(Fr::from_u64(g.class_id));
      x.push_back(g.critical ? Fr::one() : Fr::zero());
      for (auto v : g.box) x.push_back(Fr::from_u64(v));
    }
  }
  x.push_back(Fr::from_u64(timestamp));
  for (const auto& limb : protocol::nonce_limbs(nonce)) x.push_back(limb);
  x.push_back(c);
  x.push_back(pass ? Fr::one() : Fr::zero());
  return x;
}

AuditInstance make_audit_inputs(const ChallengeSet& cs, std::vector<std::vector<Detection>> dets,
                                std::uint64_t timestamp, const protocol::Nonce& nonce, const Fr& s_sec) {
  cs.validate();
  if (dets.size() != cs.images.size()) throw UsageError("one detection list per challenge image is required");
  AuditInstance inst;
  for (auto& list : dets) {
    if (list.size() > cs.capacity) throw UsageError("detections exceed the per-image capacity");
    for (const auto& d : list) {
      if (d.class_id == 0) throw UsageError("detection class 0 is reserved for padding");
      if (d.confidence > cs.rho_prob) throw UsageError("confidence exceeds rho_prob");
      if (!box_ordered(d.box)) throw UsageError("detection box must satisfy x1 <= x2, y1 <= y2");
      if (!box_fits(d.box, cs.coord_bits)) throw UsageError("detection coordinate exceeds coord_bits");
    }
    inst.detections.push_back(off_circuit_sort(list).dets);
  }
  inst.timestamp = timestamp;
  inst.nonce = nonce;
  inst.s_sec = s_sec;
  inst.pass = evaluate_audit(cs, inst.detections).pass;
  inst.c = commitment::commit(inst.commitment_message(cs), {s_sec}).c;
  return inst;
}

namespace {

struct SlotWires {
  Var id, pr;
  std::array<Var, 4> box;
  LC area;
  Var conf_ok;
  LC present;
};

// max(x, c) or min(x, c) for a range-checked x and a constant c.
LC clamp(Builder& b, const LC& x, std::uint64_t c, unsigned bits, bool take_max, const std::string& label) {
  Builder::Scope scope(b, label);
  Var ge = gadgets::geq(b, x, LC::constant(c), bits, gadgets::RangeCheck::kNone, "cmp");
  return take_max ? LC(gadgets::select(b, ge, x, LC::constant(c), "sel"))
                  : LC(gadgets::select(b, ge, LC::constant(c), x, "sel"));
}

}  // namespace

r1cs::ConstraintSystem build_audit_circuit(const ChallengeSet& cs) {
  cs.validate();
  const AuditThresholds& thr = cs.thresholds;
  if (thr.conf.num == 0) throw UsageError("theta_conf must be positive so padding never matches");
  if (thr.iou.num == 0) throw UsageError("theta_iou must be positive");
  const unsigned cb = cs.coord_bits;
  const std::size_t n_img = cs.images.size();
  const std::size_t cap = cs.capacity;

  Builder b;
  Var delta = b.alloc_public(protocol::kLabelDeltaCommit);
  Var h_i = b.alloc_public("H_I");
  Var rho_prob = b.alloc_public("rho_prob");
  Var rho_bbox = b.alloc_public("rho_bbox");
  std::vector<std::pair<Var, std::uint64_t>> pinned;
  for (const auto& [name, field] : kThresholdFields) {
    pinned.emplace_back(b.alloc_public(std::string(name) + "_num"), (thr.*field).num);
    pinned.emplace_back(b.alloc_public(std::string(name) + "_den"), (thr.*field).den);
  }
  for (std::size_t i = 0; i < n_img; ++i) {
    const auto& gts = cs.images[i].ground_truths;
    for (std::size_t k = 0; k < gts.size(); ++k) {
      pinned.emplace_back(b.alloc_public(gt_label(i, k, "id")), gts[k].class_id);
      pinned.emplace_back(b.alloc_public(gt_label(i, k, "crit")), gts[k].critical ? 1 : 0);
      for (std::size_t c = 0; c < 4; ++c) pinned.emplace_back(b.alloc_public(gt_label(i, k, kDetFields[2 + c])), gts[k].box[c]);
    }
  }
  Var t = b.alloc_public(protocol::kLabelTimestamp);
  std::array<Var, 4> nu;
  for (std::size_t i = 0; i < 4; ++i) nu[i] = b.alloc_public(protocol::nonce_label(i));

  std::vector<std::vector<std::array<Var, 6>>> raw(n_img, std::vector<std::array<Var, 6>>(cap));
  for (std::size_t i = 0; i < n_img; ++i)
    for (std::size_t j = 0; j < cap; ++j)
      for (std::size_t c = 0; c < 6; ++c) raw[i][j][c] = b.alloc_private(det_label(i, j, kDetFields[c]));
  Var s_sec = b.alloc_private(protocol::kLabelBlinding);
  std::vector<std::vector<std::vector<Var>>> hints(n_img);
  for (std::size_t i = 0; i < n_img; ++i) {
    hints[i].assign(cap, std::vector<Var>(cs.images[i].ground_truths.size()));
    for (std::size_t j = 0; j < cap; ++j)
      for (std::size_t k = 0; k < hints[i][j].size(); ++k) hints[i][j][k] = b.alloc(match_label(i, j, k));
  }

  // The challenge set, thresholds and scaling are fixed at build time.
  b.enforce_equal(delta, LC::constant(audit_tag()), "assert_delta_commit");
  b.enforce_equal(h_i, LC::constant(cs.digest_element()), "assert_dataset");
  b.enforce_equal(rho_prob, LC::constant(cs.rho_prob), "assert_rho_prob");
  b.enforce_equal(rho_bbox, LC::constant(cs.rho_bbox), "assert_rho_bbox");
  for (const auto& [v, value] : pinned) b.enforce_equal(v, LC::constant(value), "assert_public");

  const unsigned den_bits = kMaxDenBits;
  const unsigned conf_bits = cs.prob_bits + den_bits;
  const unsigned iou_bits = 2 * cb + 1 + den_bits;
  const unsigned rank_bits = 4 * cb + 1;
  const Fr conf_rhs = Fr::from_u64(thr.conf.num) * Fr::from_u64(cs.rho_prob);

  std::vector<LC> image_ok;
  for (std::size_t i = 0; i < n_img; ++i) {
    const auto& gts = cs.images[i].ground_truths;
    const std::size_t kk = gts.size();
    const std::string img = "img" + std::to_string(i);
    Builder::Scope img_scope(b, img);

    std::vector<SlotWires> slots(cap);
    for (std::size_t j = 0; j < cap; ++j) {
      Builder::Scope scope(b, "slot" + std::to_string(j));
      SlotWires& s = slots[j];
      s.id = raw[i][j][0];
      s.pr = raw[i][j][1];
      for (std::size_t c = 0; c < 4; ++c) s.box[c] = raw[i][j][2 + c];
      gadgets::bit_decompose(b, s.pr, cs.prob_bits, "range_pr");
      for (std::size_t c = 0; c < 4; ++c) gadgets::bit_decompose(b, s.box[c], cb, "range_" + std::string(kDetFields[2 + c]));
      Var ox = gadgets::geq(b, s.box[2], s.box[0], cb, gadgets::RangeCheck::kNone, "order_x");
      Var oy = gadgets::geq(b, s.box[3], s.box[1], cb, gadgets::RangeCheck::kNone, "order_y");
      b.enforce_equal(ox, LC::constant(1), "assert_order_x");
      b.enforce_equal(oy, LC::constant(1), "assert_order_y");
      Var pad = gadgets::is_equal(b, s.id, LC(), "is_pad");
      b.enforce(pad, s.pr, LC(), "pad_confidence");
      s.present = gadgets::not_gate(pad);
      s.area = gadgets::mul(b, LC(s.box[2]) - s.box[0], LC(s.box[3]) - s.box[1], "area");
      s.conf_ok = gadgets::geq(b, LC(s.pr) * Fr::from_u64(thr.conf.den), LC::constant(conf_rhs), conf_bits,
                               gadgets::RangeCheck::kNone, "conf_ok");
      if (j > 0) {
        Var sorted = gadgets::geq(b, slots[j - 1].pr, s.pr, cs.prob_bits, gadgets::RangeCheck::kNone, "sorted");
        b.enforce_equal(sorted, LC::constant(1), "assert_sorted");
      }
    }

    // Pairwise predicates.
    std::vector<std::vector<LC>> valid(cap, std::vector<LC>(kk));
    std::vector<std::vector<Var>> inter(cap, std::vector<Var>(kk));
    std::vector<std::vector<LC>> uni(cap, std::vector<LC>(kk));
    for (std::size_t j = 0; j < cap; ++j) {
      const SlotWires& s = slots[j];
      std::map<std::uint64_t, Var> class_eq;
      for (std::size_t k = 0; k < kk; ++k) {
        const GroundTruth& g = gts[k];
        Builder::Scope scope(b, "pair" + std::to_string(j) + "_" + std::to_string(k));
        auto it = class_eq.find(g.class_id);
        if (it == class_eq.end()) {
          it = class_eq.emplace(g.class_id, gadgets::is_equal(b, s.id, LC::constant(g.class_id), "class")).first;
        }
        LC ix1 = clamp(b, s.box[0], g.box[0], cb, true, "ix1");
        LC iy1 = clamp(b, s.box[1], g.box[1], cb, true, "iy1");
        LC ix2 = clamp(b, s.box[2], g.box[2], cb, false, "ix2");
        LC iy2 = clamp(b, s.box[3], g.box[3], cb, false, "iy2");
        Var ow = gadgets::geq(b, ix2, ix1, cb, gadgets::RangeCheck::kNone, "overlap_x");
        Var oh = gadgets::geq(b, iy2, iy1, cb, gadgets::RangeCheck::kNone, "overlap_y");
        Var iw = gadgets::mul(b, ow, ix2 - ix1, "iw");
        Var ih = gadgets::mul(b, oh, iy2 - iy1, "ih");
        inter[j][k] = gadgets::mul(b, iw, ih, "inter");
        const std::uint64_t area_g = box_area(g.box);
        uni[j][k] = s.area + LC::constant(area_g) - inter[j][k];
        Var cross = gadgets::geq(b, LC(inter[j][k]) * Fr::from_u64(thr.iou.den), uni[j][k] * Fr::from_u64(thr.iou.num),
                                 iou_bits, gadgets::RangeCheck::kNone, "iou_cross");
        Var empty = gadgets::is_equal(b, inter[j][k], LC(), "inter_zero");
        Var iou_ok = gadgets::mul(b, cross, gadgets::not_gate(empty), "iou_ok");
        Var cls_conf = gadgets::mul(b, it->second, s.conf_ok, "class_conf");
        valid[j][k] = gadgets::mul(b, cls_conf, iou_ok, "valid");
      }
    }

    // Greedy assignment hints, solved natively from the detection wires.
    const auto& m = hints[i];
    b.add_solver([m, slots, gts, thr, rho = cs.rho_prob](r1cs::SolverContext& ctx) {
      std::vector<Detection> dets(slots.size());
      for (std::size_t j = 0; j < slots.size(); ++j) {
        dets[j].class_id = low_u64(ctx.get(slots[j].id));
        dets[j].confidence = low_u64(ctx.get(slots[j].pr));
        for (std::size_t c = 0; c < 4; ++c) dets[j].box[c] = low_u64(ctx.get(slots[j].box[c]));
        if (!box_ordered(dets[j].box)) dets[j].box = {};
      }
      MatchResult r = greedy_core(dets, gts, thr, rho);
      for (std::size_t j = 0; j < m.size(); ++j)
        for (std::size_t k = 0; k < m[j].size(); ++k) ctx.set(m[j][k], r.match[j] == k ? Fr::one() : Fr::zero());
    });

    LC tp, tp_crit, m_count;
    for (std::size_t j = 0; j < cap; ++j) m_count += slots[j].present;
    std::vector<LC> col(kk);
    for (std::size_t j = 0; j < cap; ++j) {
      Builder::Scope scope(b, "match" + std::to_string(j));
      LC row;
      std::vector<Var> cand(kk);
      for (std::size_t k = 0; k < kk; ++k) {
        const std::string tag = std::to_string(k);
        gadgets::assert_boolean(b, m[j][k], "bool" + tag);
        // A claimed match is a valid pair whose ground truth no earlier detection took.
        b.enforce(m[j][k], gadgets::not_gate(valid[j][k]), LC(), "valid" + tag);
        b.enforce(m[j][k], col[k], LC(), "unused" + tag);
        cand[k] = gadgets::mul(b, valid[j][k], gadgets::not_gate(col[k]), "cand" + tag);
        row += m[j][k];
        tp += m[j][k];
        if (gts[k].critical) tp_crit += m[j][k];
      }
      gadgets::assert_boolean(b, row, "at_most_one");
      // No available valid pair may be skipped.
      for (std::size_t k = 0; k < kk; ++k) b.enforce(cand[k], gadgets::not_gate(row), LC(), "maximal" + std::to_string(k));
      // The chosen ground truth has the highest IoU among candidates, lowest index on ties.
      for (std::size_t k = 0; k < kk; ++k) {
        for (std::size_t k2 = k + 1; k2 < kk; ++k2) {
          if (gts[k].class_id != gts[k2].class_id) continue;
          const std::string tag = std::to_string(k) + "_" + std::to_string(k2);
          Var lhs = gadgets::mul(b, inter[j][k], uni[j][k2], "rank_l" + tag);
          Var rhs = gadgets::mul(b, inter[j][k2], uni[j][k], "rank_r" + tag);
          Var ge = gadgets::geq(b, lhs, rhs, rank_bits, gadgets::RangeCheck::kNone, "rank" + tag);
          Var pick_k = gadgets::mul(b, m[j][k], cand[k2], "pick_l" + tag);
          Var pick_k2 = gadgets::mul(b, m[j][k2], cand[k], "pick_r" + tag);
          b.enforce(pick_k, gadgets::not_gate(ge), LC(), "argmax_l" + tag);
          b.enforce(pick_k2, ge, LC(), "argmax_r" + tag);
        }
      }
      for (std::size_t k = 0; k < kk; ++k) col[k] += m[j][k];
    }
    for (std::size_t k = 0; k < kk; ++k) gadgets::assert_boolean(b, col[k], "gt_once" + std::to_string(k));

    // Metrics: TP <= min(K, M_max), M_i <= M_max.
    const std::uint64_t total_crit =
        static_cast<std::uint64_t>(std::count_if(gts.begin(), gts.end(), [](const auto& g) { return g.critical; }));
    const unsigned count_bits = static_cast<unsigned>(std::bit_width(std::max<std::uint64_t>(cap, kk))) + den_bits;
    Var prec = gadgets::geq(b, tp * Fr::from_u64(thr.prec.den), m_count * Fr::from_u64(thr.prec.num), count_bits,
                            gadgets::RangeCheck::kNone, "precision");
    Var rec = gadgets::geq(b, tp * Fr::from_u64(thr.rec.den), LC::constant(thr.rec.num * kk), count_bits,
                           gadgets::RangeCheck::kNone, "recall");
    Var crit = gadgets::is_equal(b, tp_crit, LC::constant(total_crit), "crit_pass");
    image_ok.push_back(gadgets::and_all(b, {prec, rec, crit}, "image_pass"));
  }
  LC pass = gadgets::and_all(b, image_ok, "accumulate");

  std::vector<LC> msg{delta, LC::constant(n_img)};
  for (std::size_t i = 0; i < n_img; ++i)
    for (std::size_t j = 0; j < cap; ++j)
      for (std::size_t c = 0; c < 6; ++c) msg.push_back(raw[i][j][c]);
  msg.push_back(t);
  for (Var v : nu) msg.push_back(v);
  msg.push_back(s_sec);
  LC c = commitment::sponge_gadget(b, msg, "commit");
  b.output(protocol::kLabelCommitment, c);
  b.output("PASS", pass);
  return b.finalize();
}

AuditScenario five_image_audit_scenario() {
  AuditScenario sc;
  ChallengeSet& cs = sc.challenge;
  cs.capacity = 4;
  cs.thresholds = {{1, 2}, {1, 2}, {3, 4}, {7, 10}};
  enum : std::uint64_t { kCar = 1, kPedestrian = 2, kLight = 3, kCyclist = 4 };
  // Per image: car, cyclist, traffic light, and a critical pedestrian.
  const std::array<std::array<Box, 4>, 5> boxes{{
      {{{100, 300, 260, 420}, {600, 310, 660, 430}, {900, 80, 930, 150}, {420, 280, 470, 440}}},
      {{{40, 330, 240, 470}, {700, 300, 770, 440}, {1010, 60, 1040, 130}, {520, 260, 565, 410}}},
      {{{300, 350, 520, 500}, {80, 290, 150, 420}, {640, 40, 672, 118}, {820, 300, 866, 452}}},
      {{{900, 320, 1120, 480}, {210, 300, 276, 436}, {480, 90, 506, 160}, {650, 270, 700, 430}}},
      {{{150, 340, 380, 490}, {980, 280, 1050, 410}, {700, 70, 730, 145}, {560, 300, 604, 446}}},
  }};
  const std::array<std::uint64_t, 4> classes{kCar, kCyclist, kLight, kPedestrian};
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    ChallengeImage img;
    img.digest = sha256(Bytes{'i', 'm', 'g', static_cast<std::uint8_t>('0' + i)});
    for (std::size_t k = 0; k < 4; ++k) img.ground_truths.push_back({boxes[i][k], classes[k], k == 3});
    cs.images.push_back(std::move(img));
  }
  auto jitter = [](const Box& b, std::uint64_t d) { return Box{b[0] + d, b[1] + d, b[2] + d, b[3] - d}; };
  const std::array<std::uint64_t, 4> conf{97, 88, 76, 64};
  sc.detections.resize(5);
  // Images 0-3 find three objects each, including the pedestrian; one non-critical object is missed.
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t missed = i % 3;
    std::size_t slot = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      if (k == missed) continue;
      sc.detections[i].push_back({jitter(boxes[i][k], 2 + k), classes[k], conf[slot++]});
    }
  }
  // Image 4 misses the pedestrian and reports a phantom car.
  for (std::size_t k = 0; k < 3; ++k) sc.detections[4].push_back({jitter(boxes[4][k], 3), classes[k], conf[k]});
  sc.detections[4].push_back({{1150, 500, 1260, 600}, kCar, 58});
  return sc;
}

}  // namespace hermes::circuits

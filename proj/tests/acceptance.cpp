// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers as arguments
// to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hermes/circuits/audit.hpp"
#include "hermes/circuits/rss.hpp"
#include "hermes/cli/cli.hpp"
#include "hermes/commitment/commitment.hpp"
#include "hermes/field/scaling.hpp"
#include "hermes/protocol/deployment.hpp"
#include "hermes/sim/sim.hpp"

using namespace hermes;
using namespace hermes::circuits;
using namespace hermes::protocol;

namespace {

constexpr std::uint64_t kNow = 1700000000;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Shared fixtures: EA, one vehicle, and both deployed circuits.
struct Fleet {
  SigningKey ea = keygen_from_seed(1001);
  SigningKey vehicle = keygen_from_seed(1002);
  Certificate cert = issue_certificate(ea, "VID-ACCEPT", vehicle.vk, kNow - 86400, kNow + 86400);
  RssConfig rss_cfg;
  std::unique_ptr<Deployment> rss, audit;
  AuditScenario audit_sc = five_image_audit_scenario();

  Fleet() {
    Rng r1(11), r2(12);
    rss = std::make_unique<Deployment>(build_rss_circuit(rss_cfg), kAppPerception, r1);
    audit = std::make_unique<Deployment>(build_audit_circuit(audit_sc.challenge), kAppAudit, r2);
  }

  std::unique_ptr<VerifierState> verifier(std::initializer_list<const Deployment*> deps) const {
    auto st = std::make_unique<VerifierState>(ea.vk);
    for (const Deployment* d : deps) d->register_with(*st);
    return st;
  }

  ProofPackage rss_package(const RssScenario& s, std::uint64_t now, Rng& rng) const {
    RssInstance inst = make_rss_inputs(s, rss_cfg, now, Nonce{}, Fr::zero());
    r1cs::Assignment in = inst.assignment();
    stamp_inputs(in, now, rng);
    return create_package(rss->prover(vehicle, cert), in, rng);
  }
};

const Fleet& fleet() {
  static const Fleet f;
  return f;
}

RssScenario random_rss_scenario(Rng& rng) {
  RssScenario s = worked_rss_scenario();
  s.probability = rng.uniform(101) / 100.0;
  double x1 = rng.uniform(1800), y1 = rng.uniform(1000);
  s.box = {x1, y1, x1 + rng.uniform(120), y1 + rng.uniform(120)};
  s.lat_v = rng.unit() * 180 - 90;
  s.lon_v = rng.unit() * 360 - 180;
  s.lat_s = s.lat_v + rng.unit() * 0.001;
  s.lon_s = s.lon_v + rng.unit() * 0.001;
  s.speed = rng.unit() * 40;
  s.yaw = rng.unit() * 360;
  s.current_distance = rng.unit() * 150;
  s.cloud = rng.unit();
  s.precip = rng.unit();
  s.fog = rng.unit();
  return s;
}

std::size_t pub_index(const r1cs::ConstraintSystem& cs, const std::string& label) { return cs.find_wire(label) - 1; }

// ---------------------------------------------------------------------------------------

void scaling_roundtrip(Outcome& o) {
  auto t0 = Clock::now();
  Rng rng(1);
  const std::uint64_t rhos[] = {1, 10, 100, 1000, 10000, 1000000};
  std::size_t bad = 0;
  double worst = 0;  // |error| * rho
  for (int i = 0; i < 100000; ++i) {
    const field::ScalingFactor rho(rhos[rng.uniform(6)]);
    // |floor(x rho)| <= 1e12, far inside p / 2.
    const double x = (rng.unit() * 2 - 1) * 1e6;
    const double back = field::unscale(field::scale<Fr>(x, rho), rho);
    const double err = std::fabs(back - x) * static_cast<double>(rho.value());
    worst = std::max(worst, err);
    if (!(err < 1)) ++bad;
  }
  const field::ScalingFactor hundred(100);
  const Fr z = field::scale<Fr>(0.75, hundred);
  const double secs = seconds_since(t0);
  o.require(bad == 0, "roundtrip error >= 1/rho");
  o.require(z == Fr::from_u64(75), "scale(0.75, 100) = 75");
  o.require(field::unscale(z, hundred) == 0.75, "unscale(75, 100) = 0.75");
  o.require(secs < 1.0, "runtime < 1 s");
  o.detail << "1e5 samples, max |err| * rho = " << worst << ", 0.75 -> " << z.to_u64() << " -> "
           << field::unscale(z, hundred) << ", " << secs << " s";
}

void rss_number(Outcome& o) {
  const RssDistance d = rss_safe_distance(13.41, 1.0, 0.75, 9.81);
  // Closed form evaluated directly.
  const double braking = 13.41 * 13.41 / (2 * 0.75 * 9.81);
  o.require(std::fabs(d.total - 25.63) <= 0.05, "total 25.63 +- 0.05");
  o.require(std::fabs(d.reaction - 13.41) <= 0.01, "reaction 13.41 +- 0.01");
  o.require(std::fabs(d.braking - 12.22) <= 0.01, "braking 12.22 +- 0.01");
  o.require(std::fabs(d.braking - braking) < 1e-12, "braking matches v^2 / (2 mu g)");
  char buf[128];
  std::snprintf(buf, sizeof buf, "total %.4f m = reaction %.4f + braking %.4f", d.total, d.reaction, d.braking);
  o.detail << buf;
}

void groth16_completeness(Outcome& o) {
  const Fleet& f = fleet();
  const auto& cs = f.rss->system();
  const std::size_t safe = pub_index(cs, "SAFE");
  auto t0 = Clock::now();
  Rng rng(3);
  std::size_t accepted = 0, safe_count = 0, outcome_mismatch = 0;
  for (int i = 0; i < 1000; ++i) {
    RssScenario s = random_rss_scenario(rng);
    RssInstance inst = make_rss_inputs(s, f.rss_cfg, kNow + i, random_nonce(rng), commitment::BlindingFactor::sample(rng).value);
    r1cs::Witness w = cs.generate_witness(inst.assignment());
    groth16::Proof proof = groth16::prove(f.rss->keys().pk, f.rss->qap(), w, rng);
    std::vector<Fr> x = cs.public_inputs(w);
    if (groth16::verify(f.rss->keys().vk, proof, x)) ++accepted;
    const bool circuit_safe_bit = x[safe] == Fr::one();
    safe_count += circuit_safe_bit;
    // Native predicate on the scaled values as the independent reference.
    const std::uint64_t pr = static_cast<std::uint64_t>(std::floor(s.probability * 100 + 1e-9));
    const std::uint64_t dc = static_cast<std::uint64_t>(std::floor(s.current_distance * 100));
    const std::uint64_t ds = static_cast<std::uint64_t>(std::floor(rss_safe_distance(s.speed, 1.0).total * 100));
    if (circuit_safe_bit != (circuit_safe(pr, f.rss_cfg.theta, dc, ds) == 1)) ++outcome_mismatch;
  }
  const double secs = seconds_since(t0);
  o.require(accepted == 1000, "100 % acceptance");
  o.require(outcome_mismatch == 0, "public SAFE equals the native predicate");
  o.require(secs < 60, "total < 60 s");
  o.detail << accepted << "/1000 accepted (" << safe_count << " SAFE = 1, " << outcome_mismatch
           << " disagreeing with the native predicate), " << secs << " s";
}

void soundness_smoke(Outcome& o) {
  const Fleet& f = fleet();
  const auto& cs = f.rss->system();
  const auto& vk = f.rss->keys().vk;
  auto t0 = Clock::now();
  Rng rng(4);
  // A second setup of the same circuit supplies the swapped key.
  Rng other_rng(99);
  const groth16::KeyPair other = groth16::setup(f.rss->qap(), other_rng);

  std::vector<std::pair<groth16::Proof, std::vector<Fr>>> honest;
  for (int i = 0; i < 20; ++i) {
    RssInstance inst = make_rss_inputs(random_rss_scenario(rng), f.rss_cfg, kNow, random_nonce(rng), Fr::from_u64(i + 1));
    r1cs::Witness w = cs.generate_witness(inst.assignment());
    auto proof = groth16::prove(f.rss->keys().pk, f.rss->qap(), w, rng);
    honest.emplace_back(proof, cs.public_inputs(w));
  }
  auto random_g1 = [&] { return (Fr::random_nonzero(rng) * pairing::G1(pairing::g1_generator())).to_affine(); };
  auto random_g2 = [&] { return (Fr::random_nonzero(rng) * pairing::G2(pairing::g2_generator())).to_affine(); };

  std::size_t trials = 0, accepts = 0, per_kind[3] = {0, 0, 0};
  for (int i = 0; i < 1200; ++i) {
    const auto& [proof, x] = honest[i % honest.size()];
    const int kind = i % 3;
    bool ok = false;
    if (kind == 0) {
      auto bad = x;
      bad[rng.uniform(bad.size())] += Fr::random_nonzero(rng);
      ok = groth16::verify(vk, proof, bad);
    } else if (kind == 1) {
      auto bad = proof;
      switch (rng.uniform(4)) {
        case 0: bad.a = random_g1(); break;
        case 1: bad.b = random_g2(); break;
        case 2: bad.c = random_g1(); break;
        default: std::swap(bad.a, bad.c); break;
      }
      if (bad == proof) bad.c = random_g1();
      ok = groth16::verify(vk, bad, x);
    } else {
      ok = groth16::verify(other.vk, proof, x);
    }
    ++trials;
    ++per_kind[kind];
    accepts += ok;
  }
  // Sanity: the untampered proofs still verify.
  std::size_t honest_ok = 0;
  for (const auto& [proof, x] : honest) honest_ok += groth16::verify(vk, proof, x);
  const double secs = seconds_since(t0);
  o.require(trials >= 1000, ">= 1000 trials");
  o.require(accepts == 0, "0 acceptances");
  o.require(honest_ok == honest.size(), "untampered proofs verify");
  o.require(secs < 60, "< 60 s");
  o.detail << trials << " trials (" << per_kind[0] << " public input, " << per_kind[1] << " proof element, "
           << per_kind[2] << " swapped vk), " << accepts << " accepted, " << secs << " s";
}

// Audit proof shared by criteria 5 and 6.
struct AuditRun {
  AuditInstance inst;
  groth16::Proof proof;
  std::vector<Fr> x;
  bool verified = false;
  double seconds = 0;
};

const AuditRun& audit_run() {
  static const AuditRun run = [] {
    const Fleet& f = fleet();
    auto t0 = Clock::now();
    Rng rng(6);
    AuditRun r;
    const auto& sys = f.audit->system();
    r.inst = make_audit_inputs(f.audit_sc.challenge, f.audit_sc.detections, kNow, random_nonce(rng),
                               commitment::BlindingFactor::sample(rng).value);
    r1cs::Witness w = sys.generate_witness(r.inst.assignment(f.audit_sc.challenge));
    r.proof = groth16::prove(f.audit->keys().pk, f.audit->qap(), w, rng);
    r.x = sys.public_inputs(w);
    r.verified = groth16::verify(f.audit->keys().vk, r.proof, r.x);
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

void proof_succinctness(Outcome& o) {
  const Fleet& f = fleet();
  Rng rng(5);
  ProofPackage pkg = f.rss_package(worked_rss_scenario(), kNow, rng);
  const std::size_t rss_bytes = pkg.proof.serialize().size();
  const std::size_t audit_bytes = audit_run().proof.serialize().size();
  const std::size_t n_rss = f.rss->system().num_constraints();
  const std::size_t n_audit = f.audit->system().num_constraints();
  const double ratio = static_cast<double>(n_audit) / static_cast<double>(n_rss);
  o.require(rss_bytes == audit_bytes, "equal proof size");
  o.require(rss_bytes == groth16::kProofBytes, "proof size equals the fixed layout");
  o.require(ratio >= 10, "constraint ratio >= 10");
  o.detail << "proof " << rss_bytes << " B (RSS) vs " << audit_bytes << " B (audit); constraints " << n_rss << " vs "
           << n_audit << " (ratio " << ratio << ")";
}

// Reference greedy matching with exact rational IoU, independent of the library.
std::pair<std::size_t, std::size_t> reference_tp(const ChallengeSet& cs, const std::vector<std::vector<Detection>>& dets) {
  auto overlap = [](std::uint64_t a0, std::uint64_t a1, std::uint64_t b0, std::uint64_t b1) -> std::uint64_t {
    std::uint64_t lo = std::max(a0, b0), hi = std::min(a1, b1);
    return hi > lo ? hi - lo : 0;
  };
  auto iou = [&](const Box& a, const Box& b) -> std::pair<std::uint64_t, std::uint64_t> {
    std::uint64_t in = overlap(a[0], a[2], b[0], b[2]) * overlap(a[1], a[3], b[1], b[3]);
    std::uint64_t u = (a[2] - a[0]) * (a[3] - a[1]) + (b[2] - b[0]) * (b[3] - b[1]) - in;
    return {in, u};
  };
  std::size_t tp = 0, crit = 0;
  for (std::size_t i = 0; i < cs.images.size(); ++i) {
    const auto& gts = cs.images[i].ground_truths;
    std::vector<bool> taken(gts.size(), false);
    for (const Detection& d : dets[i]) {
      int best = -1;
      for (std::size_t k = 0; k < gts.size(); ++k) {
        if (taken[k] || gts[k].class_id != d.class_id) continue;
        if (best < 0) {
          best = static_cast<int>(k);
          continue;
        }
        auto [n1, d1] = iou(d.box, gts[best].box);
        auto [n2, d2] = iou(d.box, gts[k].box);
        if (n1 * d2 < n2 * d1) best = static_cast<int>(k);
      }
      if (best < 0) continue;
      auto [n, u] = iou(d.box, gts[best].box);
      const auto& thr = cs.thresholds;
      if (d.confidence * thr.conf.den < thr.conf.num * cs.rho_prob) continue;
      if (u == 0 || n * thr.iou.den < thr.iou.num * u) continue;
      taken[best] = true;
      ++tp;
      crit += gts[best].critical;
    }
  }
  return {tp, crit};
}

void audit_reproduction(Outcome& o) {
  const Fleet& f = fleet();
  const ChallengeSet& cs = f.audit_sc.challenge;
  std::size_t gts = 0, crit = 0, dets = 0;
  for (std::size_t i = 0; i < cs.images.size(); ++i) {
    for (const auto& g : cs.images[i].ground_truths) crit += g.critical;
    gts += cs.images[i].ground_truths.size();
    dets += f.audit_sc.detections[i].size();
  }
  const AuditRun& run = audit_run();
  AuditOutcome native = evaluate_audit(cs, run.inst.detections);
  auto [ref_tp, ref_crit] = reference_tp(cs, run.inst.detections);
  const Fr pass = run.x[pub_index(f.audit->system(), "PASS")];
  o.require(cs.images.size() == 5 && gts == 20 && crit == 5 && dets == 16, "5 images, 20 GT, 5 critical, 16 detections");
  o.require(native.total_tp() == 15 && ref_tp == 15, "TP = 15");
  o.require(native.total_tp_crit() == 4 && ref_crit == 4, "TP_crit = 4");
  o.require(dets - native.total_tp() == 1, "one phantom");
  o.require(!native.pass && pass.is_zero(), "public PASS = 0");
  o.require(run.verified, "proof verifies");
  o.require(run.seconds < 120, "< 120 s");
  o.detail << "TP " << native.total_tp() << " (reference " << ref_tp << "), TP_crit " << native.total_tp_crit()
           << " (reference " << ref_crit << "), PASS " << pass.to_u64() << ", verified "
           << (run.verified ? "yes" : "no") << ", end-to-end " << run.seconds << " s";
}

// Reduced-width audit instances: 4-bit coordinates, two classes, confidence in tenths.
ChallengeSet small_challenge(Rng& rng, std::size_t images, std::size_t max_gts, std::size_t capacity) {
  ChallengeSet cs;
  cs.coord_bits = 4;
  cs.prob_bits = 4;
  cs.rho_prob = 10;
  cs.capacity = capacity;
  cs.thresholds = {{1, 2}, {1, 3}, {1, 2}, {1, 3}};
  auto box = [&] {
    std::uint64_t x1 = rng.uniform(16), y1 = rng.uniform(16);
    return Box{x1, y1, x1 + rng.uniform(16 - x1), y1 + rng.uniform(16 - y1)};
  };
  for (std::size_t i = 0; i < images; ++i) {
    ChallengeImage img;
    img.digest[0] = static_cast<std::uint8_t>(i);
    std::size_t k = rng.uniform(max_gts + 1);
    for (std::size_t g = 0; g < k; ++g) {
      Box b = g > 0 && rng.uniform(4) == 0 ? img.ground_truths.back().box : box();
      img.ground_truths.push_back({b, 1 + rng.uniform(2), rng.uniform(4) == 0});
    }
    cs.images.push_back(std::move(img));
  }
  return cs;
}

std::vector<std::vector<Detection>> small_detections(Rng& rng, const ChallengeSet& cs) {
  std::vector<std::vector<Detection>> out(cs.images.size());
  for (std::size_t i = 0; i < cs.images.size(); ++i) {
    const auto& gts = cs.images[i].ground_truths;
    std::size_t m = rng.uniform(cs.capacity + 1);
    for (std::size_t j = 0; j < m; ++j) {
      Detection d;
      if (!gts.empty() && rng.uniform(3) != 0) {
        const auto& g = gts[rng.uniform(gts.size())];
        d.box = g.box;
        for (auto& v : d.box) v = std::min<std::uint64_t>(15, v + rng.uniform(2));
        if (d.box[0] > d.box[2]) std::swap(d.box[0], d.box[2]);
        if (d.box[1] > d.box[3]) std::swap(d.box[1], d.box[3]);
        d.class_id = rng.uniform(5) == 0 ? 3 - g.class_id : g.class_id;
      } else {
        std::uint64_t x1 = rng.uniform(16), y1 = rng.uniform(16);
        d.box = {x1, y1, x1 + rng.uniform(16 - x1), y1 + rng.uniform(16 - y1)};
        d.class_id = 1 + rng.uniform(2);
      }
      d.confidence = rng.uniform(11);
      out[i].push_back(d);
    }
  }
  return out;
}

// Every partial matching of m slots into k ground truths.
void matchings(std::size_t m, std::size_t k, std::size_t j, std::uint32_t used, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (j == m) {
    out.push_back(cur);
    return;
  }
  cur[j] = -1;
  matchings(m, k, j + 1, used, cur, out);
  for (std::size_t g = 0; g < k; ++g) {
    if ((used >> g) & 1) continue;
    cur[j] = static_cast<int>(g);
    matchings(m, k, j + 1, used | (1u << g), cur, out);
  }
}

void circuit_native_equivalence(Outcome& o) {
  auto t0 = Clock::now();
  // RSS at 6-bit comparators: the full (Pr, d_current, d_safe) cube for a fixed theta, and
  // the full (Pr, theta) square against every ordering of the distances.
  std::size_t rss_cases = 0, rss_bad = 0;
  RssInstance base = make_rss_inputs(worked_rss_scenario(), RssConfig{}, kNow, Nonce{}, Fr::from_u64(5));
  auto sweep = [&](std::uint64_t theta, const std::vector<std::uint64_t>& pr_set,
                   const std::vector<std::pair<std::uint64_t, std::uint64_t>>& dist_set) {
    RssConfig cfg;
    cfg.prob_bits = 6;
    cfg.dist_bits = 6;
    cfg.theta = theta;
    cfg.rho_prob = 63;
    const auto cs = build_rss_circuit(cfg);
    const std::size_t safe = cs.find_wire("SAFE");
    auto in = base.assignment();
    in["rho_prob"] = Fr::from_u64(63);
    for (std::uint64_t pr : pr_set) {
      for (auto [dc, ds] : dist_set) {
        in["Pr"] = Fr::from_u64(pr);
        in["d_S_current"] = Fr::from_u64(dc);
        in["d_S"] = Fr::from_u64(ds);
        const Fr expect = Fr::from_u64(circuit_safe(pr, theta, dc, ds));
        r1cs::Witness w = cs.solve(in);
        bool ok = cs.is_satisfied(w) && w[safe] == expect;
        // The opposite outcome has no satisfying witness.
        ok = ok && !cs.is_satisfied(cs.solve(in, {{"SAFE", Fr::one() - expect}}));
        rss_bad += !ok;
        ++rss_cases;
      }
    }
  };
  std::vector<std::uint64_t> all(64);
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cube;
  for (std::uint64_t dc = 0; dc < 64; ++dc)
    for (std::uint64_t ds = 0; ds < 64; ++ds) cube.emplace_back(dc, ds);
  sweep(40, all, cube);
  for (std::uint64_t theta = 0; theta < 64; ++theta) sweep(theta, all, {{10, 20}, {20, 20}, {63, 0}, {0, 63}});

  // Audit, N <= 3 images and M_max <= 4: every match hint on every image.
  Rng rng(7);
  std::size_t audit_instances = 0, audit_bad = 0, hints = 0, passes = 0;
  for (std::size_t images = 1; images <= 3; ++images) {
    for (std::size_t cap = 1; cap <= 4; ++cap) {
      for (int trial = 0; trial < 25; ++trial) {
        ChallengeSet cs = small_challenge(rng, images, 3, cap);
        auto sys = build_audit_circuit(cs);
        AuditInstance inst = make_audit_inputs(cs, small_detections(rng, cs), kNow, Nonce{}, Fr::from_u64(trial));
        const auto in = inst.assignment(cs);
        const std::size_t pass_wire = sys.find_wire("PASS");
        std::set<bool> outcomes;
        std::size_t satisfying = 0;
        for (std::size_t i = 0; i < cs.images.size(); ++i) {
          const std::size_t k = cs.images[i].ground_truths.size();
          std::vector<std::vector<int>> all_m;
          std::vector<int> cur(cap, -1);
          matchings(cap, k, 0, 0, cur, all_m);
          for (const auto& mt : all_m) {
            r1cs::Assignment ov;
            for (std::size_t j = 0; j < cap; ++j)
              for (std::size_t g = 0; g < k; ++g)
                ov[match_label(i, j, g)] = mt[j] == static_cast<int>(g) ? Fr::one() : Fr::zero();
            r1cs::Witness w = sys.solve(in, ov);
            ++hints;
            if (sys.is_satisfied(w)) {
              ++satisfying;
              outcomes.insert(w[pass_wire] == Fr::one());
            }
          }
        }
        const bool flipped = sys.is_satisfied(sys.solve(in, {{"PASS", inst.pass ? Fr::zero() : Fr::one()}}));
        const bool ok = satisfying == cs.images.size() && outcomes.size() == 1 && *outcomes.begin() == inst.pass &&
                        !flipped;
        audit_bad += !ok;
        passes += inst.pass;
        ++audit_instances;
      }
    }
  }
  const double secs = seconds_since(t0);
  o.require(rss_bad == 0, "RSS outcome unique and native");
  o.require(audit_bad == 0, "audit outcome unique and native");
  o.require(passes > 0 && passes < audit_instances, "both audit outcomes exercised");
  o.require(secs < 600, "< 10 min");
  o.detail << "RSS " << rss_cases << " assignments, " << rss_bad << " divergent; audit " << audit_instances
           << " instances (" << passes << " PASS), " << hints << " hints, " << audit_bad << " divergent; " << secs
           << " s";
}

void protocol_defenses(Outcome& o) {
  const Fleet& f = fleet();
  auto t0 = Clock::now();
  Rng rng(8);
  std::size_t stage_checks = 0, stage_wrong = 0;
  auto expect = [&](const ProofPackage& p, VerifierState& st, std::int64_t now, RejectReason want, const char* what) {
    VerifyResult r = verify_package(st, p, now);
    ++stage_checks;
    if (r.reason != want || r.accepted != (want == RejectReason::kNone)) {
      ++stage_wrong;
      o.detail << " [" << what << ": got " << reason_name(r.reason) << ", want " << reason_name(want) << "]";
    }
  };
  auto fresh = [&](std::initializer_list<const Deployment*> deps) { return f.verifier(deps); };
  const ProofPackage good = f.rss_package(worked_rss_scenario(), kNow, rng);
  const auto& layout = f.rss->record().layout;

  {
    auto st = fresh({f.rss.get()});
    expect(good, *st, kNow, RejectReason::kNone, "honest");
    expect(good, *st, kNow + 1, RejectReason::kReplay, "replay");
  }
  {
    auto st = fresh({f.rss.get()});
    expect(good, *st, kNow + 6, RejectReason::kStale, "stale (6 s late)");
    expect(good, *st, kNow - 6, RejectReason::kStale, "stale (6 s early)");
    expect(good, *st, kNow + 5, RejectReason::kNone, "edge of the window");
  }
  {
    // Cross-context: RSS package at an audit-only verifier, at a verifier expecting the
    // audit application, re-signed under the audit tag, and the audit package at an
    // RSS-only verifier.
    auto audit_only = fresh({f.audit.get()});
    expect(good, *audit_only, kNow, RejectReason::kContext, "RSS package, audit-only verifier");
    auto both = fresh({f.rss.get(), f.audit.get()});
    both->expect_app(kAppAudit);
    expect(good, *both, kNow, RejectReason::kContext, "RSS package, audit expected");
    ProofPackage resigned = good;
    resigned.sigma = sign(f.vehicle, assemble_payload(sign_tag(kAppAudit), good.r1cs_hash, good.vk_hash, good.cert,
                                                      good.proof, good.commitment, good.timestamp, good.nonce));
    auto st = fresh({f.rss.get()});
    expect(resigned, *st, kNow, RejectReason::kSignature, "re-signed under the audit tag");

    r1cs::Assignment ain = audit_run().inst.assignment(f.audit_sc.challenge);
    stamp_inputs(ain, kNow, rng);
    ProofPackage apkg = create_package(f.audit->prover(f.vehicle, f.cert), ain, rng);
    auto rss_only = fresh({f.rss.get()});
    expect(apkg, *rss_only, kNow, RejectReason::kContext, "audit package, RSS-only verifier");
    auto ok = fresh({f.audit.get()});
    expect(apkg, *ok, kNow, RejectReason::kNone, "audit package, audit verifier");
  }
  // Single-field tampers, each against a fresh verifier.
  auto tamper = [&](const char* what, RejectReason want, const std::function<void(ProofPackage&)>& edit) {
    ProofPackage p = good;
    edit(p);
    auto st = fresh({f.rss.get()});
    expect(p, *st, kNow, want, what);
  };
  const std::size_t safe = pub_index(f.rss->system(), "SAFE");
  tamper("proof", RejectReason::kSignature,
         [&](ProofPackage& p) { p.proof = f.rss_package(worked_rss_scenario(), kNow, rng).proof; });
  tamper("X.SAFE", RejectReason::kProof, [&](ProofPackage& p) { p.public_inputs[safe] = Fr::one() - p.public_inputs[safe]; });
  tamper("X.ID", RejectReason::kProof, [&](ProofPackage& p) { p.public_inputs[pub_index(f.rss->system(), "ID")] += Fr::one(); });
  tamper("X.delta", RejectReason::kContext, [&](ProofPackage& p) { p.public_inputs[layout.delta_commit] += Fr::one(); });
  tamper("X.c", RejectReason::kContext, [&](ProofPackage& p) { p.public_inputs[layout.commitment] += Fr::one(); });
  tamper("X.T", RejectReason::kContext, [&](ProofPackage& p) { p.public_inputs[layout.timestamp] += Fr::one(); });
  tamper("X.nu", RejectReason::kContext, [&](ProofPackage& p) { p.public_inputs[layout.nonce[2]] += Fr::one(); });
  tamper("X truncated", RejectReason::kContext, [&](ProofPackage& p) { p.public_inputs.pop_back(); });
  tamper("c", RejectReason::kContext, [&](ProofPackage& p) { p.commitment += Fr::one(); });
  tamper("c with X.c", RejectReason::kSignature, [&](ProofPackage& p) {
    p.commitment += Fr::one();
    p.public_inputs[layout.commitment] = p.commitment;
  });
  tamper("T", RejectReason::kContext, [&](ProofPackage& p) { p.timestamp += 1; });
  tamper("T with X.T", RejectReason::kSignature, [&](ProofPackage& p) {
    p.timestamp += 1;
    p.public_inputs[layout.timestamp] += Fr::one();
  });
  tamper("nu", RejectReason::kContext, [&](ProofPackage& p) { p.nonce[5] ^= 0x40; });
  tamper("cert", RejectReason::kCertificate, [&](ProofPackage& p) { p.cert.not_after += 1; });
  tamper("vk_sig", RejectReason::kCertificate, [&](ProofPackage& p) { p.vk_sig = keygen(rng).vk; });
  tamper("vk_hash", RejectReason::kContext, [&](ProofPackage& p) { p.vk_hash[7] ^= 1; });
  tamper("r1cs_hash", RejectReason::kContext, [&](ProofPackage& p) { p.r1cs_hash[7] ^= 1; });
  tamper("sigma.s", RejectReason::kSignature, [&](ProofPackage& p) { p.sigma.s += Fr::one(); });
  tamper("re-certified key", RejectReason::kSignature, [&](ProofPackage& p) {
    SigningKey other = keygen(rng);
    p.cert = issue_certificate(f.ea, "VID-OTHER", other.vk, kNow - 10, kNow + 10);
    p.vk_sig = other.vk;
  });

  // Seeded simulation runs of every template.
  sim::SimEnvironment env(42);
  std::size_t runs = 0, false_accepts = 0, wrong = 0, honest_failures = 0, adversarial = 0, unbalanced = 0;
  for (auto name : sim::kTemplates) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      sim::SimReport r = sim::run_scenario(sim::make_scenario(name, {{"seed", std::to_string(seed)}}), env);
      ++runs;
      false_accepts += r.attack_successes;
      wrong += r.wrong_reasons;
      honest_failures += r.honest_failures;
      adversarial += r.adversarial_broadcasts;
      unbalanced += !r.balanced();
    }
  }
  const double secs = seconds_since(t0);
  o.require(stage_wrong == 0, "stage-correct reasons");
  o.require(false_accepts == 0, "0 false accepts in simulation");
  o.require(wrong == 0, "simulated rejects at the expected stage");
  o.require(honest_failures == 0 && unbalanced == 0, "honest traffic accepted, accounting balanced");
  o.detail << stage_checks << " direct checks, " << stage_wrong << " wrong; " << runs << " simulation runs, "
           << adversarial << " adversarial broadcasts, " << false_accepts << " false accepts, " << wrong
           << " wrong-stage rejects; " << secs << " s";
}

void domain_separators(Outcome& o) {
  const std::uint32_t got[] = {commit_tag(kAppPerception).value(), sign_tag(kAppPerception).value(),
                               commit_tag(kAppAudit).value(), sign_tag(kAppAudit).value()};
  // [App][Op][0x00][0x00] read big-endian.
  const std::uint32_t oracle[] = {0x00010000u, 0x00020000u, 0x01010000u, 0x01020000u};
  const std::uint32_t table[] = {65536, 131072, 16842752, 16908288};
  for (int i = 0; i < 4; ++i) {
    o.require(got[i] == table[i] && oracle[i] == table[i], "separator " + std::to_string(i));
    o.detail << (i ? ", " : "") << got[i];
  }
  o.require(build_domain_separator(0x01, 0x02, 0).value() == 16908288, "build_domain_separator");
  const Fr delta = audit_run().x[pub_index(fleet().audit->system(), kLabelDeltaCommit)];
  o.require(delta == Fr::from_u64(16842752), "audit proof carries 16842752");
}

void commitment_games(Outcome& o) {
  auto t0 = Clock::now();
  Rng rng(10);
  auto bind = commitment::game_bind(std::uint64_t{1} << 20, rng);
  auto hide = commitment::game_hide(10000, rng);
  auto trunc = commitment::game_collision(1000, 16, rng);
  o.require(bind.attempts == (std::uint64_t{1} << 20) && bind.collisions == 0, "binding: 0 collisions in 2^20");
  o.require(hide.samples == 10000 && std::fabs(hide.advantage) <= 3 * hide.sigma, "hiding advantage within 3 sigma");
  o.require(trunc.first_collision_at.has_value(), "16-bit variant collides within 1000 attempts");
  o.detail << "bind " << bind.collisions << "/" << bind.attempts << "; hide advantage " << hide.advantage
           << " (sigma " << hide.sigma << "); 16-bit first collision at "
           << (trunc.first_collision_at ? std::to_string(*trunc.first_collision_at) : std::string("none")) << " ("
           << trunc.collisions << " in 1000); " << seconds_since(t0) << " s";
}

void bench_structure(Outcome& o) {
  const Fleet& f = fleet();
  Rng rng(11);
  RssInstance inst = make_rss_inputs(worked_rss_scenario(), f.rss_cfg, kNow, random_nonce(rng), Fr::from_u64(77));
  cli::BenchReport rep = cli::run_bench(*f.rss, inst.assignment(), 100, rng);
  double sum = 0, mean_sum = 0;
  for (const auto& s : rep.stages) {
    sum += s.share_percent;
    mean_sum += s.mean_ms;
  }
  // Shares recomputed from the means.
  double recomputed = 0;
  for (const auto& s : rep.stages) recomputed += 100 * s.mean_ms / mean_sum;
  o.require(rep.runs == 100, "100 runs");
  o.require(rep.stages.size() == 3, "three stages");
  o.require(std::fabs(sum - 100) <= 0.5, "shares sum to 100 +- 0.5");
  o.require(std::fabs(recomputed - 100) <= 1e-9, "shares consistent with means");
  o.detail << "shares";
  for (const auto& s : rep.stages) o.detail << " " << s.name << "=" << s.share_percent << "%";
  o.detail << " (sum " << sum << ")";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"scaling roundtrip", scaling_roundtrip},
      {"RSS safe distance", rss_number},
      {"Groth16 completeness", groth16_completeness},
      {"soundness smoke", soundness_smoke},
      {"proof succinctness", proof_succinctness},
      {"audit scenario", audit_reproduction},
      {"circuit/native equivalence", circuit_native_equivalence},
      {"protocol defenses", protocol_defenses},
      {"domain separators", domain_separators},
      {"commitment games", commitment_games},
      {"benchmark structure", bench_structure},
  };
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.contains(i + 1)) continue;
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first << ": " << o.detail.str()
              << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}

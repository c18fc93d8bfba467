#pragma once

// Case study II: object-detector audit against a fixed challenge set.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hermes/protocol/package.hpp"
#include "hermes/r1cs/constraint_system.hpp"

namespace hermes::circuits {

/// x1, y1, x2, y2 in scaled integer coordinates.
using Box = std::array<std::uint64_t, 4>;

/// num / den with 0 <= num <= den, den > 0.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  /// a / b >= num / den, cross-multiplied. b = 0 compares 0 >= 0.
  bool met_by(std::uint64_t a, std::uint64_t b) const;
  bool operator==(const Ratio&) const = default;
};

struct AuditThresholds {
  Ratio conf{1, 2};
  Ratio iou{1, 2};
  Ratio prec{3, 4};
  Ratio rec{7, 10};

  void validate() const;
  bool operator==(const AuditThresholds&) const = default;
};

struct GroundTruth {
  Box box{};
  std::uint64_t class_id = 0;
  bool critical = false;
  bool operator==(const GroundTruth&) const = default;
};

/// Class 0 is reserved for padding.
struct Detection {
  Box box{};
  std::uint64_t class_id = 0;
  std::uint64_t confidence = 0;  // scaled by rho_prob
  bool operator==(const Detection&) const = default;
};

struct ChallengeImage {
  Digest digest{};
  std::vector<GroundTruth> ground_truths;
  bool operator==(const ChallengeImage&) const = default;
};

struct ChallengeSet {
  std::vector<ChallengeImage> images;
  std::size_t capacity = 4;  // M_max
  AuditThresholds thresholds;
  std::uint64_t rho_prob = 100;
  std::uint64_t rho_bbox = 1;
  unsigned coord_bits = 12;
  unsigned prob_bits = 16;

  /// UsageError on out-of-range parameters or malformed ground truths.
  void validate() const;
  /// The hashed text form; see parse_challenge_set.
  std::string canonical() const;
  Digest digest() const;
  /// SHA-256 of canonical() reduced into the field.
  Fr digest_element() const;
  bool operator==(const ChallengeSet&) const = default;
};

/// Canonical challenge text, one record per line, single spaces, decimal integers:
///
///   hermes-challenge 1
///   coord_bits <b>
///   prob_bits <b>
///   rho_prob <r>
///   rho_bbox <r>
///   capacity <M_max>
///   theta_conf <n>/<d>
///   theta_iou <n>/<d>
///   tau_prec <n>/<d>
///   tau_rec <n>/<d>
///   images <N>
///   image <64 lowercase hex digits> <K>
///   gt <class> <critical 0|1> <x1> <y1> <x2> <y2>      (K lines per image)
///
/// Parsing skips blank lines and '#' comments; canonical() re-renders exactly the form above.
ChallengeSet parse_challenge_set(std::string_view text);

/// Detection file:
///
///   hermes-detections 1
///   image <index> <count>
///   det <class> <confidence in [0,1]> <x1> <y1> <x2> <y2>
///
/// Confidence is scaled by `rho_prob` with floor.
std::vector<std::vector<Detection>> parse_detections(std::string_view text, std::size_t num_images,
                                                     std::uint64_t rho_prob);
std::string format_detections(const std::vector<std::vector<Detection>>& dets, std::uint64_t rho_prob);

struct IouParts {
  std::uint64_t inter = 0;
  std::uint64_t uni = 0;
};

std::uint64_t box_area(const Box& b);
IouParts iou_parts(const Box& a, const Box& b);
/// inter * den >= num * union; a zero union only passes when theta is zero.
bool iou_compare(const Box& a, const Box& b, const Ratio& theta);

struct MatchResult {
  std::size_t tp = 0;
  std::size_t tp_crit = 0;
  std::vector<std::optional<std::size_t>> match;  // per detection: matched ground truth
};

/// Greedy matching in detection order. UsageError when `dets` is not sorted descending by
/// confidence.
MatchResult greedy_match(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                         const AuditThresholds& thr, std::uint64_t rho_prob);

struct MetricResult {
  bool pass = false;
  bool crit_pass = false;
};

/// Precision and recall gates plus full critical recall. UsageError on inconsistent counts.
MetricResult check_metrics(std::size_t tp, std::size_t tp_crit, std::size_t m, std::size_t k,
                           std::size_t total_crit, const AuditThresholds& thr);

struct SortResult {
  std::vector<Detection> dets;
  std::vector<std::size_t> perm;  // perm[i] = original index of sorted position i
};

/// Stable sort, descending confidence.
SortResult off_circuit_sort(const std::vector<Detection>& dets);

struct AuditOutcome {
  std::vector<MatchResult> matches;
  std::vector<MetricResult> metrics;
  bool pass = false;

  std::size_t total_tp() const;
  std::size_t total_tp_crit() const;
};

/// Native evaluation of a whole challenge set. Detections per image must be sorted.
AuditOutcome evaluate_audit(const ChallengeSet& cs, const std::vector<std::vector<Detection>>& dets);

struct AuditInstance {
  std::vector<std::vector<Detection>> detections;  // sorted, unpadded
  std::uint64_t timestamp = 0;
  protocol::Nonce nonce{};
  Fr s_sec;
  Fr c;
  bool pass = false;

  /// Labelled inputs for a circuit built from `cs`.
  r1cs::Assignment assignment(const ChallengeSet& cs) const;
  /// Delta, N, padded detections as [id, Pr, x1, y1, x2, y2], T, nu (s_sec excluded).
  std::vector<Fr> commitment_message(const ChallengeSet& cs) const;
  /// The expected public vector, in X order.
  std::vector<Fr> public_inputs(const ChallengeSet& cs) const;
};

/// Sorts each image's detections, checks capacity and ranges, evaluates the audit and
/// computes c. UsageError on bad input.
AuditInstance make_audit_inputs(const ChallengeSet& cs, std::vector<std::vector<Detection>> dets,
                                std::uint64_t timestamp, const protocol::Nonce& nonce, const Fr& s_sec);

/// Wire labels shared by the circuit, the assignment and the tests.
std::string det_label(std::size_t image, std::size_t slot, std::string_view field);
std::string gt_label(std::size_t image, std::size_t index, std::string_view field);
std::string match_label(std::size_t image, std::size_t slot, std::size_t gt);

/// Unrolled circuit for the given challenge set. UsageError when a parameter cannot be
/// represented (zero confidence or IoU threshold, widths beyond the field).
r1cs::ConstraintSystem build_audit_circuit(const ChallengeSet& cs);

/// Five images, twenty ground truths (one critical each), sixteen detections with fifteen
/// true positives, one phantom, and one missed critical object.
struct AuditScenario {
  ChallengeSet challenge;
  std::vector<std::vector<Detection>> detections;
};
AuditScenario five_image_audit_scenario();

}  // namespace hermes::circuits
